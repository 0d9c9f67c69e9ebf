// Copyright 2026 The cai-verify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "cai/bytes.hpp"

namespace cai {

/// Injectable randomness. Protocol code only ever draws through this
/// interface, so a seeded source makes every transcript reproducible.
class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64();
};

/// Operating-system randomness.
class SystemEntropy final : public EntropySource {
 public:
  SystemEntropy();
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic ChaCha20 keystream keyed by (seed, label). Distinct labels
/// give independent streams, which is how the harness hands each role its own
/// coins.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed, std::string_view label = {});
  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, 64> block_{};
  std::size_t used_ = 64;
  std::uint32_t counter_ = 0;
};

/// Replays a fixed byte string, then throws Error{EntropyExhausted}.
class BufferEntropy final : public EntropySource {
 public:
  explicit BufferEntropy(Bytes bytes) : bytes_(std::move(bytes)) {}
  void fill(std::span<std::uint8_t> out) override;
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  Bytes bytes_;
  std::size_t pos_ = 0;
};

}  // namespace cai
