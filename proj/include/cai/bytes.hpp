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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cai {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

std::string to_base64(ByteView bytes);
/// Throws Error{MalformedMessage} on anything that is not strict padded base64.
Bytes from_base64(std::string_view text);

Digest sha256(ByteView bytes);
std::array<std::uint8_t, 64> sha512(ByteView bytes);

class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteView bytes);
  Sha256& update(std::string_view text);
  Digest finish();

 private:
  alignas(16) std::array<std::uint8_t, 128> state_{};
};

inline ByteView as_bytes(std::string_view text) {
  return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

/// Fixed 16-byte identifier (voter ids, election ids, session tokens).
/// Short ASCII names are stored zero padded so they stay readable.
template <class Tag>
class Id16 {
 public:
  static constexpr std::size_t kSize = 16;

  Id16() = default;
  explicit Id16(const std::array<std::uint8_t, kSize>& raw) : raw_(raw) {}

  static Id16 from_name(std::string_view name);
  static Id16 from_bytes(ByteView bytes);

  std::string name() const;
  const std::array<std::uint8_t, kSize>& raw() const { return raw_; }
  ByteView bytes() const { return raw_; }

  friend auto operator<=>(const Id16&, const Id16&) = default;

 private:
  std::array<std::uint8_t, kSize> raw_{};
};

struct VoterIdTag;
struct ElectionIdTag;
struct TokenTag;
using VoterId = Id16<VoterIdTag>;
using ElectionId = Id16<ElectionIdTag>;
using SessionToken = Id16<TokenTag>;

class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(ByteView bytes);

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Bounds-checked cursor; every short read throws Error{BadLength}.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteView take(std::size_t n);
  std::size_t remaining() const { return in_.size() - pos_; }
  void expect_end() const;

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace cai
