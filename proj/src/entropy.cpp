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

#include "cai/entropy.hpp"

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

#include "cai/error.hpp"

namespace cai {

std::uint64_t EntropySource::next_u64() {
  std::array<std::uint8_t, 8> buf;
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) v = v << 8 | b;
  return v;
}

SystemEntropy::SystemEntropy() {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
}

void SystemEntropy::fill(std::span<std::uint8_t> out) { randombytes_buf(out.data(), out.size()); }

SeededEntropy::SeededEntropy(std::uint64_t seed, std::string_view label) {
  key_ = Sha256().update("cai/seeded-entropy/v1").update(ByteWriter().u64(seed).bytes()).update(label).finish();
}

void SeededEntropy::refill() {
  static constexpr std::array<std::uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> kNonce{};
  block_.fill(0);
  crypto_stream_chacha20_ietf_xor_ic(block_.data(), block_.data(), block_.size(), kNonce.data(),
                                     counter_++, key_.data());
  used_ = 0;
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (used_ == block_.size()) refill();
    std::size_t n = std::min(out.size() - done, block_.size() - used_);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), n, out.begin() + static_cast<std::ptrdiff_t>(done));
    used_ += n;
    done += n;
  }
}

void BufferEntropy::fill(std::span<std::uint8_t> out) {
  if (remaining() < out.size()) throw Error(ErrorCode::EntropyExhausted, "test entropy buffer drained");
  std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(), out.begin());
  pos_ += out.size();
}

}  // namespace cai
