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

#include "cai/bytes.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "cai/error.hpp"

namespace cai {

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::MalformedMessage, "odd-length hex");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorCode::MalformedMessage, "bad hex digit");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

std::string to_base64(ByteView bytes) {
  constexpr int kVariant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_ENCODED_LEN(bytes.size(), kVariant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), kVariant);
  out.resize(out.size() - 1);  // drop the terminator
  return out;
}

Bytes from_base64(std::string_view text) {
  Bytes out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedMessage, "invalid base64");
  }
  out.resize(len);
  return out;
}

Digest sha256(ByteView bytes) {
  Digest out;
  crypto_hash_sha256(out.data(), bytes.data(), bytes.size());
  return out;
}

std::array<std::uint8_t, 64> sha512(ByteView bytes) {
  std::array<std::uint8_t, 64> out;
  crypto_hash_sha512(out.data(), bytes.data(), bytes.size());
  return out;
}

Sha256::Sha256() {
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256& Sha256::update(ByteView bytes) {
  crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                            bytes.data(), bytes.size());
  return *this;
}

Sha256& Sha256::update(std::string_view text) { return update(as_bytes(text)); }

Digest Sha256::finish() {
  Digest out;
  crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                           out.data());
  return out;
}

template <class Tag>
Id16<Tag> Id16<Tag>::from_name(std::string_view name) {
  if (name.empty() || name.size() > kSize) {
    throw Error(ErrorCode::BadLength, "identifier must be 1..16 bytes: '" + std::string(name) + "'");
  }
  Id16 id;
  std::memcpy(id.raw_.data(), name.data(), name.size());
  return id;
}

template <class Tag>
Id16<Tag> Id16<Tag>::from_bytes(ByteView bytes) {
  if (bytes.size() != kSize) throw Error(ErrorCode::BadLength, "identifier must be 16 bytes");
  Id16 id;
  std::copy(bytes.begin(), bytes.end(), id.raw_.begin());
  return id;
}

template <class Tag>
std::string Id16<Tag>::name() const {
  auto end = std::find(raw_.begin(), raw_.end(), std::uint8_t{0});
  bool printable = std::all_of(raw_.begin(), end, [](std::uint8_t c) { return c >= 0x20 && c < 0x7f; }) &&
                   std::all_of(end, raw_.end(), [](std::uint8_t c) { return c == 0; });
  if (printable && end != raw_.begin()) return std::string(raw_.begin(), end);
  return to_hex(raw_);
}

template class Id16<VoterIdTag>;
template class Id16<ElectionIdTag>;
template class Id16<TokenTag>;

ByteWriter& ByteWriter::u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

ByteWriter& ByteWriter::raw(ByteView bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
  return *this;
}

std::uint8_t ByteReader::u8() { return take(1)[0]; }

std::uint32_t ByteReader::u32() {
  std::uint32_t v = 0;
  for (auto b : take(4)) v = v << 8 | b;
  return v;
}

std::uint64_t ByteReader::u64() {
  std::uint64_t v = 0;
  for (auto b : take(8)) v = v << 8 | b;
  return v;
}

ByteView ByteReader::take(std::size_t n) {
  if (remaining() < n) throw Error(ErrorCode::BadLength, "truncated input");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expect_end() const {
  if (remaining() != 0) throw Error(ErrorCode::BadLength, "trailing bytes");
}

}  // namespace cai
