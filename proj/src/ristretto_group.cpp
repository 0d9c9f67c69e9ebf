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

#include <sodium.h>

#include <algorithm>
#include <stdexcept>

#include "cai/error.hpp"
#include "cai/group.hpp"

namespace cai {
namespace {

using Le32 = std::array<std::uint8_t, 32>;

Le32 to_le(const Scalar& s) {
  Le32 out{};
  auto be = s.bytes();
  std::reverse_copy(be.begin(), be.end(), out.begin());
  return out;
}

Scalar from_le(const Le32& le) {
  Le32 be;
  std::reverse_copy(le.begin(), le.end(), be.begin());
  return Scalar::unchecked(be);
}

Le32 reduce_wide(const std::array<std::uint8_t, 64>& wide) {
  Le32 out;
  crypto_core_ristretto255_scalar_reduce(out.data(), wide.data());
  return out;
}

Bytes tagged(std::string_view dst, ByteView msg) {
  return ByteWriter().u8(static_cast<std::uint8_t>(dst.size())).raw(as_bytes(dst)).raw(msg).bytes();
}

}  // namespace

Ristretto255Group::Ristretto255Group() {
  if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  Le32 one{};
  one[0] = 1;
  Le32 g;
  crypto_scalarmult_ristretto255_base(g.data(), one.data());
  generator_ = Element::unchecked(g);
}

Element Ristretto255Group::generator() const { return generator_; }
Element Ristretto255Group::identity() const { return Element::unchecked(Le32{}); }

Element Ristretto255Group::mul(const Element& a, const Element& b) const {
  Le32 out;
  if (crypto_core_ristretto255_add(out.data(), a.bytes().data(), b.bytes().data()) != 0) {
    throw Error(ErrorCode::NotInGroup, "ristretto255 add on invalid encoding");
  }
  return Element::unchecked(out);
}

Element Ristretto255Group::inverse(const Element& a) const {
  Le32 out;
  Le32 zero{};
  if (crypto_core_ristretto255_sub(out.data(), zero.data(), a.bytes().data()) != 0) {
    throw Error(ErrorCode::NotInGroup, "ristretto255 negate on invalid encoding");
  }
  return Element::unchecked(out);
}

Element Ristretto255Group::power(const Element& base, const Scalar& s) const {
  Le32 n = to_le(s);
  Le32 out{};
  int rc = base == generator_ ? crypto_scalarmult_ristretto255_base(out.data(), n.data())
                              : crypto_scalarmult_ristretto255(out.data(), n.data(), base.bytes().data());
  // libsodium signals an identity result with -1 but still writes its
  // (all-zero) encoding.
  if (rc != 0 && std::any_of(out.begin(), out.end(), [](std::uint8_t b) { return b != 0; })) {
    throw Error(ErrorCode::NotInGroup, "ristretto255 scalar multiplication failed");
  }
  return Element::unchecked(out);
}

Element Ristretto255Group::decode_element(ByteView bytes) const {
  if (bytes.size() != 32) throw Error(ErrorCode::BadLength, "ristretto255 element must be 32 bytes");
  const bool is_identity = std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
  if (is_identity) return identity();
  // libsodium 1.0.18 ignores the top bit when decoding, so canonicity is
  // checked by re-encoding (p + identity) and comparing.
  Le32 reencoded;
  Le32 zero{};
  if (crypto_core_ristretto255_is_valid_point(bytes.data()) != 1 ||
      crypto_core_ristretto255_add(reencoded.data(), bytes.data(), zero.data()) != 0 ||
      !std::equal(reencoded.begin(), reencoded.end(), bytes.begin())) {
    throw Error(ErrorCode::NotInGroup, "not a canonical ristretto255 encoding");
  }
  return Element::unchecked(bytes);
}

Scalar Ristretto255Group::decode_scalar(ByteView bytes) const {
  if (bytes.size() != 32) throw Error(ErrorCode::BadLength, "ristretto255 scalar must be 32 bytes");
  Scalar s = Scalar::unchecked(bytes);
  std::array<std::uint8_t, 64> wide{};
  Le32 le = to_le(s);
  std::copy(le.begin(), le.end(), wide.begin());
  if (reduce_wide(wide) != le) throw Error(ErrorCode::ScalarOutOfRange, "scalar not below the group order");
  return s;
}

Scalar Ristretto255Group::scalar_from_u64(std::uint64_t v) const {
  Le32 le{};
  for (std::size_t i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return from_le(le);
}

Scalar Ristretto255Group::add(const Scalar& a, const Scalar& b) const {
  Le32 out, x = to_le(a), y = to_le(b);
  crypto_core_ristretto255_scalar_add(out.data(), x.data(), y.data());
  return from_le(out);
}

Scalar Ristretto255Group::mul(const Scalar& a, const Scalar& b) const {
  Le32 out, x = to_le(a), y = to_le(b);
  crypto_core_ristretto255_scalar_mul(out.data(), x.data(), y.data());
  return from_le(out);
}

Scalar Ristretto255Group::neg(const Scalar& a) const {
  Le32 out, x = to_le(a);
  crypto_core_ristretto255_scalar_negate(out.data(), x.data());
  return from_le(out);
}

Scalar Ristretto255Group::inv(const Scalar& a) const {
  Le32 out, x = to_le(a);
  if (crypto_core_ristretto255_scalar_invert(out.data(), x.data()) != 0) {
    throw std::domain_error("inverse of zero scalar");
  }
  return from_le(out);
}

Scalar Ristretto255Group::random_scalar(EntropySource& rng) const {
  // 512 bits reduced mod the 253-bit order: bias below 2^-250.
  std::array<std::uint8_t, 64> wide;
  rng.fill(wide);
  return from_le(reduce_wide(wide));
}

Scalar Ristretto255Group::hash_to_scalar(std::string_view dst, ByteView msg) const {
  return from_le(reduce_wide(sha512(tagged(dst, msg))));
}

Element Ristretto255Group::hash_to_element(std::string_view dst, ByteView msg) const {
  auto wide = sha512(tagged(dst, msg));
  Le32 out;
  crypto_core_ristretto255_from_hash(out.data(), wide.data());
  return Element::unchecked(out);
}

std::shared_ptr<const Ristretto255Group> production_group() {
  static const auto group = std::make_shared<const Ristretto255Group>();
  return group;
}

std::shared_ptr<const Group> group_by_name(std::string_view name) {
  if (name == "tiny") return tiny_group();
  if (name == "production") return production_group();
  throw Error(ErrorCode::InvalidConfig, "unknown group '" + std::string(name) + "' (expected tiny or production)");
}

}  // namespace cai
