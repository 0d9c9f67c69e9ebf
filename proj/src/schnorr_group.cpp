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

#include <limits>
#include <stdexcept>

#include "cai/error.hpp"
#include "cai/group.hpp"

namespace cai {
namespace {

using u128 = unsigned __int128;

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::size_t byte_width(std::uint64_t max_value) {
  std::size_t width = 1;
  while (width < 8 && (max_value >> (8 * width)) != 0) ++width;
  return width;
}

std::uint64_t read_be(ByteView bytes) {
  std::uint64_t v = 0;
  for (auto b : bytes) v = v << 8 | b;
  return v;
}

std::uint64_t reduce_be(ByteView bytes, std::uint64_t mod) {
  u128 acc = 0;
  for (auto b : bytes) acc = (acc << 8 | b) % mod;
  return static_cast<std::uint64_t>(acc);
}

Bytes tagged(std::string_view dst, ByteView msg) {
  return ByteWriter().u8(static_cast<std::uint8_t>(dst.size())).raw(as_bytes(dst)).raw(msg).bytes();
}

}  // namespace

SchnorrGroup::SchnorrGroup(std::uint64_t p, std::uint64_t q, std::uint64_t g) : p_(p), q_(q), g_(g) {
  if (p >= (std::uint64_t{1} << 32) || !is_prime(p) || !is_prime(q) || p != 2 * q + 1) {
    throw std::invalid_argument("SchnorrGroup needs a safe prime p = 2q + 1 below 2^32");
  }
  if (g <= 1 || g >= p || pow_mod(g, q, p) != 1) {
    throw std::invalid_argument("SchnorrGroup generator must have order q");
  }
  element_size_ = byte_width(p - 1);
  scalar_size_ = byte_width(q - 1);
  name_ = "schnorr-p" + std::to_string(p);
}

Bytes SchnorrGroup::encode(std::uint64_t v, std::size_t width) {
  Bytes out(width);
  for (std::size_t i = 0; i < width; ++i) out[width - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

std::uint64_t SchnorrGroup::pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) const {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp != 0) {
    if (exp & 1) result = static_cast<std::uint64_t>(u128(result) * base % mod);
    base = static_cast<std::uint64_t>(u128(base) * base % mod);
    exp >>= 1;
  }
  return result;
}

Element SchnorrGroup::make_element(std::uint64_t v) const { return Element::unchecked(encode(v, element_size_)); }
Scalar SchnorrGroup::make_scalar(std::uint64_t v) const { return Scalar::unchecked(encode(v % q_, scalar_size_)); }

std::uint64_t SchnorrGroup::value(const Element& e) const { return read_be(e.bytes()); }
std::uint64_t SchnorrGroup::value(const Scalar& s) const { return read_be(s.bytes()); }

Element SchnorrGroup::generator() const { return make_element(g_); }
Element SchnorrGroup::identity() const { return make_element(1); }

Element SchnorrGroup::mul(const Element& a, const Element& b) const {
  return make_element(static_cast<std::uint64_t>(u128(value(a)) * value(b) % p_));
}

Element SchnorrGroup::inverse(const Element& a) const { return make_element(pow_mod(value(a), p_ - 2, p_)); }

Element SchnorrGroup::power(const Element& base, const Scalar& s) const {
  return make_element(pow_mod(value(base), value(s), p_));
}

Element SchnorrGroup::decode_element(ByteView bytes) const {
  if (bytes.size() != element_size_) throw Error(ErrorCode::BadLength, "element encoding");
  std::uint64_t v = read_be(bytes);
  if (v == 0 || v >= p_ || pow_mod(v, q_, p_) != 1) {
    throw Error(ErrorCode::NotInGroup, std::to_string(v) + " is not in the order-" + std::to_string(q_) + " subgroup");
  }
  return Element::unchecked(bytes);
}

Scalar SchnorrGroup::decode_scalar(ByteView bytes) const {
  if (bytes.size() != scalar_size_) throw Error(ErrorCode::BadLength, "scalar encoding");
  if (read_be(bytes) >= q_) throw Error(ErrorCode::ScalarOutOfRange, "scalar not below q");
  return Scalar::unchecked(bytes);
}

Scalar SchnorrGroup::scalar_from_u64(std::uint64_t v) const { return make_scalar(v % q_); }
Scalar SchnorrGroup::add(const Scalar& a, const Scalar& b) const { return make_scalar((value(a) + value(b)) % q_); }
Scalar SchnorrGroup::mul(const Scalar& a, const Scalar& b) const {
  return make_scalar(static_cast<std::uint64_t>(u128(value(a)) * value(b) % q_));
}
Scalar SchnorrGroup::neg(const Scalar& a) const { return make_scalar((q_ - value(a)) % q_); }

Scalar SchnorrGroup::inv(const Scalar& a) const {
  if (value(a) == 0) throw std::domain_error("inverse of zero scalar");
  return make_scalar(pow_mod(value(a), q_ - 2, q_));
}

Scalar SchnorrGroup::random_scalar(EntropySource& rng) const {
  // Reject the low 2^64 mod q values so the reduction is exactly uniform.
  const std::uint64_t threshold = (0 - q_) % q_;
  for (;;) {
    std::uint64_t v = rng.next_u64();
    if (v >= threshold) return make_scalar(v % q_);
  }
}

Scalar SchnorrGroup::hash_to_scalar(std::string_view dst, ByteView msg) const {
  return make_scalar(reduce_be(sha512(tagged(dst, msg)), q_));
}

Element SchnorrGroup::hash_to_element(std::string_view dst, ByteView msg) const {
  // Squaring maps Z_p^* onto the quadratic residues, which are exactly the
  // order-q subgroup when p is a safe prime.
  Bytes input = tagged(dst, msg);
  input.push_back(0);
  for (std::uint8_t counter = 0;; ++counter) {
    input.back() = counter;
    std::uint64_t v = reduce_be(sha512(input), p_);
    std::uint64_t sq = static_cast<std::uint64_t>(u128(v) * v % p_);
    if (sq > 1) return make_element(sq);
  }
}

std::shared_ptr<const SchnorrGroup> tiny_group() {
  static const auto group = std::make_shared<const SchnorrGroup>(23, 11, 2);
  return group;
}

}  // namespace cai
