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

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "cai/bytes.hpp"
#include "cai/entropy.hpp"

namespace cai {

/// Canonical fixed-length encoding of a group value. The group that produced
/// a value owns its meaning; the bytes are what goes on the wire.
template <class Tag>
class Encoded {
 public:
  static constexpr std::size_t kCapacity = 32;

  Encoded() = default;

  /// No validation; use Group::decode_* for untrusted input.
  static Encoded unchecked(ByteView bytes) {
    Encoded out;
    out.size_ = static_cast<std::uint8_t>(std::min(bytes.size(), kCapacity));
    std::copy_n(bytes.begin(), out.size_, out.data_.begin());
    return out;
  }

  ByteView bytes() const { return {data_.data(), size_}; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  friend auto operator<=>(const Encoded&, const Encoded&) = default;

 private:
  std::array<std::uint8_t, kCapacity> data_{};
  std::uint8_t size_ = 0;
};

struct ScalarTag;
struct ElementTag;
/// Exponent in Z_q, big-endian.
using Scalar = Encoded<ScalarTag>;
/// Member of the prime-order group G.
using Element = Encoded<ElementTag>;

/// Prime-order group G = <g> of order q. All higher layers are written
/// against this interface only.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t element_size() const = 0;
  virtual std::size_t scalar_size() const = 0;

  virtual Element generator() const = 0;
  virtual Element identity() const = 0;
  virtual Element mul(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  /// Uncounted base^s. Protocol code uses GroupContext::exp instead.
  virtual Element power(const Element& base, const Scalar& s) const = 0;

  /// Throws Error{BadLength} or Error{NotInGroup}.
  virtual Element decode_element(ByteView bytes) const = 0;
  /// Throws Error{BadLength} or Error{ScalarOutOfRange}.
  virtual Scalar decode_scalar(ByteView bytes) const = 0;

  virtual Scalar scalar_from_u64(std::uint64_t v) const = 0;
  virtual Scalar add(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar mul(const Scalar& a, const Scalar& b) const = 0;
  virtual Scalar neg(const Scalar& a) const = 0;
  /// Throws std::domain_error for zero.
  virtual Scalar inv(const Scalar& a) const = 0;

  /// Uniform over Z_q.
  virtual Scalar random_scalar(EntropySource& rng) const = 0;
  /// Domain-separated hash into Z_q.
  virtual Scalar hash_to_scalar(std::string_view dst, ByteView msg) const = 0;
  /// Domain-separated hash onto a non-identity element of unknown discrete log.
  virtual Element hash_to_element(std::string_view dst, ByteView msg) const = 0;

  Element div(const Element& a, const Element& b) const { return mul(a, inverse(b)); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }
  Scalar zero() const { return scalar_from_u64(0); }
  Scalar one() const { return scalar_from_u64(1); }
  bool is_identity(const Element& e) const { return e == identity(); }
};

/// Schnorr group: the order-q subgroup of Z_p^* for a safe prime p = 2q + 1.
/// Small instances are the brute-forceable test backend.
class SchnorrGroup final : public Group {
 public:
  /// Validates that p = 2q + 1, both prime, and g generates the order-q subgroup.
  SchnorrGroup(std::uint64_t p, std::uint64_t q, std::uint64_t g);

  std::uint64_t p() const { return p_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t value(const Element& e) const;
  std::uint64_t value(const Scalar& s) const;
  Element element(std::uint64_t v) const { return decode_element(encode(v, element_size_)); }

  std::string_view name() const override { return name_; }
  std::size_t element_size() const override { return element_size_; }
  std::size_t scalar_size() const override { return scalar_size_; }
  Element generator() const override;
  Element identity() const override;
  Element mul(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  Element power(const Element& base, const Scalar& s) const override;
  Element decode_element(ByteView bytes) const override;
  Scalar decode_scalar(ByteView bytes) const override;
  Scalar scalar_from_u64(std::uint64_t v) const override;
  Scalar add(const Scalar& a, const Scalar& b) const override;
  Scalar mul(const Scalar& a, const Scalar& b) const override;
  Scalar neg(const Scalar& a) const override;
  Scalar inv(const Scalar& a) const override;
  Scalar random_scalar(EntropySource& rng) const override;
  Scalar hash_to_scalar(std::string_view dst, ByteView msg) const override;
  Element hash_to_element(std::string_view dst, ByteView msg) const override;

 private:
  static Bytes encode(std::uint64_t v, std::size_t width);
  std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) const;
  Element make_element(std::uint64_t v) const;
  Scalar make_scalar(std::uint64_t v) const;

  std::uint64_t p_, q_, g_;
  std::size_t element_size_, scalar_size_;
  std::string name_;
};

/// ristretto255 (prime order 2^252 + 27742317777372353535851937790883648493),
/// backed by libsodium. 32-byte canonical encodings; the identity encodes as
/// all zeros.
class Ristretto255Group final : public Group {
 public:
  Ristretto255Group();

  std::string_view name() const override { return "ristretto255"; }
  std::size_t element_size() const override { return 32; }
  std::size_t scalar_size() const override { return 32; }
  Element generator() const override;
  Element identity() const override;
  Element mul(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  Element power(const Element& base, const Scalar& s) const override;
  Element decode_element(ByteView bytes) const override;
  Scalar decode_scalar(ByteView bytes) const override;
  Scalar scalar_from_u64(std::uint64_t v) const override;
  Scalar add(const Scalar& a, const Scalar& b) const override;
  Scalar mul(const Scalar& a, const Scalar& b) const override;
  Scalar neg(const Scalar& a) const override;
  Scalar inv(const Scalar& a) const override;
  Scalar random_scalar(EntropySource& rng) const override;
  Scalar hash_to_scalar(std::string_view dst, ByteView msg) const override;
  Element hash_to_element(std::string_view dst, ByteView msg) const override;

 private:
  Element generator_;
};

/// p = 23, q = 11, g = 2.
std::shared_ptr<const SchnorrGroup> tiny_group();
std::shared_ptr<const Ristretto255Group> production_group();
/// "tiny" or "production"; throws Error{InvalidConfig} otherwise.
std::shared_ptr<const Group> group_by_name(std::string_view name);

/// Per-role arithmetic context. Every exponentiation a role performs goes
/// through exp() so the count reflects exactly what that role computed.
/// Single owner; not shared between threads.
class GroupContext {
 public:
  explicit GroupContext(std::shared_ptr<const Group> group) : group_(std::move(group)) {}

  const Group& group() const { return *group_; }
  const std::shared_ptr<const Group>& shared_group() const { return group_; }

  Element exp(const Element& base, const Scalar& s) {
    ++exponentiations_;
    return group_->power(base, s);
  }
  Element exp_g(const Scalar& s) { return exp(group_->generator(), s); }

  std::uint64_t exponentiations() const { return exponentiations_; }
  void reset_count() { exponentiations_ = 0; }

 private:
  std::shared_ptr<const Group> group_;
  std::uint64_t exponentiations_ = 0;
};

}  // namespace cai
