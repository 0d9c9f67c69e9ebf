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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cai/group.hpp"

namespace cai {

struct KeyPair {
  Scalar sk;
  Element pk;  // g^sk
};

/// ElGamal ciphertext (g^r, m * pk^r).
struct Ciphertext {
  Element u;
  Element w;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

/// A ballot of L races is encrypted element-wise.
using BallotCiphertext = std::vector<Ciphertext>;
/// One alphabet index per race.
using Vote = std::vector<std::size_t>;

KeyPair keygen(GroupContext& ctx, EntropySource& rng);
KeyPair keypair_from_secret(GroupContext& ctx, const Scalar& sk);

Ciphertext encrypt(GroupContext& ctx, const Element& pk, const Element& m, const Scalar& r);
Element decrypt(GroupContext& ctx, const Scalar& sk, const Ciphertext& c);

/// (u * g^x, w * pk^x) = Enc(pk, m; r + x). Two exponentiations.
Ciphertext rerandomize(GroupContext& ctx, const Element& pk, const Ciphertext& c, const Scalar& x);

/// Recovers m from c given its encryption randomness, without the secret key.
/// Two exponentiations. Throws Error{RandomnessMismatch} when u != g^r.
Element special_decrypt(GroupContext& ctx, const Element& pk, const Ciphertext& c, const Scalar& r);

Bytes encode_ciphertext(const Ciphertext& c);
Ciphertext decode_ciphertext(const Group& group, ByteView bytes);
Bytes encode_ballot(const BallotCiphertext& ballot);
/// Length must be a positive multiple of the ciphertext size.
BallotCiphertext decode_ballot(const Group& group, ByteView bytes);
/// SHA-256 over a domain tag and the canonical ballot encoding.
Digest ballot_digest(const BallotCiphertext& ballot);

/// Invertible table between a finite candidate alphabet and group elements:
/// label i maps to g^(i+1), so no plaintext is ever the identity and
/// decoding is a lookup rather than a discrete-log search.
class VoteEncoding {
 public:
  /// Throws Error{InvalidConfig} for fewer than two labels, duplicate labels,
  /// or more labels than the group has non-identity elements.
  VoteEncoding(const Group& group, std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  /// Throws Error{UnknownVote}.
  std::size_t index_of(std::string_view label) const;

  const Element& encode(std::size_t index) const;
  std::optional<std::size_t> try_decode(const Element& m) const;
  /// Throws Error{UnknownVote} for elements outside the alphabet image.
  std::size_t decode(const Element& m) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Element> elements_;
};

}  // namespace cai
