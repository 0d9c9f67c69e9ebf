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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cai/bytes.hpp"
#include "cai/elgamal.hpp"
#include "cai/group.hpp"

namespace cai {

struct SigningKeyPair {
  Scalar sk;
  Element vk;  // g^sk
};

SigningKeyPair make_signing_key(GroupContext& ctx, EntropySource& rng);

/// Schnorr signature in (challenge, response) form.
struct Signature {
  Scalar e;
  Scalar z;

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// R = g^nonce, e = H(vk || R || msg), z = nonce - e * sk.
Signature schnorr_sign(GroupContext& ctx, const SigningKeyPair& key, ByteView msg, const Scalar& nonce);
bool schnorr_verify(GroupContext& ctx, const Element& vk, ByteView msg, const Signature& sig);

/// Server-signed statement that ballot `ballot` was cast for `voter`.
struct Confirmation {
  VoterId voter;
  Digest ballot{};
  Signature sig;

  friend bool operator==(const Confirmation&, const Confirmation&) = default;
};

/// Canonical signed bytes: domain tag || voter id || ballot digest.
Bytes confirmation_message(const VoterId& voter, const Digest& ballot);
Confirmation sign_confirmation(GroupContext& ctx, const SigningKeyPair& key, const VoterId& voter,
                               const BallotCiphertext& ballot, EntropySource& rng);
Confirmation sign_confirmation(GroupContext& ctx, const SigningKeyPair& key, const VoterId& voter,
                               const BallotCiphertext& ballot, const Scalar& nonce);
bool verify_confirmation(GroupContext& ctx, const Element& vk, const Confirmation& confirmation);

Bytes encode_confirmation(const Confirmation& c);
Confirmation decode_confirmation(const Group& group, ByteView bytes);

struct BallotRecord {
  VoterId voter;
  BallotCiphertext ballot;
  Signature sig;

  friend bool operator==(const BallotRecord&, const BallotRecord&) = default;
};

/// voter id || ballot || e || z.
Bytes encode_record(const BallotRecord& record);
BallotRecord decode_record(const Group& group, ByteView bytes);
bool verify_record(GroupContext& ctx, const Element& vk, const BallotRecord& record);
Confirmation confirmation_of(const BallotRecord& record);

/// Append-only public board. Each append extends a hash chain so that any
/// two observers can compare prefixes.
class BulletinBoard {
 public:
  BulletinBoard(std::shared_ptr<const Group> group, Element server_vk, bool allow_replacement = false);

  /// Throws Error{InvalidSignature} or Error{DuplicateVoter}.
  void publish(GroupContext& ctx, BallotRecord record);

  const std::vector<BallotRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  /// The live record for a voter: the latest one when replacement is enabled.
  const BallotRecord* find(const VoterId& voter) const;
  /// Chain digest after the first n records; prefix_digest(0) is all zeros.
  const Digest& prefix_digest(std::size_t n) const { return chain_.at(n); }
  const Digest& head_digest() const { return chain_.back(); }
  const Element& server_vk() const { return vk_; }
  bool allow_replacement() const { return allow_replacement_; }

  /// One base64 line per record, in publication order.
  std::string export_text() const;
  /// Re-publishes every line; throws Error{InvalidSignature} naming the first
  /// bad line, or Error{MalformedMessage}/Error{DuplicateVoter}.
  static BulletinBoard import_text(GroupContext& ctx, Element server_vk, bool allow_replacement,
                                   std::string_view text);

 private:
  std::shared_ptr<const Group> group_;
  Element vk_;
  bool allow_replacement_;
  std::vector<BallotRecord> records_;
  std::vector<Digest> chain_;
};

enum class ReceiptVerdict {
  Accept,
  Reject,
  /// Validly signed confirmation whose ballot is missing from the board:
  /// transferable proof that the server misbehaved.
  ServerMisbehaviorEvidence,
};

std::string_view to_string(ReceiptVerdict v);

/// Accept iff the confirmation verifies under the board's server key, covers
/// `expected_ballot`, and the board's live record for the voter matches it.
ReceiptVerdict receipt_check(GroupContext& ctx, const BulletinBoard& board, const Confirmation& confirmation,
                             const Digest& expected_ballot);

/// counts[race][choice].
struct Tally {
  std::vector<std::vector<std::size_t>> counts;

  friend bool operator==(const Tally&, const Tally&) = default;
};

/// Decrypts every live record with the election key. Throws Error{UnknownVote}
/// on a plaintext outside the alphabet. Trusted-decryption demo only.
Tally naive_tally(GroupContext& ctx, const Scalar& sk, const BulletinBoard& board, const VoteEncoding& encoding,
                  std::size_t ballot_length);

}  // namespace cai
