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

#include "cai/verifiability.hpp"

#include <sstream>

#include "cai/error.hpp"

namespace cai {
namespace {

constexpr std::string_view kSignatureDst = "cai/schnorr-sig/v1";

Scalar signature_challenge(const Group& group, const Element& vk, const Element& commitment, ByteView msg) {
  return group.hash_to_scalar(kSignatureDst, ByteWriter().raw(vk.bytes()).raw(commitment.bytes()).raw(msg).bytes());
}

Digest chain_step(const Digest& prev, const BallotRecord& record) {
  return Sha256().update("cai/board/v1").update(prev).update(encode_record(record)).finish();
}

}  // namespace

SigningKeyPair make_signing_key(GroupContext& ctx, EntropySource& rng) {
  Scalar sk = ctx.group().random_scalar(rng);
  return {sk, ctx.exp_g(sk)};
}

Signature schnorr_sign(GroupContext& ctx, const SigningKeyPair& key, ByteView msg, const Scalar& nonce) {
  const Group& group = ctx.group();
  Scalar e = signature_challenge(group, key.vk, ctx.exp_g(nonce), msg);
  return {e, group.sub(nonce, group.mul(e, key.sk))};
}

bool schnorr_verify(GroupContext& ctx, const Element& vk, ByteView msg, const Signature& sig) {
  const Group& group = ctx.group();
  Element commitment = group.mul(ctx.exp_g(sig.z), ctx.exp(vk, sig.e));
  return signature_challenge(group, vk, commitment, msg) == sig.e;
}

Bytes confirmation_message(const VoterId& voter, const Digest& ballot) {
  return ByteWriter().raw(as_bytes("cai/confirmation/v1")).raw(voter.bytes()).raw(ballot).bytes();
}

Confirmation sign_confirmation(GroupContext& ctx, const SigningKeyPair& key, const VoterId& voter,
                               const BallotCiphertext& ballot, EntropySource& rng) {
  return sign_confirmation(ctx, key, voter, ballot, ctx.group().random_scalar(rng));
}

Confirmation sign_confirmation(GroupContext& ctx, const SigningKeyPair& key, const VoterId& voter,
                               const BallotCiphertext& ballot, const Scalar& nonce) {
  Confirmation c{voter, ballot_digest(ballot), {}};
  c.sig = schnorr_sign(ctx, key, confirmation_message(voter, c.ballot), nonce);
  return c;
}

bool verify_confirmation(GroupContext& ctx, const Element& vk, const Confirmation& confirmation) {
  return schnorr_verify(ctx, vk, confirmation_message(confirmation.voter, confirmation.ballot), confirmation.sig);
}

Bytes encode_confirmation(const Confirmation& c) {
  return ByteWriter().raw(c.voter.bytes()).raw(c.ballot).raw(c.sig.e.bytes()).raw(c.sig.z.bytes()).bytes();
}

Confirmation decode_confirmation(const Group& group, ByteView bytes) {
  ByteReader in(bytes);
  Confirmation c;
  c.voter = VoterId::from_bytes(in.take(VoterId::kSize));
  auto digest = in.take(32);
  std::copy(digest.begin(), digest.end(), c.ballot.begin());
  c.sig.e = group.decode_scalar(in.take(group.scalar_size()));
  c.sig.z = group.decode_scalar(in.take(group.scalar_size()));
  in.expect_end();
  return c;
}

Bytes encode_record(const BallotRecord& record) {
  return ByteWriter()
      .raw(record.voter.bytes())
      .raw(encode_ballot(record.ballot))
      .raw(record.sig.e.bytes())
      .raw(record.sig.z.bytes())
      .bytes();
}

BallotRecord decode_record(const Group& group, ByteView bytes) {
  const std::size_t ss = group.scalar_size();
  if (bytes.size() < VoterId::kSize + 2 * ss) throw Error(ErrorCode::BadLength, "ballot record");
  BallotRecord record;
  record.voter = VoterId::from_bytes(bytes.first(VoterId::kSize));
  record.ballot = decode_ballot(group, bytes.subspan(VoterId::kSize, bytes.size() - VoterId::kSize - 2 * ss));
  record.sig.e = group.decode_scalar(bytes.subspan(bytes.size() - 2 * ss, ss));
  record.sig.z = group.decode_scalar(bytes.subspan(bytes.size() - ss, ss));
  return record;
}

Confirmation confirmation_of(const BallotRecord& record) {
  return {record.voter, ballot_digest(record.ballot), record.sig};
}

bool verify_record(GroupContext& ctx, const Element& vk, const BallotRecord& record) {
  return verify_confirmation(ctx, vk, confirmation_of(record));
}

BulletinBoard::BulletinBoard(std::shared_ptr<const Group> group, Element server_vk, bool allow_replacement)
    : group_(std::move(group)), vk_(server_vk), allow_replacement_(allow_replacement), chain_{Digest{}} {}

void BulletinBoard::publish(GroupContext& ctx, BallotRecord record) {
  if (!verify_record(ctx, vk_, record)) {
    throw Error(ErrorCode::InvalidSignature, "record for " + record.voter.name() + " is not signed by the server");
  }
  if (!allow_replacement_ && find(record.voter) != nullptr) {
    throw Error(ErrorCode::DuplicateVoter, record.voter.name() + " already has a ballot on the board");
  }
  chain_.push_back(chain_step(chain_.back(), record));
  records_.push_back(std::move(record));
}

const BallotRecord* BulletinBoard::find(const VoterId& voter) const {
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->voter == voter) return &*it;
  }
  return nullptr;
}

std::string BulletinBoard::export_text() const {
  std::string out;
  for (const auto& record : records_) {
    out += to_base64(encode_record(record));
    out += '\n';
  }
  return out;
}

BulletinBoard BulletinBoard::import_text(GroupContext& ctx, Element server_vk, bool allow_replacement,
                                         std::string_view text) {
  BulletinBoard board(ctx.shared_group(), server_vk, allow_replacement);
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    BallotRecord record;
    try {
      record = decode_record(ctx.group(), from_base64(line));
    } catch (const Error& e) {
      throw Error(e.code(), "board line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!verify_record(ctx, server_vk, record)) {
      throw Error(ErrorCode::InvalidSignature, "board line " + std::to_string(lineno));
    }
    board.publish(ctx, std::move(record));
  }
  return board;
}

std::string_view to_string(ReceiptVerdict v) {
  switch (v) {
    case ReceiptVerdict::Accept: return "Accept";
    case ReceiptVerdict::Reject: return "Reject";
    case ReceiptVerdict::ServerMisbehaviorEvidence: return "ServerMisbehaviorEvidence";
  }
  return "Unknown";
}

ReceiptVerdict receipt_check(GroupContext& ctx, const BulletinBoard& board, const Confirmation& confirmation,
                             const Digest& expected_ballot) {
  if (!verify_confirmation(ctx, board.server_vk(), confirmation)) return ReceiptVerdict::Reject;
  if (confirmation.ballot != expected_ballot) return ReceiptVerdict::Reject;
  const BallotRecord* live = board.find(confirmation.voter);
  if (live == nullptr || ballot_digest(live->ballot) != confirmation.ballot) {
    return ReceiptVerdict::ServerMisbehaviorEvidence;
  }
  return ReceiptVerdict::Accept;
}

Tally naive_tally(GroupContext& ctx, const Scalar& sk, const BulletinBoard& board, const VoteEncoding& encoding,
                  std::size_t ballot_length) {
  Tally tally{std::vector<std::vector<std::size_t>>(ballot_length, std::vector<std::size_t>(encoding.size(), 0))};
  for (std::size_t i = 0; i < board.size(); ++i) {
    const BallotRecord& record = board.records()[i];
    if (board.find(record.voter) != &record) continue;  // superseded
    if (record.ballot.size() != ballot_length) throw Error(ErrorCode::BadLength, "ballot length differs from election");
    for (std::size_t race = 0; race < ballot_length; ++race) {
      ++tally.counts[race][encoding.decode(decrypt(ctx, sk, record.ballot[race]))];
    }
  }
  return tally;
}

}  // namespace cai
