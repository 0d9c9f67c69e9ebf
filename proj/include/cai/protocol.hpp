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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cai/elgamal.hpp"
#include "cai/group.hpp"
#include "cai/pedersen.hpp"
#include "cai/verifiability.hpp"
#include "cai/zk.hpp"

namespace cai {

/// Public election parameters every role knows.
struct ElectionParams {
  std::shared_ptr<const Group> group;
  ElectionId election;
  Element pk;
  Element server_vk;
  std::shared_ptr<const VoteEncoding> encoding;
  std::size_t ballot_length = 1;
};

/// Setup output, including the two secrets (tallier key, server signing key).
struct ElectionSetup {
  ElectionParams params;
  KeyPair election_key;
  SigningKeyPair server_key;
};

ElectionSetup setup_election(GroupContext& ctx, const ElectionId& election, std::vector<std::string> labels,
                             std::size_t ballot_length, EntropySource& rng);

struct ServerPolicy {
  bool allow_replacement = false;
  /// When set, the audit device reports its ZK verdict back to the server.
  bool confirmation_codes = false;
};

struct VoterIntent {
  VoterId voter;
  Vote vote;
};

// Protocol messages. Field sizes are fixed by the election parameters.

struct CastMessage {  // VD -> VS
  VoterId voter;
  BallotCiphertext ballot;
};
struct BlindMessage {  // VS -> VD
  std::vector<Scalar> x;
  Confirmation confirmation;
};
struct AuditRequest {  // AD -> VS
  ElectionId election;
  VoterId voter;
};
struct AuditOffer {  // VS -> AD: original ballot c and its re-randomisation c*
  BallotCiphertext ballot;
  BallotCiphertext rerandomized;
  Confirmation confirmation;
};

Bytes encode(const CastMessage& m);
Bytes encode(const BlindMessage& m);
Bytes encode(const AuditRequest& m);
Bytes encode(const AuditOffer& m);
CastMessage decode_cast(const ElectionParams& params, ByteView bytes);
BlindMessage decode_blind(const ElectionParams& params, ByteView bytes);
AuditRequest decode_audit_request(ByteView bytes);
AuditOffer decode_audit_offer(const ElectionParams& params, ByteView bytes);

/// What the voter carries from the voting device to the audit device.
/// Layout: version || election id (16) || voter id (16) || r* (one scalar per
/// ballot element) || ballot digest (32).
struct QrPayload {
  static constexpr std::uint8_t kVersion = 0x01;

  ElectionId election;
  VoterId voter;
  std::vector<Scalar> r_star;
  Digest ballot{};

  friend bool operator==(const QrPayload&, const QrPayload&) = default;
};

Bytes encode_qr(const QrPayload& qr);
/// Throws Error{UnknownVersion}, Error{BadLength} or Error{ScalarOutOfRange}.
QrPayload decode_qr(const Group& group, ByteView bytes);
/// Base64 text armour for QR transport.
std::string armor_qr(const QrPayload& qr);
QrPayload parse_qr(const Group& group, std::string_view text);

/// Voting device state across BS2..BS4.
struct DeviceBallotState {
  Vote vote;
  std::vector<Scalar> r;
  BallotCiphertext ballot;
  std::optional<std::vector<Scalar>> r_star;
};

class VotingDevice {
 public:
  explicit VotingDevice(ElectionParams params) : params_(std::move(params)) {}

  /// BS2. Costs two exponentiations per ballot element.
  CastMessage cast(GroupContext& ctx, const VoterIntent& intent, EntropySource& rng);
  CastMessage cast(GroupContext& ctx, const VoterIntent& intent, std::vector<Scalar> r);

  struct Receipt {
    QrPayload qr;
    Confirmation confirmation;
  };
  /// BS4: r* = x + r mod q, bound to the ballot digest. Throws
  /// Error{InvalidSignature} if the server's confirmation does not cover the
  /// ballot this device cast.
  Receipt finalize(GroupContext& ctx, const BlindMessage& blind);

  const std::optional<DeviceBallotState>& state() const { return state_; }
  const ElectionParams& params() const { return params_; }

 private:
  ElectionParams params_;
  VoterId voter_;
  std::optional<DeviceBallotState> state_;
};

/// Server-side record binding a voter to (c, x) across submission and audit.
struct AuditSession {
  VoterId voter;
  BallotCiphertext ballot;
  std::vector<Scalar> x;
  zk::CommitKey commit_key;
  Confirmation confirmation;
  std::optional<bool> reported_verdict;
};

class VotingServer {
 public:
  VotingServer(ElectionParams params, SigningKeyPair key, ServerPolicy policy = {}, BulletinBoard* board = nullptr);

  /// Authentication stand-in: a one-time token the voter must present with
  /// the ballot.
  SessionToken open_submission(const VoterId& voter, EntropySource& rng);

  /// BS3 (+ signed confirmation, + board publication). Draws x and the
  /// signature nonce from rng. Throws Error{DuplicateBallot} or
  /// Error{UnknownSession}.
  BlindMessage receive_ballot(GroupContext& ctx, const SessionToken& token, const CastMessage& cast,
                              EntropySource& rng);
  BlindMessage receive_ballot(GroupContext& ctx, const SessionToken& token, const CastMessage& cast,
                              std::vector<Scalar> x, EntropySource& rng);

  struct AuditStart {
    SessionToken audit;
    AuditOffer offer;
    zk::Message commit_key;
  };
  /// BA2: c* = ReRand(pk, c; x) and a fresh proof run. Costs two
  /// exponentiations per ballot element. Throws Error{UnknownSession}.
  AuditStart audit_init(GroupContext& ctx, const AuditRequest& request, EntropySource& rng);
  /// Advances the proof for one audit run. A bad decommitment comes back as
  /// an AbortMsg and closes the run.
  zk::Message audit_step(GroupContext& ctx, const SessionToken& audit, const zk::Message& incoming);
  /// Confirmation code from the audit device (only with confirmation_codes).
  void audit_report(const SessionToken& audit, bool accepted);

  const AuditSession* session(const VoterId& voter) const;
  const ElectionParams& params() const { return params_; }
  const ServerPolicy& policy() const { return policy_; }
  const std::map<VoterId, AuditSession>& sessions() const { return sessions_; }
  /// Rebuilds server state (CLI persistence).
  void restore_session(AuditSession session);

 private:
  struct Run {
    VoterId voter;
    zk::Prover prover;
  };

  ElectionParams params_;
  SigningKeyPair key_;
  ServerPolicy policy_;
  BulletinBoard* board_;
  std::map<SessionToken, VoterId> pending_;
  std::map<VoterId, AuditSession> sessions_;
  std::map<SessionToken, Run> runs_;
};

enum class AuditVerdict { Accept, Reject };

enum class AuditFailure {
  None,
  WrongElection,
  HashMismatch,
  InvalidSignature,
  ZkpRejected,
  RandomnessMismatch,
  OpeningMismatch,
  UnknownVote,
};

std::string_view to_string(AuditFailure f);

struct AuditOutcome {
  AuditVerdict verdict = AuditVerdict::Reject;
  std::optional<Vote> displayed_vote;
  AuditFailure reason = AuditFailure::None;

  bool accepted() const { return verdict == AuditVerdict::Accept; }
};

/// BA5: the voter accepts iff the device showed exactly the intended vote.
bool voter_accepts(const Vote& intended, const AuditOutcome& outcome);

/// Everything an audit device sees in one audit.
struct AuditTranscript {
  QrPayload qr;
  AuditOffer offer;
  zk::Transcript proof;
};

Bytes encode_audit_transcript(const AuditTranscript& t);

/// Statement (g, pk, u*/u, w*/w) per ballot element: c* re-randomises c.
zk::DlogStatement rerandomization_statement(const Group& group, const Element& pk, const BallotCiphertext& c,
                                            const BallotCiphertext& c_star);

/// Audit device for one audit run (BA1..BA4). The proof and special
/// decryption run on the caller's context: 6 + 2 exponentiations per single
/// element ballot. The confirmation signature check belongs to the
/// bulletin-board extension and is counted separately.
class AuditRun {
 public:
  AuditRun(ElectionParams params, QrPayload qr, zk::VerifierCoins coins);
  AuditRun(ElectionParams params, QrPayload qr, EntropySource& rng);

  AuditRequest request() const { return {qr_.election, qr_.voter}; }
  /// Checks the offer against the scanned payload and the server key. On
  /// mismatch the run ends rejected.
  void on_offer(const AuditOffer& offer);
  /// Feeds one proof message; returns the reply, if any.
  std::optional<zk::Message> on_message(GroupContext& ctx, const zk::Message& incoming);

  bool done() const { return outcome_.has_value(); }
  const AuditOutcome& outcome() const;
  /// The confirmation the device hands to the voter (present once the offer
  /// was received and its signature checked out).
  const std::optional<Confirmation>& confirmation() const { return confirmation_; }
  /// The verdict bit a confirmation-code policy would send to the server:
  /// the proof verdict alone, never the decrypted vote.
  std::optional<bool> confirmation_code() const;
  std::optional<AuditTranscript> transcript() const;
  std::uint64_t extension_exponentiations() const { return extension_ctx_.exponentiations(); }

 private:
  void finish(GroupContext& ctx);
  void fail(AuditFailure reason);

  ElectionParams params_;
  QrPayload qr_;
  zk::VerifierCoins coins_;
  GroupContext extension_ctx_;
  std::optional<AuditOffer> offer_;
  std::optional<zk::Verifier> verifier_;
  std::optional<Confirmation> confirmation_;
  std::optional<AuditOutcome> outcome_;
};

/// In-process submission BS1..BS4 for one voter.
VotingDevice::Receipt submit_ballot(GroupContext& device_ctx, VotingDevice& device, GroupContext& server_ctx,
                                    VotingServer& server, const VoterIntent& intent, EntropySource& device_rng,
                                    EntropySource& server_rng);

/// In-process audit BA1..BA4 against an honest server.
AuditOutcome run_audit(GroupContext& server_ctx, VotingServer& server, GroupContext& device_ctx, AuditRun& run,
                       EntropySource& server_rng);

/// Deniability simulator: produces an audit transcript that displays
/// `claimed_vote` for ballot `c` without knowing what c encrypts or its
/// randomness. The confirmation is public (it is on the board).
AuditTranscript simulate_audit_transcript(GroupContext& ctx, const ElectionParams& params, const VoterId& voter,
                                          const Vote& claimed_vote, const BallotCiphertext& c,
                                          const Confirmation& confirmation, EntropySource& rng);

/// Replays a recorded transcript through a fresh honest audit device, using
/// the recorded challenge.
AuditOutcome replay_audit(GroupContext& ctx, const ElectionParams& params, const AuditTranscript& t);

/// Stands in for the voter side of an audit towards the server using only
/// public data: the election, the voter id and whatever the server sends. It
/// runs the public proof verifier; it never sees r, r* or the vote.
class ServerViewSimulator {
 public:
  ServerViewSimulator(ElectionParams params, ElectionId election, VoterId voter, zk::VerifierCoins coins);

  AuditRequest request() const { return {election_, voter_}; }
  void on_offer(const AuditOffer& offer);
  std::optional<zk::Message> on_message(GroupContext& ctx, const zk::Message& incoming);
  bool done() const;
  /// Verdict bit for the confirmation-code policy: the proof verdict.
  std::optional<bool> confirmation_code() const;

 private:
  ElectionParams params_;
  ElectionId election_;
  VoterId voter_;
  zk::VerifierCoins coins_;
  std::optional<zk::Verifier> verifier_;
};

// Commitment-based ballots: the same flow with Pedersen commitments in place
// of ciphertexts and a single-base Schnorr proof of c* / c = h^x.

struct CommitmentElection {
  std::shared_ptr<const Group> group;
  PedersenParams params;
  std::size_t alphabet_size = 2;
};

struct CommitmentRun {
  std::size_t vote = 0;
  Scalar r;
  Scalar x;
  zk::CommitKey commit_key;
  zk::ProverCoins prover_coins;
  zk::VerifierCoins verifier_coins;
  /// Cheating server: c* = c * h^x * g^shift, proven by guessing this challenge.
  std::optional<std::size_t> shift;
  Scalar cheat_guess;
};

struct CommitmentResult {
  Element commitment;
  Element rerandomized;
  Scalar r_star;
  zk::Transcript proof;
  AuditOutcome outcome;
};

CommitmentRun draw_commitment_run(const CommitmentElection& election, std::size_t vote, EntropySource& rng);
CommitmentResult run_commitment_variant(GroupContext& device_ctx, GroupContext& server_ctx,
                                        GroupContext& auditor_ctx, const CommitmentElection& election,
                                        const CommitmentRun& run);

}  // namespace cai
