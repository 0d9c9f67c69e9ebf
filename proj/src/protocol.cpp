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

#include "cai/protocol.hpp"

#include "cai/error.hpp"

namespace cai {
namespace {

SessionToken random_token(EntropySource& rng) {
  std::array<std::uint8_t, SessionToken::kSize> raw{};
  rng.fill(raw);
  return SessionToken(raw);
}

std::vector<Scalar> random_scalars(const Group& group, std::size_t n, EntropySource& rng) {
  std::vector<Scalar> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(group.random_scalar(rng));
  return out;
}

std::size_t confirmation_size(const Group& group) { return VoterId::kSize + 32 + 2 * group.scalar_size(); }

std::size_t ballot_size(const ElectionParams& params) {
  return params.ballot_length * 2 * params.group->element_size();
}

BallotCiphertext read_ballot(const ElectionParams& params, ByteReader& in) {
  return decode_ballot(*params.group, in.take(ballot_size(params)));
}

void check_length(const ElectionParams& params, std::size_t n, const char* what) {
  if (n != params.ballot_length) throw Error(ErrorCode::BadLength, what);
}

template <class P>
zk::Transcript drive(GroupContext& prover_ctx, GroupContext& verifier_ctx, P& prover, zk::Verifier& verifier) {
  std::optional<zk::Message> msg = prover.start(prover_ctx);
  while (msg) {
    auto reply = verifier.step(verifier_ctx, *msg);
    if (!reply) break;
    msg = prover.step(prover_ctx, *reply);
  }
  return verifier.transcript();
}

}  // namespace

ElectionSetup setup_election(GroupContext& ctx, const ElectionId& election, std::vector<std::string> labels,
                             std::size_t ballot_length, EntropySource& rng) {
  if (ballot_length == 0) throw Error(ErrorCode::InvalidConfig, "ballot length must be at least 1");
  ElectionSetup s;
  s.election_key = keygen(ctx, rng);
  s.server_key = make_signing_key(ctx, rng);
  s.params.group = ctx.shared_group();
  s.params.election = election;
  s.params.pk = s.election_key.pk;
  s.params.server_vk = s.server_key.vk;
  s.params.encoding = std::make_shared<VoteEncoding>(ctx.group(), std::move(labels));
  s.params.ballot_length = ballot_length;
  return s;
}

Bytes encode(const CastMessage& m) { return ByteWriter().raw(m.voter.bytes()).raw(encode_ballot(m.ballot)).bytes(); }

Bytes encode(const BlindMessage& m) {
  ByteWriter out;
  for (const auto& x : m.x) out.raw(x.bytes());
  return std::move(out.raw(encode_confirmation(m.confirmation))).bytes();
}

Bytes encode(const AuditRequest& m) { return ByteWriter().raw(m.election.bytes()).raw(m.voter.bytes()).bytes(); }

Bytes encode(const AuditOffer& m) {
  return ByteWriter()
      .raw(encode_ballot(m.ballot))
      .raw(encode_ballot(m.rerandomized))
      .raw(encode_confirmation(m.confirmation))
      .bytes();
}

CastMessage decode_cast(const ElectionParams& params, ByteView bytes) {
  ByteReader in(bytes);
  CastMessage m;
  m.voter = VoterId::from_bytes(in.take(VoterId::kSize));
  m.ballot = read_ballot(params, in);
  in.expect_end();
  return m;
}

BlindMessage decode_blind(const ElectionParams& params, ByteView bytes) {
  const Group& group = *params.group;
  ByteReader in(bytes);
  BlindMessage m;
  for (std::size_t i = 0; i < params.ballot_length; ++i) m.x.push_back(group.decode_scalar(in.take(group.scalar_size())));
  m.confirmation = decode_confirmation(group, in.take(confirmation_size(group)));
  in.expect_end();
  return m;
}

AuditRequest decode_audit_request(ByteView bytes) {
  ByteReader in(bytes);
  AuditRequest m;
  m.election = ElectionId::from_bytes(in.take(ElectionId::kSize));
  m.voter = VoterId::from_bytes(in.take(VoterId::kSize));
  in.expect_end();
  return m;
}

AuditOffer decode_audit_offer(const ElectionParams& params, ByteView bytes) {
  ByteReader in(bytes);
  AuditOffer m;
  m.ballot = read_ballot(params, in);
  m.rerandomized = read_ballot(params, in);
  m.confirmation = decode_confirmation(*params.group, in.take(confirmation_size(*params.group)));
  in.expect_end();
  return m;
}

Bytes encode_qr(const QrPayload& qr) {
  ByteWriter out;
  out.u8(QrPayload::kVersion).raw(qr.election.bytes()).raw(qr.voter.bytes());
  for (const auto& r : qr.r_star) out.raw(r.bytes());
  return std::move(out.raw(qr.ballot)).bytes();
}

QrPayload decode_qr(const Group& group, ByteView bytes) {
  if (bytes.empty()) throw Error(ErrorCode::BadLength, "empty QR payload");
  if (bytes[0] != QrPayload::kVersion) throw Error(ErrorCode::UnknownVersion, "QR payload version");
  constexpr std::size_t fixed = 1 + ElectionId::kSize + VoterId::kSize + 32;
  const std::size_t n = group.scalar_size();
  if (bytes.size() <= fixed || (bytes.size() - fixed) % n != 0) throw Error(ErrorCode::BadLength, "QR payload");
  ByteReader in(bytes);
  in.u8();
  QrPayload qr;
  qr.election = ElectionId::from_bytes(in.take(ElectionId::kSize));
  qr.voter = VoterId::from_bytes(in.take(VoterId::kSize));
  for (std::size_t i = 0, count = (bytes.size() - fixed) / n; i < count; ++i) {
    qr.r_star.push_back(group.decode_scalar(in.take(n)));
  }
  ByteView digest = in.take(32);
  std::copy(digest.begin(), digest.end(), qr.ballot.begin());
  in.expect_end();
  return qr;
}

std::string armor_qr(const QrPayload& qr) { return to_base64(encode_qr(qr)); }

QrPayload parse_qr(const Group& group, std::string_view text) { return decode_qr(group, from_base64(text)); }

CastMessage VotingDevice::cast(GroupContext& ctx, const VoterIntent& intent, EntropySource& rng) {
  return cast(ctx, intent, random_scalars(ctx.group(), params_.ballot_length, rng));
}

CastMessage VotingDevice::cast(GroupContext& ctx, const VoterIntent& intent, std::vector<Scalar> r) {
  check_length(params_, intent.vote.size(), "vote length");
  check_length(params_, r.size(), "randomness length");
  DeviceBallotState st{intent.vote, std::move(r), {}, std::nullopt};
  for (std::size_t j = 0; j < st.vote.size(); ++j) {
    if (st.vote[j] >= params_.encoding->size()) throw Error(ErrorCode::UnknownVote, "vote outside alphabet");
    st.ballot.push_back(encrypt(ctx, params_.pk, params_.encoding->encode(st.vote[j]), st.r[j]));
  }
  voter_ = intent.voter;
  state_ = std::move(st);
  return {voter_, state_->ballot};
}

VotingDevice::Receipt VotingDevice::finalize(GroupContext& ctx, const BlindMessage& blind) {
  if (!state_ || state_->r_star) throw Error(ErrorCode::PhaseError, "no ballot awaiting finalisation");
  check_length(params_, blind.x.size(), "blinding length");
  const Confirmation& conf = blind.confirmation;
  const Digest digest = ballot_digest(state_->ballot);
  if (conf.voter != voter_ || conf.ballot != digest || !verify_confirmation(ctx, params_.server_vk, conf)) {
    throw Error(ErrorCode::InvalidSignature, "server confirmation does not cover the cast ballot");
  }
  const Group& group = ctx.group();
  std::vector<Scalar> r_star;
  for (std::size_t j = 0; j < blind.x.size(); ++j) r_star.push_back(group.add(blind.x[j], state_->r[j]));
  state_->r_star = r_star;
  return {{params_.election, voter_, std::move(r_star), digest}, conf};
}

VotingServer::VotingServer(ElectionParams params, SigningKeyPair key, ServerPolicy policy, BulletinBoard* board)
    : params_(std::move(params)), key_(std::move(key)), policy_(policy), board_(board) {}

SessionToken VotingServer::open_submission(const VoterId& voter, EntropySource& rng) {
  SessionToken token = random_token(rng);
  pending_[token] = voter;
  return token;
}

BlindMessage VotingServer::receive_ballot(GroupContext& ctx, const SessionToken& token, const CastMessage& cast,
                                          EntropySource& rng) {
  return receive_ballot(ctx, token, cast, random_scalars(ctx.group(), params_.ballot_length, rng), rng);
}

BlindMessage VotingServer::receive_ballot(GroupContext& ctx, const SessionToken& token, const CastMessage& cast,
                                          std::vector<Scalar> x, EntropySource& rng) {
  if (!policy_.allow_replacement && sessions_.contains(cast.voter)) {
    throw Error(ErrorCode::DuplicateBallot, "voter " + cast.voter.name() + " already cast a ballot");
  }
  auto it = pending_.find(token);
  if (it == pending_.end() || it->second != cast.voter) throw Error(ErrorCode::UnknownSession, "submission token");
  check_length(params_, cast.ballot.size(), "ballot length");
  check_length(params_, x.size(), "blinding length");
  pending_.erase(it);

  AuditSession s;
  s.voter = cast.voter;
  s.ballot = cast.ballot;
  s.x = std::move(x);
  s.commit_key = zk::make_commit_key(ctx, rng);
  s.confirmation = sign_confirmation(ctx, key_, cast.voter, cast.ballot, rng);
  if (board_ != nullptr) {
    GroupContext board_ctx(params_.group);
    board_->publish(board_ctx, {s.voter, s.ballot, s.confirmation.sig});
  }
  BlindMessage reply{s.x, s.confirmation};
  sessions_.insert_or_assign(cast.voter, std::move(s));
  return reply;
}

VotingServer::AuditStart VotingServer::audit_init(GroupContext& ctx, const AuditRequest& request,
                                                  EntropySource& rng) {
  if (request.election != params_.election) throw Error(ErrorCode::UnknownSession, "audit for another election");
  auto it = sessions_.find(request.voter);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no ballot for voter " + request.voter.name());
  const AuditSession& s = it->second;

  BallotCiphertext c_star;
  for (std::size_t j = 0; j < s.ballot.size(); ++j) c_star.push_back(rerandomize(ctx, params_.pk, s.ballot[j], s.x[j]));
  zk::DlogStatement st = rerandomization_statement(ctx.group(), params_.pk, s.ballot, c_star);
  zk::ProverCoins coins = zk::draw_prover_coins(ctx.group(), zk::Shape::of(st), rng);
  zk::Prover prover(std::move(st), s.x, s.commit_key, std::move(coins));

  SessionToken audit = random_token(rng);
  zk::Message first = prover.start(ctx);
  runs_.insert_or_assign(audit, Run{s.voter, std::move(prover)});
  return {audit, {s.ballot, std::move(c_star), s.confirmation}, std::move(first)};
}

zk::Message VotingServer::audit_step(GroupContext& ctx, const SessionToken& audit, const zk::Message& incoming) {
  auto it = runs_.find(audit);
  if (it == runs_.end()) throw Error(ErrorCode::UnknownSession, "audit token");
  try {
    return it->second.prover.step(ctx, incoming);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DecommitMismatch) throw;
    return zk::AbortMsg{ErrorCode::DecommitMismatch};
  }
}

void VotingServer::audit_report(const SessionToken& audit, bool accepted) {
  if (!policy_.confirmation_codes) throw Error(ErrorCode::PhaseError, "confirmation codes are disabled");
  auto it = runs_.find(audit);
  if (it == runs_.end()) throw Error(ErrorCode::UnknownSession, "audit token");
  sessions_.at(it->second.voter).reported_verdict = accepted;
  runs_.erase(it);
}

const AuditSession* VotingServer::session(const VoterId& voter) const {
  auto it = sessions_.find(voter);
  return it == sessions_.end() ? nullptr : &it->second;
}

void VotingServer::restore_session(AuditSession session) {
  if (board_ != nullptr) {
    GroupContext board_ctx(params_.group);
    board_->publish(board_ctx, {session.voter, session.ballot, session.confirmation.sig});
  }
  VoterId voter = session.voter;
  sessions_.insert_or_assign(voter, std::move(session));
}

std::string_view to_string(AuditFailure f) {
  switch (f) {
    case AuditFailure::None: return "None";
    case AuditFailure::WrongElection: return "WrongElection";
    case AuditFailure::HashMismatch: return "HashMismatch";
    case AuditFailure::InvalidSignature: return "InvalidSignature";
    case AuditFailure::ZkpRejected: return "ZkpRejected";
    case AuditFailure::RandomnessMismatch: return "RandomnessMismatch";
    case AuditFailure::OpeningMismatch: return "OpeningMismatch";
    case AuditFailure::UnknownVote: return "UnknownVote";
  }
  return "?";
}

bool voter_accepts(const Vote& intended, const AuditOutcome& outcome) {
  return outcome.accepted() && outcome.displayed_vote && *outcome.displayed_vote == intended;
}

Bytes encode_audit_transcript(const AuditTranscript& t) {
  return ByteWriter().raw(encode_qr(t.qr)).raw(encode(t.offer)).raw(zk::encode_transcript(t.proof)).bytes();
}

zk::DlogStatement rerandomization_statement(const Group& group, const Element& pk, const BallotCiphertext& c,
                                            const BallotCiphertext& c_star) {
  if (c.size() != c_star.size()) throw Error(ErrorCode::BadLength, "ballot and re-randomisation differ in length");
  zk::DlogStatement st;
  st.bases = {group.generator(), pk};
  for (std::size_t j = 0; j < c.size(); ++j) {
    st.targets.push_back({group.div(c_star[j].u, c[j].u), group.div(c_star[j].w, c[j].w)});
  }
  return st;
}

AuditRun::AuditRun(ElectionParams params, QrPayload qr, zk::VerifierCoins coins)
    : params_(std::move(params)), qr_(std::move(qr)), coins_(std::move(coins)), extension_ctx_(params_.group) {
  check_length(params_, qr_.r_star.size(), "QR randomness count");
}

AuditRun::AuditRun(ElectionParams params, QrPayload qr, EntropySource& rng)
    : AuditRun(params, std::move(qr), zk::draw_verifier_coins(*params.group, rng)) {}

void AuditRun::fail(AuditFailure reason) { outcome_ = AuditOutcome{AuditVerdict::Reject, std::nullopt, reason}; }

void AuditRun::on_offer(const AuditOffer& offer) {
  if (done() || offer_) throw Error(ErrorCode::PhaseError, "offer already received");
  offer_ = offer;
  if (qr_.election != params_.election) return fail(AuditFailure::WrongElection);
  if (offer.ballot.size() != params_.ballot_length || offer.rerandomized.size() != params_.ballot_length ||
      ballot_digest(offer.ballot) != qr_.ballot) {
    return fail(AuditFailure::HashMismatch);
  }
  const Confirmation& conf = offer.confirmation;
  if (conf.voter != qr_.voter || conf.ballot != qr_.ballot ||
      !verify_confirmation(extension_ctx_, params_.server_vk, conf)) {
    return fail(AuditFailure::InvalidSignature);
  }
  confirmation_ = conf;
  verifier_.emplace(rerandomization_statement(*params_.group, params_.pk, offer.ballot, offer.rerandomized), coins_);
}

std::optional<zk::Message> AuditRun::on_message(GroupContext& ctx, const zk::Message& incoming) {
  if (done()) return std::nullopt;
  if (!verifier_) throw Error(ErrorCode::PhaseError, "proof message before offer");
  std::optional<zk::Message> reply;
  try {
    reply = verifier_->step(ctx, incoming);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PhaseError) throw;
  }
  if (verifier_->done()) finish(ctx);
  return reply;
}

void AuditRun::finish(GroupContext& ctx) {
  if (!verifier_->accepted()) return fail(AuditFailure::ZkpRejected);
  Vote shown;
  for (std::size_t j = 0; j < params_.ballot_length; ++j) {
    Element m;
    try {
      m = special_decrypt(ctx, params_.pk, offer_->rerandomized[j], qr_.r_star[j]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RandomnessMismatch) throw;
      return fail(AuditFailure::RandomnessMismatch);
    }
    auto index = params_.encoding->try_decode(m);
    if (!index) return fail(AuditFailure::UnknownVote);
    shown.push_back(*index);
  }
  outcome_ = AuditOutcome{AuditVerdict::Accept, std::move(shown), AuditFailure::None};
}

const AuditOutcome& AuditRun::outcome() const {
  if (!outcome_) throw Error(ErrorCode::PhaseError, "audit still running");
  return *outcome_;
}

std::optional<bool> AuditRun::confirmation_code() const {
  if (!verifier_ || !verifier_->done()) return std::nullopt;
  return verifier_->accepted();
}

std::optional<AuditTranscript> AuditRun::transcript() const {
  if (!verifier_ || !verifier_->done()) return std::nullopt;
  return AuditTranscript{qr_, *offer_, verifier_->transcript()};
}

VotingDevice::Receipt submit_ballot(GroupContext& device_ctx, VotingDevice& device, GroupContext& server_ctx,
                                    VotingServer& server, const VoterIntent& intent, EntropySource& device_rng,
                                    EntropySource& server_rng) {
  SessionToken token = server.open_submission(intent.voter, server_rng);
  CastMessage cast = device.cast(device_ctx, intent, device_rng);
  BlindMessage blind = server.receive_ballot(server_ctx, token, cast, server_rng);
  return device.finalize(device_ctx, blind);
}

AuditOutcome run_audit(GroupContext& server_ctx, VotingServer& server, GroupContext& device_ctx, AuditRun& run,
                       EntropySource& server_rng) {
  VotingServer::AuditStart start = server.audit_init(server_ctx, run.request(), server_rng);
  run.on_offer(start.offer);
  std::optional<zk::Message> msg = start.commit_key;
  while (!run.done()) {
    std::optional<zk::Message> reply = run.on_message(device_ctx, *msg);
    if (!reply) break;
    msg = server.audit_step(server_ctx, start.audit, *reply);
  }
  if (server.policy().confirmation_codes) {
    if (auto code = run.confirmation_code()) server.audit_report(start.audit, *code);
  }
  return run.outcome();
}

AuditTranscript simulate_audit_transcript(GroupContext& ctx, const ElectionParams& params, const VoterId& voter,
                                          const Vote& claimed_vote, const BallotCiphertext& c,
                                          const Confirmation& confirmation, EntropySource& rng) {
  check_length(params, claimed_vote.size(), "claimed vote length");
  check_length(params, c.size(), "ballot length");
  const Group& group = ctx.group();
  AuditTranscript t;
  t.qr = {params.election, voter, random_scalars(group, params.ballot_length, rng), ballot_digest(c)};
  t.offer.ballot = c;
  t.offer.confirmation = confirmation;
  for (std::size_t j = 0; j < c.size(); ++j) {
    t.offer.rerandomized.push_back(encrypt(ctx, params.pk, params.encoding->encode(claimed_vote[j]), t.qr.r_star[j]));
  }
  t.proof = zk::simulate(ctx, rerandomization_statement(group, params.pk, c, t.offer.rerandomized), rng);
  return t;
}

AuditOutcome replay_audit(GroupContext& ctx, const ElectionParams& params, const AuditTranscript& t) {
  AuditRun run(params, t.qr, zk::VerifierCoins{t.proof.e, t.proof.r});
  run.on_offer(t.offer);
  const zk::Message prover_msgs[] = {zk::CommitKeyMsg{t.proof.k}, zk::FirstMsg{t.proof.commitments},
                                     zk::ResponseMsg{t.proof.z}};
  for (const auto& msg : prover_msgs) {
    if (run.done()) break;
    auto reply = run.on_message(ctx, msg);
    // The replayed challenge commitment must be the recorded one.
    if (reply && std::holds_alternative<zk::ChallengeCommitMsg>(*reply) &&
        std::get<zk::ChallengeCommitMsg>(*reply).com != t.proof.com) {
      return {AuditVerdict::Reject, std::nullopt, AuditFailure::ZkpRejected};
    }
  }
  return run.outcome();
}

ServerViewSimulator::ServerViewSimulator(ElectionParams params, ElectionId election, VoterId voter,
                                         zk::VerifierCoins coins)
    : params_(std::move(params)), election_(election), voter_(voter), coins_(std::move(coins)) {}

void ServerViewSimulator::on_offer(const AuditOffer& offer) {
  verifier_.emplace(rerandomization_statement(*params_.group, params_.pk, offer.ballot, offer.rerandomized), coins_);
}

std::optional<zk::Message> ServerViewSimulator::on_message(GroupContext& ctx, const zk::Message& incoming) {
  if (!verifier_) throw Error(ErrorCode::PhaseError, "proof message before offer");
  if (verifier_->done()) return std::nullopt;
  try {
    return verifier_->step(ctx, incoming);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PhaseError) throw;
    return std::nullopt;
  }
}

bool ServerViewSimulator::done() const { return verifier_ && verifier_->done(); }

std::optional<bool> ServerViewSimulator::confirmation_code() const {
  if (!done()) return std::nullopt;
  return verifier_->accepted();
}

CommitmentRun draw_commitment_run(const CommitmentElection& election, std::size_t vote, EntropySource& rng) {
  const Group& group = *election.group;
  CommitmentRun run;
  run.vote = vote;
  run.r = group.random_scalar(rng);
  run.x = group.random_scalar(rng);
  Scalar tau = group.random_scalar(rng);
  run.commit_key = {tau, group.power(group.generator(), tau)};
  run.prover_coins = zk::draw_prover_coins(group, {1, 1}, rng);
  run.verifier_coins = zk::draw_verifier_coins(group, rng);
  run.cheat_guess = group.zero();
  return run;
}

CommitmentResult run_commitment_variant(GroupContext& device_ctx, GroupContext& server_ctx,
                                        GroupContext& auditor_ctx, const CommitmentElection& election,
                                        const CommitmentRun& run) {
  const Group& group = *election.group;
  const PedersenParams& pp = election.params;
  if (run.vote >= election.alphabet_size) throw Error(ErrorCode::UnknownVote, "vote outside alphabet");

  CommitmentResult out;
  out.commitment = commit(device_ctx, pp, group.scalar_from_u64(run.vote), run.r);
  out.rerandomized = rerandomize_commitment(server_ctx, pp, out.commitment, run.x);
  if (run.shift) {
    out.rerandomized = group.mul(out.rerandomized, server_ctx.exp(pp.g, group.scalar_from_u64(*run.shift)));
  }
  out.r_star = group.add(run.r, run.x);

  zk::DlogStatement st = zk::DlogStatement::schnorr(pp.h, group.div(out.rerandomized, out.commitment));
  zk::Verifier verifier(st, run.verifier_coins);
  if (run.shift) {
    zk::GuessingProver prover(st, run.commit_key, run.cheat_guess, run.prover_coins.a);
    out.proof = drive(server_ctx, auditor_ctx, prover, verifier);
  } else {
    zk::Prover prover(st, {run.x}, run.commit_key, run.prover_coins);
    out.proof = drive(server_ctx, auditor_ctx, prover, verifier);
  }

  if (!verifier.accepted()) {
    out.outcome = {AuditVerdict::Reject, std::nullopt, AuditFailure::ZkpRejected};
    return out;
  }
  try {
    std::size_t v = open_with_randomness(auditor_ctx, pp, out.rerandomized, out.r_star, election.alphabet_size);
    out.outcome = {AuditVerdict::Accept, Vote{v}, AuditFailure::None};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OpeningMismatch) throw;
    out.outcome = {AuditVerdict::Reject, std::nullopt, AuditFailure::OpeningMismatch};
  }
  return out;
}

}  // namespace cai
