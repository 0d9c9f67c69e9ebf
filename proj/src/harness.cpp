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

#include "cai/harness.hpp"

#include <algorithm>

#include <json.hpp>

#include "cai/error.hpp"

namespace cai::harness {
namespace {

using wire::Phase;
using wire::Role;
using wire::WireMessage;

constexpr std::string_view kVdNames[] = {"honest", "flip-vote", "substitute-ciphertext", "replay"};
constexpr std::string_view kVsNames[] = {"honest", "substitute-ciphertext", "bad-proof", "withhold-record", "replay"};
constexpr std::string_view kAdNames[] = {"honest", "flip-vote", "replay"};

template <class E, std::size_t N>
E parse_behavior(std::string_view text, const std::string_view (&names)[N], std::string_view role) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<E>(i);
  }
  throw Error(ErrorCode::InvalidConfig, std::string(role) + " has no behaviour '" + std::string(text) + "'");
}

WireMessage make(const SessionToken& token, Role role, Phase phase, Bytes payload = {}) {
  return {wire::kVersion, token, role, phase, std::move(payload)};
}

Vote shifted(const Vote& v, std::size_t alphabet) {
  Vote out;
  for (std::size_t x : v) out.push_back((x + 1) % alphabet);
  return out;
}

std::string hex_of(ByteView bytes) { return to_hex(bytes); }

// Records what a client sends, for the replaying audit device.
class RecordingLink final : public wire::Link {
 public:
  explicit RecordingLink(wire::Link& inner) : inner_(inner) {}
  WireMessage exchange(const WireMessage& request) override {
    sent.push_back(request);
    return inner_.exchange(request);
  }
  std::vector<WireMessage> sent;

 private:
  wire::Link& inner_;
};

std::unique_ptr<wire::Link> make_link(const ScenarioConfig& config, wire::Handler handler) {
  if (config.transport == Transport::Socket) return std::make_unique<wire::SocketLink>(std::move(handler), config.timeout);
  return std::make_unique<wire::InProcessLink>(std::move(handler));
}

SessionToken hello(wire::Link& link, const VoterId& voter) {
  WireMessage reply = link.exchange(make({}, Role::VotingDevice, Phase::Hello, Bytes(voter.bytes().begin(), voter.bytes().end())));
  wire::raise_if_error(reply);
  return reply.token;
}

BlindMessage send_cast(wire::Link& link, const ElectionParams& params, const WireMessage& cast) {
  WireMessage reply = link.exchange(cast);
  wire::raise_if_error(reply);
  return decode_blind(params, reply.payload);
}

struct DeviceRun {
  VotingDevice::Receipt receipt;
  std::optional<bool> replay_rejected;
};

DeviceRun device_submit(VdBehavior behavior, wire::Link& link, GroupContext& ctx, const ElectionSetup& setup,
                        const ServerPolicy& policy, const VoterIntent& intent, EntropySource& rng, std::uint64_t seed) {
  const ElectionParams& params = setup.params;
  const SessionToken token = hello(link, intent.voter);
  const Vote lie = shifted(intent.vote, params.encoding->size());

  if (behavior == VdBehavior::SubstituteCiphertext) {
    // Shows the voter a receipt for an honest ballot it never sent.
    VotingDevice honest(params), evil(params);
    CastMessage real = honest.cast(ctx, intent, rng);
    CastMessage sent = evil.cast(ctx, {intent.voter, lie}, rng);
    BlindMessage blind = send_cast(link, params, make(token, Role::VotingDevice, Phase::Cast, encode(sent)));
    evil.finalize(ctx, blind);
    QrPayload qr{params.election, intent.voter, {}, ballot_digest(real.ballot)};
    for (std::size_t j = 0; j < blind.x.size(); ++j) {
      qr.r_star.push_back(params.group->add(blind.x[j], honest.state()->r[j]));
    }
    return {{qr, blind.confirmation}, std::nullopt};
  }

  VotingDevice vd(params);
  CastMessage cast = vd.cast(ctx, behavior == VdBehavior::FlipVote ? VoterIntent{intent.voter, lie} : intent, rng);
  const WireMessage cast_frame = make(token, Role::VotingDevice, Phase::Cast, encode(cast));
  DeviceRun run{vd.finalize(ctx, send_cast(link, params, cast_frame)), std::nullopt};

  if (behavior == VdBehavior::Replay) {
    bool same_server = link.exchange(cast_frame).phase == Phase::Error;
    ServerEndpoint fresh(params, setup.server_key, policy, nullptr, VsBehavior::Honest, seed);
    bool fresh_server = wire::unframe(fresh.handle(wire::frame(cast_frame))).phase == Phase::Error;
    run.replay_rejected = same_server && fresh_server;
  }
  return run;
}

struct PreviousAudit {
  std::vector<WireMessage> frames;
  AuditOutcome outcome;
  std::optional<Confirmation> confirmation;
};

nlohmann::json vote_json(const std::optional<Vote>& v) {
  if (!v) return nullptr;
  return nlohmann::json(*v);
}

}  // namespace

std::string_view to_string(VdBehavior b) { return kVdNames[static_cast<std::size_t>(b)]; }
std::string_view to_string(VsBehavior b) { return kVsNames[static_cast<std::size_t>(b)]; }
std::string_view to_string(AdBehavior b) { return kAdNames[static_cast<std::size_t>(b)]; }

Scripts scripts_from(const std::vector<ActorScript>& scripts) {
  Scripts out;
  std::map<Role, int> seen;
  for (const auto& s : scripts) {
    ++seen[s.role];
    switch (s.role) {
      case Role::VotingDevice: out.vd = parse_behavior<VdBehavior>(s.behavior, kVdNames, "vd"); break;
      case Role::VotingServer: out.vs = parse_behavior<VsBehavior>(s.behavior, kVsNames, "vs"); break;
      case Role::AuditDevice: out.ad = parse_behavior<AdBehavior>(s.behavior, kAdNames, "ad"); break;
      case Role::Voter:
        if (s.behavior != "honest") throw Error(ErrorCode::InvalidConfig, "the voter is always honest");
        break;
    }
  }
  for (Role r : {Role::VotingDevice, Role::VotingServer, Role::AuditDevice}) {
    if (seen[r] != 1) throw Error(ErrorCode::InvalidConfig, "need exactly one script per role");
  }
  return out;
}

Scripts parse_scenario(std::string_view name) {
  std::vector<ActorScript> scripts{{Role::VotingDevice, "honest"}, {Role::VotingServer, "honest"},
                                   {Role::AuditDevice, "honest"}};
  if (name == "honest") return scripts_from(scripts);
  while (!name.empty()) {
    std::size_t comma = name.find(',');
    std::string_view item = name.substr(0, comma);
    name = comma == std::string_view::npos ? std::string_view{} : name.substr(comma + 1);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "expected role:behaviour");
    std::string_view role = item.substr(0, colon);
    std::string behavior(item.substr(colon + 1));
    if (role == "vd") scripts[0].behavior = behavior;
    else if (role == "vs") scripts[1].behavior = behavior;
    else if (role == "ad") scripts[2].behavior = behavior;
    else throw Error(ErrorCode::InvalidConfig, "unknown role '" + std::string(role) + "'");
  }
  return scripts_from(scripts);
}

std::string scenario_name(const Scripts& s) {
  return "vd:" + std::string(to_string(s.vd)) + ",vs:" + std::string(to_string(s.vs)) + ",ad:" +
         std::string(to_string(s.ad));
}

std::vector<Scripts> scenario_matrix() {
  std::vector<Scripts> out;
  for (std::size_t vs = 0; vs < std::size(kVsNames); ++vs) {
    const auto server = static_cast<VsBehavior>(vs);
    out.push_back({VdBehavior::Honest, server, AdBehavior::Honest});
    for (auto vd : {VdBehavior::FlipVote, VdBehavior::SubstituteCiphertext, VdBehavior::Replay}) {
      out.push_back({vd, server, AdBehavior::Honest});
    }
    for (auto ad : {AdBehavior::FlipVote, AdBehavior::Replay}) out.push_back({VdBehavior::Honest, server, ad});
  }
  return out;
}

bool VoterReport::guarantee_holds() const {
  if (!voter_accepts) return true;
  if (receipt == ReceiptVerdict::ServerMisbehaviorEvidence) return true;
  return receipt == ReceiptVerdict::Accept && board_vote == intent;
}

std::size_t ScenarioReport::counterexamples() const {
  std::size_t n = 0;
  for (const auto& v : voters) n += v.guarantee_holds() ? 0 : 1;
  return n;
}

std::string to_json(const ScenarioReport& r) {
  using nlohmann::json;
  json voters = json::array();
  for (const auto& v : r.voters) {
    json audit = nullptr;
    if (v.audit) {
      audit = {{"verdict", v.audit->accepted() ? "accept" : "reject"},
               {"reason", to_string(v.audit->reason)},
               {"displayed", vote_json(v.audit->displayed_vote)}};
    }
    voters.push_back({
        {"voter", v.voter},
        {"intent", v.intent},
        {"submission_error", v.submission_error},
        {"audit_error", v.audit_error},
        {"audit", audit},
        {"voter_accepts", v.voter_accepts},
        {"confirmations_match", v.confirmations_match},
        {"receipt", v.receipt ? json(to_string(*v.receipt)) : json(nullptr)},
        {"board_vote", vote_json(v.board_vote)},
        {"replay_rejected", v.replay_rejected ? json(*v.replay_rejected) : json(nullptr)},
        {"exponentiations", {{"vd", v.vd_exponentiations}, {"vs_audit", v.vs_audit_exponentiations},
                             {"ad", v.ad_exponentiations}}},
        {"transcript_digest", v.transcript_digest},
        {"guarantee_holds", v.guarantee_holds()},
    });
  }
  json doc = {
      {"seed", r.seed},
      {"group", r.group},
      {"scenario", scenario_name(r.scripts)},
      {"voters", voters},
      {"board", {{"size", r.board_size}, {"head", r.board_head}}},
      {"tally", r.tally ? json(r.tally->counts) : json(nullptr)},
      {"tally_error", r.tally_error},
      {"server", {{"frames", r.server_frames}, {"log_digest", r.server_log_digest}}},
      {"counterexamples", r.counterexamples()},
  };
  return doc.dump(2) + "\n";
}

ServerEndpoint::ServerEndpoint(ElectionParams params, SigningKeyPair key, ServerPolicy policy, BulletinBoard* board,
                               VsBehavior behavior, std::uint64_t seed)
    : params_(params),
      key_(key),
      board_(board),
      behavior_(behavior),
      rng_(seed, "vs"),
      ctx_(params.group),
      server_(params, key, policy, nullptr) {}

Bytes ServerEndpoint::handle(ByteView request) {
  log_.emplace_back(request.begin(), request.end());
  WireMessage msg;
  try {
    msg = wire::unframe(request);
  } catch (const Error& e) {
    return wire::frame(wire::error_message(Role::VotingServer, {}, e.code(), e.what()));
  }
  try {
    return wire::frame(dispatch(msg));
  } catch (const Error& e) {
    return wire::frame(wire::error_message(Role::VotingServer, msg.token, e.code(), e.what()));
  }
}

std::uint64_t ServerEndpoint::audit_exponentiations(const VoterId& voter) const {
  auto it = audit_exps_.find(voter);
  return it == audit_exps_.end() ? 0 : it->second;
}

WireMessage ServerEndpoint::dispatch(const WireMessage& msg) {
  switch (msg.phase) {
    case Phase::Hello: {
      SessionToken token = server_.open_submission(VoterId::from_bytes(msg.payload), rng_);
      return make(token, Role::VotingServer, Phase::SubmitToken);
    }
    case Phase::Cast: return on_cast(msg);
    case Phase::AuditRequest: return on_audit_request(msg);
    case Phase::Proof: return on_proof(msg);
    case Phase::Confirm:
      if (msg.payload.size() != 1) throw Error(ErrorCode::BadLength, "confirmation code");
      server_.audit_report(msg.token, msg.payload[0] != 0);
      return make(msg.token, Role::VotingServer, Phase::Ack);
    default: throw Error(ErrorCode::PhaseError, "server does not accept this phase");
  }
}

WireMessage ServerEndpoint::on_cast(const WireMessage& msg) {
  CastMessage cast = decode_cast(params_, msg.payload);
  BlindMessage blind = server_.receive_ballot(ctx_, msg.token, cast, rng_);
  const AuditSession& s = *server_.session(cast.voter);
  GroupContext side(params_.group);
  if (board_ != nullptr) {
    switch (behavior_) {
      case VsBehavior::WithholdRecord: break;
      case VsBehavior::SubstituteCiphertext: {
        BallotCiphertext other;
        for (std::size_t j = 0; j < s.ballot.size(); ++j) {
          other.push_back(encrypt(side, params_.pk, params_.encoding->encode(0), params_.group->random_scalar(rng_)));
        }
        Confirmation c = sign_confirmation(side, key_, cast.voter, other, rng_);
        board_->publish(side, {cast.voter, other, c.sig});
        break;
      }
      default: board_->publish(side, {s.voter, s.ballot, s.confirmation.sig});
    }
  }
  BlindMessage out = blind;
  if (behavior_ == VsBehavior::Replay && last_blind_) out = *last_blind_;
  last_blind_ = blind;
  return make(msg.token, Role::VotingServer, Phase::Blind, encode(out));
}

WireMessage ServerEndpoint::on_audit_request(const WireMessage& msg) {
  const AuditRequest req = decode_audit_request(msg.payload);
  const std::uint64_t before = ctx_.exponentiations();
  SessionToken token;
  AuditOffer offer;
  zk::Message first;
  if (behavior_ == VsBehavior::BadProof) {
    const Group& group = *params_.group;
    const AuditSession* s = req.election == params_.election ? server_.session(req.voter) : nullptr;
    if (s == nullptr) throw Error(ErrorCode::UnknownSession, "no ballot for voter");
    // c* = ReRand(c; x) with the plaintext multiplied by g, proven by guessing.
    BallotCiphertext c_star;
    std::vector<Scalar> z;
    for (std::size_t j = 0; j < s->ballot.size(); ++j) {
      Ciphertext cj = rerandomize(ctx_, params_.pk, s->ballot[j], s->x[j]);
      cj.w = group.mul(cj.w, group.generator());
      c_star.push_back(cj);
      z.push_back(group.random_scalar(rng_));
    }
    zk::DlogStatement st = rerandomization_statement(group, params_.pk, s->ballot, c_star);
    zk::GuessingProver prover(std::move(st), s->commit_key, group.random_scalar(rng_), std::move(z));
    std::array<std::uint8_t, SessionToken::kSize> raw{};
    rng_.fill(raw);
    token = SessionToken(raw);
    first = prover.start(ctx_);
    bad_runs_.insert_or_assign(token, BadRun{req.voter, std::move(prover)});
    offer = {s->ballot, std::move(c_star), s->confirmation};
  } else {
    VotingServer::AuditStart start = server_.audit_init(ctx_, req, rng_);
    token = start.audit;
    offer = std::move(start.offer);
    first = std::move(start.commit_key);
  }
  audit_voter_[token] = req.voter;
  audit_exps_[req.voter] += ctx_.exponentiations() - before;
  Bytes payload = encode(offer);
  Bytes tail = zk::encode(first);
  payload.insert(payload.end(), tail.begin(), tail.end());
  return make(token, Role::VotingServer, Phase::AuditOffer, std::move(payload));
}

WireMessage ServerEndpoint::on_proof(const WireMessage& msg) {
  auto who = audit_voter_.find(msg.token);
  if (who == audit_voter_.end()) throw Error(ErrorCode::UnknownSession, "audit token");
  const zk::Message incoming = zk::decode(*params_.group, {2, params_.ballot_length}, msg.payload);
  const std::uint64_t before = ctx_.exponentiations();
  zk::Message reply;
  if (auto bad = bad_runs_.find(msg.token); bad != bad_runs_.end()) {
    reply = bad->second.prover.step(ctx_, incoming);
  } else {
    reply = server_.audit_step(ctx_, msg.token, incoming);
  }
  audit_exps_[who->second] += ctx_.exponentiations() - before;
  return make(msg.token, Role::VotingServer, Phase::Proof, zk::encode(reply));
}

VotingDevice::Receipt submit_over_link(wire::Link& link, GroupContext& ctx, VotingDevice& device,
                                       const VoterIntent& intent, EntropySource& rng) {
  const SessionToken token = hello(link, intent.voter);
  CastMessage cast = device.cast(ctx, intent, rng);
  const WireMessage frame = make(token, Role::VotingDevice, Phase::Cast, encode(cast));
  return device.finalize(ctx, send_cast(link, device.params(), frame));
}

ScenarioReport run_scenario(const Scripts& scripts, const ScenarioConfig& config, std::uint64_t seed) {
  std::shared_ptr<const Group> group = group_by_name(config.group);
  GroupContext setup_ctx(group);
  SeededEntropy setup_rng(seed, "setup");
  const ElectionSetup setup =
      setup_election(setup_ctx, ElectionId::from_name("scenario"), config.labels, config.ballot_length, setup_rng);
  const ElectionParams& params = setup.params;
  const ServerPolicy policy{config.replacement, config.confirmation_codes};

  BulletinBoard board(group, params.server_vk, config.replacement);
  ServerEndpoint endpoint(params, setup.server_key, policy, &board, scripts.vs, seed);
  std::unique_ptr<wire::Link> link = make_link(config, endpoint.handler());

  ScenarioReport report;
  report.seed = seed;
  report.group = config.group;
  report.scripts = scripts;

  SeededEntropy intents(seed, "intent");
  std::vector<std::optional<VotingDevice::Receipt>> receipts;
  std::vector<std::optional<Confirmation>> ad_copies;
  std::optional<PreviousAudit> previous;

  for (std::size_t i = 0; i < config.voters; ++i) {
    VoterReport vr;
    const VoterId voter = VoterId::from_name("voter-" + std::to_string(i));
    vr.voter = voter.name();
    for (std::size_t j = 0; j < config.ballot_length; ++j) vr.intent.push_back(intents.next_u64() % config.labels.size());

    SeededEntropy vd_rng(seed, "vd/" + std::to_string(i)), ad_rng(seed, "ad/" + std::to_string(i));
    GroupContext vd_ctx(group), ad_ctx(group);
    std::optional<VotingDevice::Receipt> receipt;
    try {
      DeviceRun run = device_submit(scripts.vd, *link, vd_ctx, setup, policy, {voter, vr.intent}, vd_rng, seed);
      receipt = run.receipt;
      vr.replay_rejected = run.replay_rejected;
    } catch (const Error& e) {
      vr.submission_error = std::string(to_string(e.code()));
    }
    vr.vd_exponentiations = vd_ctx.exponentiations();

    std::optional<Confirmation> ad_copy;
    if (receipt) {
      if (scripts.ad == AdBehavior::Replay && previous) {
        // Replays the previous voter's audit frames and shows that outcome.
        bool rejected = false;
        for (const auto& f : previous->frames) {
          try {
            rejected |= link->exchange(f).phase == Phase::Error;
          } catch (const Error& e) {
            rejected = true;
          }
        }
        vr.replay_rejected = rejected;
        vr.audit = previous->outcome;
        ad_copy = previous->confirmation;
      } else {
        RecordingLink recorder(*link);
        AuditRun run(params, receipt->qr, ad_rng);
        try {
          audit_over_link(recorder, ad_ctx, run, params, config.confirmation_codes);
        } catch (const Error& e) {
          vr.audit_error = std::string(to_string(e.code()));
        }
        AuditOutcome outcome = run.done() ? run.outcome() : AuditOutcome{};
        if (auto t = run.transcript()) vr.transcript_digest = hex_of(sha256(encode_audit_transcript(*t)));
        ad_copy = run.confirmation();
        previous = PreviousAudit{recorder.sent, outcome, ad_copy};
        if (scripts.ad == AdBehavior::FlipVote && outcome.displayed_vote) {
          outcome.displayed_vote = shifted(*outcome.displayed_vote, params.encoding->size());
        }
        vr.audit = outcome;
      }
      vr.confirmations_match = ad_copy && *ad_copy == receipt->confirmation;
      vr.voter_accepts = vr.audit && vr.confirmations_match && voter_accepts(vr.intent, *vr.audit);
    }
    vr.ad_exponentiations = ad_ctx.exponentiations();
    vr.vs_audit_exponentiations = endpoint.audit_exponentiations(voter);
    receipts.push_back(receipt);
    ad_copies.push_back(ad_copy);
    report.voters.push_back(std::move(vr));
  }
  link.reset();  // joins the server thread before reading shared state

  GroupContext check_ctx(group);
  for (std::size_t i = 0; i < report.voters.size(); ++i) {
    VoterReport& vr = report.voters[i];
    const VoterId voter = VoterId::from_name(vr.voter);
    if (receipts[i]) {
      // Each copy the voter received is checked against the scanned digest.
      std::vector<ReceiptVerdict> verdicts;
      for (const auto* copy : {&receipts[i]->confirmation, ad_copies[i] ? &*ad_copies[i] : nullptr}) {
        if (copy != nullptr) verdicts.push_back(receipt_check(check_ctx, board, *copy, receipts[i]->qr.ballot));
      }
      auto has = [&](ReceiptVerdict v) { return std::find(verdicts.begin(), verdicts.end(), v) != verdicts.end(); };
      vr.receipt = has(ReceiptVerdict::ServerMisbehaviorEvidence) ? ReceiptVerdict::ServerMisbehaviorEvidence
                   : has(ReceiptVerdict::Reject)                   ? ReceiptVerdict::Reject
                                                                   : ReceiptVerdict::Accept;
    }
    if (const BallotRecord* record = board.find(voter)) {
      Vote v;
      for (const auto& c : record->ballot) {
        auto index = params.encoding->try_decode(decrypt(check_ctx, setup.election_key.sk, c));
        if (!index) break;
        v.push_back(*index);
      }
      if (v.size() == record->ballot.size()) vr.board_vote = v;
    }
  }

  report.board_size = board.size();
  report.board_head = hex_of(board.head_digest());
  try {
    report.tally = naive_tally(check_ctx, setup.election_key.sk, board, *params.encoding, params.ballot_length);
  } catch (const Error& e) {
    report.tally_error = std::string(to_string(e.code()));
  }
  report.server_frames = endpoint.log().size();
  Sha256 log_hash;
  for (const auto& f : endpoint.log()) log_hash.update(f);
  report.server_log_digest = hex_of(log_hash.finish());
  return report;
}

}  // namespace cai::harness
