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

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cai/protocol.hpp"
#include "cai/verifiability.hpp"
#include "cai/wire.hpp"

namespace cai::harness {

enum class VdBehavior { Honest, FlipVote, SubstituteCiphertext, Replay };
enum class VsBehavior { Honest, SubstituteCiphertext, BadProof, WithholdRecord, Replay };
enum class AdBehavior { Honest, FlipVote, Replay };

std::string_view to_string(VdBehavior b);
std::string_view to_string(VsBehavior b);
std::string_view to_string(AdBehavior b);

/// One role with a behaviour descriptor, e.g. {VotingServer, "withhold-record"}.
struct ActorScript {
  wire::Role role;
  std::string behavior;
};

struct Scripts {
  VdBehavior vd = VdBehavior::Honest;
  VsBehavior vs = VsBehavior::Honest;
  AdBehavior ad = AdBehavior::Honest;

  friend bool operator==(const Scripts&, const Scripts&) = default;
};

/// Exactly one script per device/server role. Throws Error{InvalidConfig}.
Scripts scripts_from(const std::vector<ActorScript>& scripts);
/// "honest" or a comma list such as "vd:flip-vote,vs:withhold-record".
Scripts parse_scenario(std::string_view name);
std::string scenario_name(const Scripts& s);
/// Every server behaviour combined with: both devices honest, or exactly one
/// corrupted device.
std::vector<Scripts> scenario_matrix();

enum class Transport { InProcess, Socket };

struct ScenarioConfig {
  std::string group = "tiny";
  std::vector<std::string> labels{"yes", "no", "blank"};
  std::size_t ballot_length = 1;
  bool replacement = false;
  bool confirmation_codes = false;
  std::size_t voters = 3;
  Transport transport = Transport::InProcess;
  std::chrono::milliseconds timeout = wire::kDefaultTimeout;
};

struct VoterReport {
  std::string voter;
  Vote intent;
  std::string submission_error;  // empty when submission completed
  std::string audit_error;       // transport or protocol error during audit
  std::optional<AuditOutcome> audit;
  bool voter_accepts = false;
  bool confirmations_match = false;
  std::optional<ReceiptVerdict> receipt;
  std::optional<Vote> board_vote;
  std::optional<bool> replay_rejected;
  std::uint64_t vd_exponentiations = 0;
  std::uint64_t vs_audit_exponentiations = 0;
  std::uint64_t ad_exponentiations = 0;
  std::string transcript_digest;

  /// The voter rejects, or the receipt checks out and the board counts the
  /// intent, or the voter holds evidence against the server.
  bool guarantee_holds() const;
};

struct ScenarioReport {
  std::uint64_t seed = 0;
  std::string group;
  Scripts scripts;
  std::vector<VoterReport> voters;
  std::size_t board_size = 0;
  std::string board_head;
  std::optional<Tally> tally;
  std::string tally_error;
  std::size_t server_frames = 0;
  std::string server_log_digest;

  std::size_t counterexamples() const;
};

/// Structured text with sorted keys; identical reports give identical text.
std::string to_json(const ScenarioReport& report);

/// The voting server behind a frame handler. Honest unless told otherwise.
/// Records every frame it receives.
class ServerEndpoint {
 public:
  ServerEndpoint(ElectionParams params, SigningKeyPair key, ServerPolicy policy, BulletinBoard* board,
                 VsBehavior behavior, std::uint64_t seed);

  Bytes handle(ByteView request);
  wire::Handler handler() {
    return [this](ByteView b) { return handle(b); };
  }

  const std::vector<Bytes>& log() const { return log_; }
  std::uint64_t audit_exponentiations(const VoterId& voter) const;
  const VotingServer& server() const { return server_; }

 private:
  struct BadRun {
    VoterId voter;
    zk::GuessingProver prover;
  };

  wire::WireMessage dispatch(const wire::WireMessage& msg);
  wire::WireMessage on_cast(const wire::WireMessage& msg);
  wire::WireMessage on_audit_request(const wire::WireMessage& msg);
  wire::WireMessage on_proof(const wire::WireMessage& msg);

  ElectionParams params_;
  SigningKeyPair key_;
  BulletinBoard* board_;
  VsBehavior behavior_;
  SeededEntropy rng_;
  GroupContext ctx_;
  VotingServer server_;
  std::vector<Bytes> log_;
  std::optional<BlindMessage> last_blind_;
  std::map<SessionToken, VoterId> audit_voter_;
  std::map<SessionToken, BadRun> bad_runs_;
  std::map<VoterId, std::uint64_t> audit_exps_;
};

/// BS1..BS4 over a link. Throws the server's error or Error{InvalidSignature}
/// from the device.
VotingDevice::Receipt submit_over_link(wire::Link& link, GroupContext& ctx, VotingDevice& device,
                                       const VoterIntent& intent, EntropySource& rng);

/// Runs an auditor (AuditRun or ServerViewSimulator) against the server over
/// a link, sending the confirmation code when asked to.
template <class Auditor>
void audit_over_link(wire::Link& link, GroupContext& ctx, Auditor& auditor, const ElectionParams& params,
                     bool send_confirmation) {
  using wire::Phase;
  using wire::Role;
  wire::WireMessage offer_frame =
      link.exchange({wire::kVersion, SessionToken{}, Role::AuditDevice, Phase::AuditRequest, encode(auditor.request())});
  wire::raise_if_error(offer_frame);
  const SessionToken audit = offer_frame.token;
  const std::size_t element = params.group->element_size(), scalar = params.group->scalar_size();
  const std::size_t expected = 2 * params.ballot_length * 2 * element + VoterId::kSize + 32 + 2 * scalar;
  if (offer_frame.payload.size() < expected) throw Error(ErrorCode::BadLength, "audit offer frame");
  ByteView payload(offer_frame.payload);
  auditor.on_offer(decode_audit_offer(params, payload.first(expected)));
  const zk::Shape shape{2, params.ballot_length};
  std::optional<zk::Message> msg = zk::decode(*params.group, shape, payload.subspan(expected));
  for (int step = 0; step < 8 && msg && !auditor.done(); ++step) {
    std::optional<zk::Message> reply = auditor.on_message(ctx, *msg);
    if (!reply) break;
    wire::WireMessage back =
        link.exchange({wire::kVersion, audit, Role::AuditDevice, Phase::Proof, zk::encode(*reply)});
    wire::raise_if_error(back);
    msg = zk::decode(*params.group, shape, back.payload);
  }
  if (send_confirmation) {
    if (auto code = auditor.confirmation_code()) {
      Bytes bit{static_cast<std::uint8_t>(*code ? 1 : 0)};
      wire::raise_if_error(link.exchange({wire::kVersion, audit, Role::AuditDevice, Phase::Confirm, bit}));
    }
  }
}

/// Deterministic in the seed; the transport does not change the report.
ScenarioReport run_scenario(const Scripts& scripts, const ScenarioConfig& config, std::uint64_t seed);

}  // namespace cai::harness
