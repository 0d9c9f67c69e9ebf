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

#include <json.hpp>

#include "cai/error.hpp"
#include "cai/harness.hpp"
#include "doctest.h"

using namespace cai;
using namespace cai::harness;

namespace {

ScenarioReport run(std::string_view scenario, std::uint64_t seed, ScenarioConfig config = {}) {
  return run_scenario(parse_scenario(scenario), config, seed);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("all honest, seed 7") {
  ScenarioReport r = run("honest", 7);
  REQUIRE(r.voters.size() == 3);
  std::vector<std::size_t> expected(3, 0);
  for (const auto& v : r.voters) {
    CHECK(v.submission_error.empty());
    REQUIRE(v.audit);
    CHECK(v.audit->accepted());
    CHECK(v.audit->displayed_vote == v.intent);
    CHECK(v.voter_accepts);
    CHECK(v.confirmations_match);
    CHECK(v.receipt == ReceiptVerdict::Accept);
    CHECK(v.board_vote == v.intent);
    CHECK(v.vd_exponentiations == 2 + 2);  // cast, plus checking the confirmation
    CHECK(v.vs_audit_exponentiations == 6);
    CHECK(v.ad_exponentiations == 8);
    ++expected[v.intent[0]];
  }
  REQUIRE(r.tally);
  CHECK(r.tally->counts == std::vector<std::vector<std::size_t>>{expected});
  CHECK(r.board_size == 3);
  CHECK(r.counterexamples() == 0);
}

TEST_CASE("flip-vote device is rejected by the voter") {
  ScenarioReport r = run("vd:flip-vote", 7);
  for (const auto& v : r.voters) {
    REQUIRE(v.audit);
    CHECK(v.audit->accepted());
    CHECK(v.audit->displayed_vote != v.intent);
    CHECK_FALSE(v.voter_accepts);
  }
  CHECK(r.counterexamples() == 0);
}

TEST_CASE("substituting device is caught by the digest") {
  ScenarioReport r = run("vd:substitute-ciphertext", 3);
  for (const auto& v : r.voters) {
    CHECK(v.audit->reason == AuditFailure::HashMismatch);
    CHECK_FALSE(v.voter_accepts);
  }
}

TEST_CASE("withheld records become evidence") {
  ScenarioReport r = run("vs:withhold-record", 7);
  CHECK(r.board_size == 0);
  for (const auto& v : r.voters) {
    CHECK(v.voter_accepts);
    CHECK(v.receipt == ReceiptVerdict::ServerMisbehaviorEvidence);
  }
  CHECK(r.counterexamples() == 0);
}

TEST_CASE("substituted board records become evidence") {
  ScenarioReport r = run("vs:substitute-ciphertext", 9);
  for (const auto& v : r.voters) {
    CHECK(v.voter_accepts);
    CHECK(v.receipt == ReceiptVerdict::ServerMisbehaviorEvidence);
  }
}

TEST_CASE("bad proofs never reach an accepting voter") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ScenarioReport r = run("vs:bad-proof", seed);
    for (const auto& v : r.voters) CHECK_FALSE(v.voter_accepts);
  }
}

TEST_CASE("replays are refused") {
  ScenarioReport vd = run("vd:replay", 4);
  for (const auto& v : vd.voters) {
    CHECK(v.replay_rejected == true);
    CHECK(v.voter_accepts);
  }
  ScenarioReport ad = run("ad:replay", 4);
  CHECK_FALSE(ad.voters[0].replay_rejected);
  for (std::size_t i = 1; i < ad.voters.size(); ++i) {
    CHECK(ad.voters[i].replay_rejected == true);
    CHECK_FALSE(ad.voters[i].voter_accepts);
  }
  ScenarioReport vs = run("vs:replay", 4);
  CHECK(vs.voters[0].voter_accepts);
  for (std::size_t i = 1; i < vs.voters.size(); ++i) {
    CHECK(vs.voters[i].submission_error == "InvalidSignature");
    CHECK_FALSE(vs.voters[i].voter_accepts);
  }
}

TEST_CASE("reports are deterministic and transport independent") {
  ScenarioConfig socket;
  socket.transport = Transport::Socket;
  for (const Scripts& s : scenario_matrix()) {
    const std::string name = scenario_name(s);
    std::string a = to_json(run_scenario(s, {}, 11));
    CHECK(a == to_json(run_scenario(s, {}, 11)));
    CHECK(a == to_json(run_scenario(s, socket, 11)));
  }
  CHECK(to_json(run("honest", 1)) != to_json(run("honest", 2)));

  // Keys come out sorted.
  auto doc = nlohmann::json::parse(to_json(run("honest", 1)));
  CHECK(doc.dump(2) + "\n" == to_json(run("honest", 1)));
  CHECK(doc["scenario"] == "vd:honest,vs:honest,ad:honest");
}

TEST_CASE("matrix smoke run") {
  CHECK(scenario_matrix().size() == 30);
  for (const Scripts& s : scenario_matrix()) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(run_scenario(s, {}, seed).counterexamples() == 0);
  }
}

TEST_CASE("production group, two races, confirmation codes") {
  ScenarioConfig config;
  config.group = "production";
  config.ballot_length = 2;
  config.confirmation_codes = true;
  config.voters = 2;
  ScenarioReport r = run("honest", 5, config);
  for (const auto& v : r.voters) {
    CHECK(v.voter_accepts);
    CHECK(v.receipt == ReceiptVerdict::Accept);
    CHECK(v.vs_audit_exponentiations == 4 * 2 + 2);
    CHECK(v.ad_exponentiations == 6 * 2 + 2);
  }
}

TEST_CASE("script validation") {
  using wire::Role;
  CHECK(parse_scenario("vs:bad-proof,ad:flip-vote") ==
        Scripts{VdBehavior::Honest, VsBehavior::BadProof, AdBehavior::FlipVote});
  auto invalid = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidConfig;
    }
    return false;
  };
  CHECK(invalid([] { parse_scenario("vd:bad-proof"); }));
  CHECK(invalid([] { parse_scenario("xx:honest"); }));
  CHECK(invalid([] { parse_scenario("nonsense"); }));
  CHECK(invalid([] { scripts_from({{Role::VotingDevice, "honest"}, {Role::VotingServer, "honest"}}); }));
  CHECK(invalid([] {
    scripts_from({{Role::VotingDevice, "honest"},
                  {Role::VotingDevice, "replay"},
                  {Role::VotingServer, "honest"},
                  {Role::AuditDevice, "honest"}});
  }));
}

}  // TEST_SUITE
