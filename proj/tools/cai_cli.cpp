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

// Command-line front end: election setup, cast, audit, tally, board checks,
// cost benchmark and scripted scenarios. State lives in a directory of JSON
// files plus the exported board.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "cai/bench.hpp"
#include "cai/config.hpp"
#include "cai/error.hpp"
#include "cai/harness.hpp"
#include "cai/protocol.hpp"
#include "cai/verifiability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cai;

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A protocol-level verdict that ends the command with exit status 1.
struct Rejected {
  std::string reason;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string group;
  std::string scenario = "honest";
  std::string out;
  std::string state;
  std::string voter;
  std::string vote;
  std::string qr;
  std::string board;
  std::string transport = "inproc";
  std::size_t seeds = 100;
  std::size_t reps = 15;
  std::size_t max_length = 4;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << text;
}

void emit(const Options& o, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

std::unique_ptr<EntropySource> entropy(const Options& o, std::string_view label) {
  if (o.seed) return std::make_unique<SeededEntropy>(*o.seed, label);
  return std::make_unique<SystemEntropy>();
}

std::string hex(const auto& encoded) { return to_hex(encoded.bytes()); }

fs::path state_dir(const Options& o) {
  if (o.state.empty()) throw UsageError("--state is required");
  return o.state;
}

std::string safe_name(const std::string& voter) {
  if (voter.empty()) throw UsageError("--voter is required");
  for (char c : voter) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') {
      throw UsageError("voter names use letters, digits, '-', '_' and '.'");
    }
  }
  return voter;
}

// Everything a command needs, loaded from the state directory.
struct State {
  fs::path dir;
  ElectionConfig config;
  ElectionParams params;
  KeyPair election_key;
  SigningKeyPair server_key;
  std::optional<BulletinBoard> board;
  std::vector<AuditSession> sessions;

  ServerPolicy policy() const { return {config.replacement, config.confirmation_codes}; }
};

State load_state(const Options& o) {
  State s;
  s.dir = state_dir(o);
  const json election = json::parse(read_file(s.dir / "election.json"));
  const json secrets = json::parse(read_file(s.dir / "secrets.json"));
  s.config = parse_config(election.at("config").get<std::string>());
  auto group = group_by_name(s.config.group);
  const Group& g = *group;
  s.params.group = group;
  s.params.election = ElectionId::from_name(s.config.election_id);
  s.params.pk = g.decode_element(from_hex(election.at("pk").get<std::string>()));
  s.params.server_vk = g.decode_element(from_hex(election.at("server_vk").get<std::string>()));
  s.params.encoding = std::make_shared<VoteEncoding>(g, s.config.alphabet);
  s.params.ballot_length = s.config.ballot_length;
  s.election_key = {g.decode_scalar(from_hex(secrets.at("election_sk").get<std::string>())), s.params.pk};
  s.server_key = {g.decode_scalar(from_hex(secrets.at("server_sk").get<std::string>())), s.params.server_vk};

  const json server = json::parse(read_file(s.dir / "server.json"));
  for (const auto& j : server.at("sessions")) {
    AuditSession a;
    a.voter = VoterId::from_bytes(from_hex(j.at("voter").get<std::string>()));
    a.ballot = decode_ballot(g, from_hex(j.at("ballot").get<std::string>()));
    for (const auto& x : j.at("x")) a.x.push_back(g.decode_scalar(from_hex(x.get<std::string>())));
    a.commit_key.tau = g.decode_scalar(from_hex(j.at("tau").get<std::string>()));
    a.commit_key.k = g.decode_element(from_hex(j.at("k").get<std::string>()));
    a.confirmation = decode_confirmation(g, from_hex(j.at("confirmation").get<std::string>()));
    if (!j.at("reported").is_null()) a.reported_verdict = j.at("reported").get<bool>();
    s.sessions.push_back(std::move(a));
  }
  GroupContext ctx(group);
  const std::string board = read_file(o.board.empty() ? s.dir / "board.txt" : fs::path(o.board));
  try {
    s.board = BulletinBoard::import_text(ctx, s.params.server_vk, s.config.replacement, board);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    throw Rejected{std::string(to_string(e.code()))};
  }
  return s;
}

void save_server(const State& s, const VotingServer& server) {
  json sessions = json::array();
  for (const auto& [voter, a] : server.sessions()) {
    json xs = json::array();
    for (const auto& x : a.x) xs.push_back(hex(x));
    sessions.push_back({{"voter", to_hex(voter.bytes())},
                        {"ballot", to_hex(encode_ballot(a.ballot))},
                        {"x", xs},
                        {"tau", hex(a.commit_key.tau)},
                        {"k", hex(a.commit_key.k)},
                        {"confirmation", to_hex(encode_confirmation(a.confirmation))},
                        {"reported", a.reported_verdict ? json(*a.reported_verdict) : json(nullptr)}});
  }
  write_file(s.dir / "server.json", json{{"sessions", sessions}}.dump(2) + "\n");
}

VotingServer restore_server(const State& s) {
  VotingServer server(s.params, s.server_key, s.policy());
  for (const auto& a : s.sessions) server.restore_session(a);
  return server;
}

Vote parse_vote(const State& s, const std::string& text) {
  Vote v;
  std::stringstream ss(text);
  std::string label;
  while (std::getline(ss, label, ',')) {
    try {
      v.push_back(s.params.encoding->index_of(label));
    } catch (const Error&) {
      throw UsageError("'" + label + "' is not on the ballot");
    }
  }
  if (v.size() != s.params.ballot_length) {
    throw UsageError("expected " + std::to_string(s.params.ballot_length) + " comma-separated choices");
  }
  return v;
}

json labels_of(const State& s, const Vote& v) {
  json out = json::array();
  for (std::size_t i : v) out.push_back(s.params.encoding->label(i));
  return out;
}

int cmd_setup(const Options& o) {
  ElectionConfig config = o.config.empty() ? ElectionConfig{} : load_config(o.config);
  if (!o.group.empty()) config.group = o.group;
  config.validate();
  const fs::path dir = state_dir(o);
  auto rng = entropy(o, "setup");
  GroupContext ctx(group_by_name(config.group));
  ElectionSetup setup = setup_election(ctx, ElectionId::from_name(config.election_id), config.alphabet,
                                       config.ballot_length, *rng);
  const json election{{"config", to_text(config)}, {"pk", hex(setup.params.pk)},
                      {"server_vk", hex(setup.params.server_vk)}};
  write_file(dir / "election.json", election.dump(2) + "\n");
  write_file(dir / "secrets.json", json{{"election_sk", hex(setup.election_key.sk)},
                                        {"server_sk", hex(setup.server_key.sk)}}.dump(2) + "\n");
  write_file(dir / "server.json", json{{"sessions", json::array()}}.dump(2) + "\n");
  write_file(dir / "board.txt", "");
  emit(o, {{"command", "setup"},
           {"group", config.group},
           {"election_id", config.election_id},
           {"alphabet", config.alphabet},
           {"ballot_length", config.ballot_length},
           {"pk", election["pk"]},
           {"server_vk", election["server_vk"]}});
  return kAccept;
}

int cmd_cast(const Options& o) {
  State s = load_state(o);
  const std::string name = safe_name(o.voter);
  const VoterIntent intent{VoterId::from_name(name), parse_vote(s, o.vote)};
  VotingServer server = restore_server(s);
  auto vd_rng = entropy(o, "cast/vd/" + name);
  auto vs_rng = entropy(o, "cast/vs/" + name);
  GroupContext vd_ctx(s.params.group), vs_ctx(s.params.group);
  VotingDevice device(s.params);

  VotingDevice::Receipt receipt;
  try {
    receipt = submit_ballot(vd_ctx, device, vs_ctx, server, intent, *vd_rng, *vs_rng);
  } catch (const Error& e) {
    throw Rejected{std::string(to_string(e.code()))};
  }
  const AuditSession& session = *server.session(intent.voter);
  GroupContext board_ctx(s.params.group);
  s.board->publish(board_ctx, {session.voter, session.ballot, session.confirmation.sig});
  write_file(s.dir / "board.txt", s.board->export_text());
  save_server(s, server);

  const std::string qr = armor_qr(receipt.qr);
  const fs::path qr_path = o.qr.empty() ? s.dir / "qr" / (name + ".txt") : fs::path(o.qr);
  write_file(qr_path, qr + "\n");
  emit(o, {{"command", "cast"},
           {"voter", name},
           {"ballot_digest", to_hex(receipt.qr.ballot)},
           {"qr", qr},
           {"qr_file", qr_path.string()},
           {"confirmation", to_hex(encode_confirmation(receipt.confirmation))}});
  return kAccept;
}

int cmd_audit(const Options& o) {
  State s = load_state(o);
  if (o.qr.empty()) throw UsageError("--qr is required");
  std::string text = read_file(o.qr);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
  QrPayload qr;
  try {
    qr = parse_qr(*s.params.group, text);
  } catch (const Error& e) {
    throw Rejected{std::string(to_string(e.code()))};
  }
  std::optional<Vote> intended;
  if (!o.vote.empty()) intended = parse_vote(s, o.vote);

  VotingServer server = restore_server(s);
  auto ad_rng = entropy(o, "audit/ad");
  auto vs_rng = entropy(o, "audit/vs");
  GroupContext vs_ctx(s.params.group), ad_ctx(s.params.group);
  AuditOutcome outcome;
  std::optional<Confirmation> confirmation;
  try {
    AuditRun run(s.params, qr, *ad_rng);
    outcome = run_audit(vs_ctx, server, ad_ctx, run, *vs_rng);
    confirmation = run.confirmation();
  } catch (const Error& e) {
    throw Rejected{std::string(to_string(e.code()))};
  }
  if (s.config.confirmation_codes) save_server(s, server);

  std::optional<ReceiptVerdict> receipt;
  if (confirmation) {
    GroupContext ctx(s.params.group);
    receipt = receipt_check(ctx, *s.board, *confirmation, qr.ballot);
  }
  json doc{{"command", "audit"},
           {"voter", qr.voter.name()},
           {"verdict", outcome.accepted() ? "accept" : "reject"},
           {"reason", to_string(outcome.reason)},
           {"displayed", outcome.displayed_vote ? labels_of(s, *outcome.displayed_vote) : json(nullptr)},
           {"receipt", receipt ? json(to_string(*receipt)) : json(nullptr)},
           {"audit_exponentiations", ad_ctx.exponentiations()},
           {"server_exponentiations", vs_ctx.exponentiations()}};
  if (intended) doc["voter_accepts"] = voter_accepts(*intended, outcome);
  emit(o, doc);

  if (!outcome.accepted()) throw Rejected{std::string(to_string(outcome.reason))};
  if (receipt && *receipt != ReceiptVerdict::Accept) throw Rejected{std::string(to_string(*receipt))};
  if (intended && !voter_accepts(*intended, outcome)) throw Rejected{"VoteMismatch"};
  return kAccept;
}

int cmd_tally(const Options& o) {
  State s = load_state(o);
  GroupContext ctx(s.params.group);
  Tally t;
  try {
    t = naive_tally(ctx, s.election_key.sk, *s.board, *s.params.encoding, s.params.ballot_length);
  } catch (const Error& e) {
    throw Rejected{std::string(to_string(e.code()))};
  }
  json races = json::array();
  for (const auto& race : t.counts) {
    json counts = json::object();
    for (std::size_t i = 0; i < race.size(); ++i) counts[s.params.encoding->label(i)] = race[i];
    races.push_back(counts);
  }
  emit(o, {{"command", "tally"}, {"ballots", s.board->size()}, {"races", races}});
  return kAccept;
}

int cmd_verify_board(const Options& o) {
  State s = load_state(o);
  emit(o, {{"command", "verify-board"}, {"records", s.board->size()}, {"head", to_hex(s.board->head_digest())}});
  return kAccept;
}

int cmd_bench(const Options& o) {
  const std::string group_name = o.group.empty() ? "production" : o.group;
  auto group = group_by_name(group_name);
  const std::uint64_t seed = o.seed.value_or(1);
  bench::DleqMeasurement dleq = bench::measure_dleq(group, seed);
  bool ok = dleq.accepted && dleq.prover == 4 && dleq.verifier == 6;
  json rows = json::array();
  for (std::size_t l = 1; l <= o.max_length; ++l) {
    bench::AuditMeasurement m = bench::measure_audit(group, l, seed);
    ok = ok && m.accepted && m.prover == 4 * l + 2 && m.verifier == 6 * l + 2;
    rows.push_back({{"ballot_length", l}, {"prover", m.prover}, {"verifier", m.verifier}});
  }
  emit(o, {{"command", "bench"},
           {"group", group_name},
           {"dleq_reused_key", {{"prover", dleq.prover}, {"verifier", dleq.verifier}}},
           {"audit", rows},
           {"expected", {{"prover", "4L+2"}, {"verifier", "6L+2"}}},
           {"counts_ok", ok}});

  // Timing is machine dependent, so it goes to stderr and never into the report.
  std::vector<double> medians = bench::median_audit_seconds(group, o.max_length, o.reps, seed);
  std::vector<double> xs;
  std::cerr << "ballot_length  median_audit_ms\n";
  for (std::size_t i = 0; i < medians.size(); ++i) {
    xs.push_back(static_cast<double>(i + 1));
    std::cerr << "  " << i + 1 << "            " << medians[i] * 1e3 << "\n";
  }
  bench::AffineFit fit = bench::fit_affine(xs, medians);
  std::cerr << "affine fit: " << fit.intercept * 1e3 << " ms + " << fit.slope * 1e3 << " ms/L, R^2 = "
            << fit.r_squared << "\n";
  if (!ok) throw Rejected{"CountMismatch"};
  return kAccept;
}

int cmd_scenario(const Options& o) {
  harness::ScenarioConfig config;
  if (!o.config.empty()) {
    ElectionConfig ec = load_config(o.config);
    config.group = ec.group;
    config.labels = ec.alphabet;
    config.ballot_length = ec.ballot_length;
    config.replacement = ec.replacement;
    config.confirmation_codes = ec.confirmation_codes;
  }
  if (!o.group.empty()) config.group = o.group;
  if (o.transport == "socket") {
    config.transport = harness::Transport::Socket;
  } else if (o.transport != "inproc") {
    throw UsageError("--transport is inproc or socket");
  }
  const std::uint64_t seed = o.seed.value_or(0);

  if (o.scenario == "matrix") {
    std::size_t runs = 0, counterexamples = 0;
    json failures = json::array();
    for (const auto& scripts : harness::scenario_matrix()) {
      for (std::uint64_t k = 0; k < o.seeds; ++k) {
        harness::ScenarioReport r = harness::run_scenario(scripts, config, seed + k);
        ++runs;
        if (std::size_t n = r.counterexamples()) {
          counterexamples += n;
          failures.push_back({{"scenario", harness::scenario_name(scripts)}, {"seed", seed + k}});
        }
      }
    }
    emit(o, {{"command", "scenario"},
             {"scenario", "matrix"},
             {"scenarios", harness::scenario_matrix().size()},
             {"runs", runs},
             {"counterexamples", counterexamples},
             {"failures", failures}});
    if (counterexamples > 0) throw Rejected{"GuaranteeViolated"};
    return kAccept;
  }

  harness::ScenarioReport r = harness::run_scenario(harness::parse_scenario(o.scenario), config, seed);
  const std::string text = harness::to_json(r);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
  for (const auto& v : r.voters) {
    if (!v.voter_accepts) {
      throw Rejected{!v.submission_error.empty() ? v.submission_error
                     : v.audit && !v.audit->accepted() ? std::string(to_string(v.audit->reason))
                                                        : "VoterReject"};
    }
    if (v.receipt != ReceiptVerdict::Accept) throw Rejected{std::string(to_string(v.receipt.value_or(ReceiptVerdict::Reject)))};
  }
  return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-device cast-as-intended verification: election demo and benchmark"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Election config file (key = value)");
    sub->add_option("--seed", o.seed, "Seed for reproducible runs");
    sub->add_option("--group", o.group, "Group backend")->check(CLI::IsMember({"tiny", "production"}));
    sub->add_option("--out", o.out, "Write the report here instead of stdout");
  };
  auto stateful = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--state", o.state, "Election state directory")->required();
  };

  CLI::App* setup = app.add_subcommand("setup", "Create election keys and an empty board");
  stateful(setup);
  CLI::App* cast = app.add_subcommand("cast", "Cast a ballot through the voting device");
  stateful(cast);
  cast->add_option("--voter", o.voter, "Voter name")->required();
  cast->add_option("--vote", o.vote, "Choice label(s), comma separated per race")->required();
  cast->add_option("--qr", o.qr, "Where to write the QR payload");
  CLI::App* audit = app.add_subcommand("audit", "Audit a cast ballot from its QR payload");
  stateful(audit);
  audit->add_option("--qr", o.qr, "QR payload file")->required();
  audit->add_option("--vote", o.vote, "The choice(s) the voter intended");
  CLI::App* tally = app.add_subcommand("tally", "Decrypt and count the board");
  stateful(tally);
  tally->add_option("--board", o.board, "Board export to use");
  CLI::App* verify = app.add_subcommand("verify-board", "Check every board signature");
  stateful(verify);
  verify->add_option("--board", o.board, "Board export to check");
  CLI::App* bench = app.add_subcommand("bench", "Exponentiation counts and audit latency");
  common(bench);
  bench->add_option("--reps", o.reps, "Timing repetitions per ballot length")->check(CLI::PositiveNumber);
  bench->add_option("--max-length", o.max_length, "Largest ballot length")->check(CLI::Range(1, 64));
  CLI::App* scenario = app.add_subcommand("scenario", "Run a scripted honest/adversarial scenario");
  common(scenario);
  scenario->add_option("--scenario", o.scenario, "'honest', 'matrix' or e.g. 'vd:flip-vote,vs:withhold-record'");
  scenario->add_option("--seeds", o.seeds, "Seeds per scenario for the matrix");
  scenario->add_option("--transport", o.transport, "inproc or socket");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kUsage;
  }

  try {
    int rc = kAccept;
    if (*setup) rc = cmd_setup(o);
    if (*cast) rc = cmd_cast(o);
    if (*audit) rc = cmd_audit(o);
    if (*tally) rc = cmd_tally(o);
    if (*verify) rc = cmd_verify_board(o);
    if (*bench) rc = cmd_bench(o);
    if (*scenario) rc = cmd_scenario(o);
    std::cerr << "accept\n";
    return rc;
  } catch (const Rejected& r) {
    std::cerr << "reject reason=" << r.reason << "\n";
    return kReject;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: unreadable state: " << e.what() << "\n";
    return kUsage;
  }
}
