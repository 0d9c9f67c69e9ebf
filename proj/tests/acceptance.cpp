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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Small-group checks are exhaustive and compared against the
// brute-force oracle; production-group checks are sampled.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cai/bench.hpp"
#include "cai/error.hpp"
#include "cai/harness.hpp"
#include "cai/protocol.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace cai;
using namespace testing_helpers;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  int id;
  std::string name;
  int failures = 0;
  std::string first_failure;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

int report(const Criterion& c) {
  const bool ok = c.failures == 0;
  std::printf("[%s] %d %s: %s", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str());
  if (!ok) std::printf(" (%d failed checks, first: %s)", c.failures, c.first_failure.c_str());
  std::printf("\n");
  std::fflush(stdout);
  return ok ? 0 : 1;
}

// p = 23 election: sk = 3 (pk = 8), server signing key sk = 5 (vk = 9), ten
// labels so label i encodes as 2^(i+1).
struct Tiny {
  ElectionParams params;
  KeyPair election;
  SigningKeyPair server_key{S(5), E(9)};
  VoterId alice = VoterId::from_name("alice");

  Tiny() {
    GroupContext ctx(tiny_group());
    election = keypair_from_secret(ctx, S(3));
    params.group = tiny_group();
    params.election = ElectionId::from_name("acceptance");
    params.pk = election.pk;
    params.server_vk = server_key.vk;
    params.encoding = std::make_shared<VoteEncoding>(
        tiny(), std::vector<std::string>{"l0", "l1", "l2", "l3", "l4", "l5", "l6", "l7", "l8", "l9"});
  }
};

constexpr std::size_t kLabels = 10;

// An entropy tape that makes SchnorrGroup::random_scalar return exactly the
// given values, in order (one big-endian u64 per scalar, above the rejection
// threshold).
BufferEntropy scalar_tape(const std::vector<std::uint64_t>& values) {
  Bytes out;
  for (std::uint64_t v : values) {
    const std::uint64_t word = 11 * 1000 + v;
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
  }
  return BufferEntropy(std::move(out));
}

// Feeds prover messages to an auditor until either side stops.
template <class Prover>
const AuditOutcome& drive(GroupContext& ctx, AuditRun& run, Prover& prover) {
  std::optional<zk::Message> msg = prover.start(ctx);
  while (msg && !run.done()) {
    auto reply = run.on_message(ctx, *msg);
    if (!reply) break;
    msg = prover.step(ctx, *reply);
  }
  return run.outcome();
}

// ---------------------------------------------------------------------------

int completeness() {
  Criterion c{1, "completeness"};
  Tiny t;
  const auto t0 = Clock::now();
  int runs = 0, accepted = 0;
  for (std::size_t v = 0; v < kLabels; ++v) {
    for (std::uint64_t r = 0; r < 11; ++r) {
      for (std::uint64_t x = 0; x < 11; ++x) {
        GroupContext dctx(tiny_group()), sctx(tiny_group()), actx(tiny_group());
        SeededEntropy srng(r * 11 + x, "server"), arng(v * 121 + r * 11 + x, "auditor");
        VotingDevice vd(t.params);
        VotingServer vs(t.params, t.server_key);
        const SessionToken token = vs.open_submission(t.alice, srng);
        const CastMessage cast = vd.cast(dctx, {t.alice, {v}}, {S(r)});
        const auto receipt = vd.finalize(dctx, vs.receive_ballot(sctx, token, cast, {S(x)}, srng));
        AuditRun run(t.params, receipt.qr, arng);
        const AuditOutcome out = run_audit(sctx, vs, actx, run, srng);
        ++runs;
        const std::string at = "v=" + std::to_string(v) + " r=" + std::to_string(r) + " x=" + std::to_string(x);
        c.check(voter_accepts({v}, out), "rejected at " + at);
        if (voter_accepts({v}, out)) ++accepted;
        // Oracle: c* = (g^(r+x), g^(v+1) * 8^(r+x)).
        const Ciphertext cs = run.transcript()->offer.rerandomized[0];
        const std::uint64_t rs = (r + x) % 11;
        c.check(val(cs.u) == oracle::pow_naive(2, rs), "c*.u at " + at);
        c.check(val(cs.w) == oracle::pow_naive(2, v + 1) * oracle::pow_naive(8, rs) % 23, "c*.w at " + at);
      }
    }
  }
  const double secs = since(t0);
  c.check(secs < 10.0, "sweep took " + std::to_string(secs) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d honest runs over (m, r, x) accepted with the intended vote in %.2f s", accepted,
                runs, secs);
  c.detail = buf;
  return report(c);
}

int soundness() {
  Criterion c{2, "soundness"};
  Tiny t;
  GroupContext ctx(tiny_group());
  const std::uint64_t r = 2, x = 1, rs = 3;
  std::uint64_t attempts = 0, wins_total = 0;

  for (std::size_t v = 0; v < kLabels; ++v) {
    VotingDevice vd(t.params);
    VotingServer vs(t.params, t.server_key);
    SeededEntropy srng(v, "server");
    const SessionToken token = vs.open_submission(t.alice, srng);
    const auto receipt =
        vd.finalize(ctx, vs.receive_ballot(ctx, token, vd.cast(ctx, {t.alice, {v}}, {S(r)}), {S(x)}, srng));
    const Ciphertext ct = vd.state()->ballot[0];
    for (std::size_t lie = 0; lie < kLabels; ++lie) {
      if (lie == v) continue;
      // The server swaps in an encryption of another label under r*.
      const BallotCiphertext c_star{encrypt(ctx, t.params.pk, t.params.encoding->encode(lie), S(rs))};
      const AuditOffer offer{{ct}, c_star, vs.session(t.alice)->confirmation};
      const zk::DlogStatement st = rerandomization_statement(tiny(), t.params.pk, {ct}, c_star);
      c.check(!st.holds(tiny(), {S(x)}), "statement holds for a substituted c*");

      for (std::uint64_t guess = 0; guess < 11; ++guess) {
        int wins = 0;
        for (std::uint64_t e = 0; e < 11; ++e) {
          AuditRun run(t.params, receipt.qr, zk::VerifierCoins{S(e), S((e * 7 + guess) % 11)});
          run.on_offer(offer);
          zk::GuessingProver prover(st, zk::make_commit_key(ctx, S((guess + 1) % 11)), S(guess), {S(e % 5)});
          const AuditOutcome& out = drive(ctx, run, prover);
          ++attempts;
          if (out.accepted()) {
            ++wins;
            c.check(e == guess && out.displayed_vote == Vote{lie}, "accepted on a challenge other than the guess");
          }
        }
        c.check(wins == 1, "wins over e != 1 for v=" + std::to_string(v) + " lie=" + std::to_string(lie));
        wins_total += static_cast<std::uint64_t>(wins);
      }

      // Oracle special soundness: for a false statement, each first message
      // (A, B) has an accepting response for at most one challenge.
      const std::uint64_t U = val(c_star[0].u) * oracle::inv_naive(val(ct.u)) % 23;
      const std::uint64_t W = val(c_star[0].w) * oracle::inv_naive(val(ct.w)) % 23;
      for (std::uint64_t a : oracle::subgroup()) {
        for (std::uint64_t b : oracle::subgroup()) {
          int good = 0;
          for (std::uint64_t e = 0; e < 11; ++e) {
            bool any = false;
            for (std::uint64_t z = 0; z < 11 && !any; ++z) {
              any = oracle::pow_naive(2, z) == a * oracle::pow_naive(U, e) % 23 &&
                    oracle::pow_naive(8, z) == b * oracle::pow_naive(W, e) % 23;
            }
            good += any;
          }
          c.check(good <= 1, "first message answerable for two challenges");
        }
      }
    }
  }

  // Production group: a guessing server against random challenges.
  GroupContext pctx(production_group());
  SeededEntropy prng(2026, "soundness");
  const ElectionSetup setup = setup_election(pctx, ElectionId::from_name("prod"), {"yes", "no"}, 1, prng);
  const Group& pg = *setup.params.group;
  VotingDevice pvd(setup.params);
  VotingServer pvs(setup.params, setup.server_key);
  const auto pr = submit_ballot(pctx, pvd, pctx, pvs, {t.alice, {0}}, prng, prng);
  const BallotCiphertext pc = pvd.state()->ballot;
  const BallotCiphertext pc_star{encrypt(pctx, setup.params.pk, setup.params.encoding->encode(1), pr.qr.r_star[0])};
  const zk::DlogStatement pst = rerandomization_statement(pg, setup.params.pk, pc, pc_star);
  int prod_wins = 0;
  for (int i = 0; i < 1000; ++i) {
    AuditRun run(setup.params, pr.qr, prng);
    run.on_offer({pc, pc_star, pvs.session(t.alice)->confirmation});
    zk::GuessingProver prover(pst, zk::make_commit_key(pctx, prng), pg.random_scalar(prng), {pg.random_scalar(prng)});
    if (drive(pctx, run, prover).accepted()) ++prod_wins;
  }
  c.check(prod_wins == 0, "production cheater succeeded " + std::to_string(prod_wins) + " times");

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "tiny cheating success %llu/%llu = 1/11 exactly (every wrong vote, guess, challenge); "
                "production %d/1000",
                static_cast<unsigned long long>(wins_total), static_cast<unsigned long long>(attempts), prod_wins);
  c.detail = buf;
  c.check(wins_total * 11 == attempts, "aggregate rate is not 1/11");
  return report(c);
}

using Key4 = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>;

int deniability() {
  Criterion c{3, "deniability"};
  Tiny t;
  GroupContext ctx(tiny_group());
  const std::size_t v = 3;
  const std::uint64_t r = 6;

  VotingDevice vd(t.params);
  const CastMessage cast = vd.cast(ctx, {t.alice, {v}}, {S(r)});
  const BallotCiphertext& ct = cast.ballot;

  // (b) sampled: honest audits with fresh x and coins against simulations
  // that claim the same vote.
  constexpr int kSamples = 200000;
  std::map<Key4, std::uint64_t> honest_a, sim_a, honest_b, sim_b;
  SeededEntropy srng(3, "server"), arng(3, "auditor"), simrng(3, "simulator");
  std::optional<Confirmation> confirmation;
  int sim_accepted = 0;
  for (int i = 0; i < kSamples; ++i) {
    VotingServer vs(t.params, t.server_key);
    const SessionToken token = vs.open_submission(t.alice, srng);
    const BlindMessage blind = vs.receive_ballot(ctx, token, cast, srng);
    if (!confirmation) confirmation = blind.confirmation;
    const QrPayload qr{t.params.election, t.alice, {tiny().add(S(r), blind.x[0])}, ballot_digest(ct)};
    AuditRun run(t.params, qr, arng);
    const AuditOutcome out = run_audit(ctx, vs, ctx, run, srng);
    c.check(out.accepted() && out.displayed_vote == Vote{v}, "honest sample rejected");
    const zk::Transcript hp = run.transcript()->proof;
    const std::uint64_t hr = val(qr.r_star[0]);
    ++honest_a[{hr, val(hp.e), val(hp.r), val(hp.z[0])}];
    ++honest_b[{hr, val(hp.k), val(hp.e), val(hp.z[0])}];

    const AuditTranscript sim = simulate_audit_transcript(ctx, t.params, t.alice, {v}, ct, *confirmation, simrng);
    const AuditOutcome sout = replay_audit(ctx, t.params, sim);
    // (a) every simulated transcript verifies.
    if (sout.accepted() && sout.displayed_vote == Vote{v}) ++sim_accepted;
    const std::uint64_t sr = val(sim.qr.r_star[0]);
    ++sim_a[{sr, val(sim.proof.e), val(sim.proof.r), val(sim.proof.z[0])}];
    ++sim_b[{sr, val(sim.proof.k), val(sim.proof.e), val(sim.proof.z[0])}];
  }
  c.check(sim_accepted == kSamples, "simulated transcript failed to verify");
  const double p_a = oracle::chi_square_homogeneity_p(honest_a, sim_a);
  const double p_b = oracle::chi_square_homogeneity_p(honest_b, sim_b);
  c.check(p_a > 0.01, "chi-square (r*, e, r, z) p = " + std::to_string(p_a));
  c.check(p_b > 0.01, "chi-square (r*, k, e, z) p = " + std::to_string(p_b));

  // Exact: the full transcript multisets over all 11^5 coin vectors coincide.
  const Ciphertext c0 = ct[0];
  std::map<Bytes, std::uint64_t> honest_all, sim_all;
  for (std::uint64_t x = 0; x < 11; ++x) {
    const BallotCiphertext cs{rerandomize(ctx, t.params.pk, c0, S(x))};
    const zk::DlogStatement st = rerandomization_statement(tiny(), t.params.pk, ct, cs);
    for (std::uint64_t tau = 0; tau < 11; ++tau) {
      for (std::uint64_t a = 0; a < 11; ++a) {
        for (std::uint64_t e = 0; e < 11; ++e) {
          for (std::uint64_t rc = 0; rc < 11; ++rc) {
            zk::Prover prover(st, {S(x)}, zk::make_commit_key(ctx, S(tau)), {{S(a)}});
            zk::Verifier verifier(st, {S(e), S(rc)});
            AuditTranscript h{{t.params.election, t.alice, {S((r + x) % 11)}, ballot_digest(ct)},
                              {ct, cs, *confirmation},
                              zk::run(ctx, ctx, prover, verifier)};
            ++honest_all[encode_audit_transcript(h)];
          }
        }
      }
    }
  }
  for (std::uint64_t rs = 0; rs < 11; ++rs) {
    const BallotCiphertext cs{encrypt(ctx, t.params.pk, t.params.encoding->encode(v), S(rs))};
    const zk::DlogStatement st = rerandomization_statement(tiny(), t.params.pk, ct, cs);
    for (std::uint64_t tau = 0; tau < 11; ++tau) {
      for (std::uint64_t e = 0; e < 11; ++e) {
        for (std::uint64_t rc = 0; rc < 11; ++rc) {
          for (std::uint64_t z = 0; z < 11; ++z) {
            AuditTranscript s{{t.params.election, t.alice, {S(rs)}, ballot_digest(ct)},
                              {ct, cs, *confirmation},
                              zk::simulate(ctx, st, zk::SimulatorCoins{S(tau), S(e), S(rc), {S(z)}})};
            ++sim_all[encode_audit_transcript(s)];
          }
        }
      }
    }
  }
  c.check(honest_all == sim_all, "exhaustive transcript multisets differ");

  // (c) any claim for any ciphertext.
  int shown = 0;
  SeededEntropy crng(33, "claims");
  for (std::uint64_t u : oracle::subgroup()) {
    for (std::uint64_t w : oracle::subgroup()) {
      const BallotCiphertext any{{E(u), E(w)}};
      const Confirmation conf = sign_confirmation(ctx, t.server_key, t.alice, any, crng);
      for (std::size_t claim = 0; claim < kLabels; ++claim) {
        const AuditTranscript sim = simulate_audit_transcript(ctx, t.params, t.alice, {claim}, any, conf, crng);
        const AuditOutcome out = replay_audit(ctx, t.params, sim);
        if (out.accepted() && out.displayed_vote == Vote{claim}) ++shown;
      }
    }
  }
  c.check(shown == 121 * static_cast<int>(kLabels), "some claim could not be displayed");

  char buf[300];
  std::snprintf(buf, sizeof buf,
                "%d/%d simulations verify; chi-square p = %.3f, %.3f over %d samples each; exact multiset "
                "equality over %zu transcripts: %s; %d/%zu (ciphertext, claim) pairs displayed",
                sim_accepted, kSamples, p_a, p_b, kSamples, honest_all.size(),
                honest_all == sim_all ? "yes" : "no", shown, 121 * kLabels);
  c.detail = buf;
  return report(c);
}

// Frames the server received after the submission finished.
Bytes audit_log(const std::vector<Bytes>& log, std::size_t from) {
  Bytes out;
  for (std::size_t i = from; i < log.size(); ++i) out.insert(out.end(), log[i].begin(), log[i].end());
  return out;
}

int server_privacy() {
  Criterion c{4, "privacy towards the server"};
  Tiny t;
  std::size_t views = 0;
  for (bool codes : {false, true}) {
    const ServerPolicy policy{false, codes};
    std::optional<std::map<Bytes, std::uint64_t>> reference;
    for (std::size_t v = 0; v < kLabels; ++v) {
      std::map<Bytes, std::uint64_t> real, simulated;
      for (std::uint64_t r = 0; r < 11; ++r) {
        for (std::uint64_t e = 0; e < 11; ++e) {
          for (std::uint64_t rc = 0; rc < 11; ++rc) {
            for (bool use_sim : {false, true}) {
              harness::ServerEndpoint endpoint(t.params, t.server_key, policy, nullptr, harness::VsBehavior::Honest,
                                               99);
              wire::InProcessLink link(endpoint.handler());
              GroupContext dctx(tiny_group()), actx(tiny_group());
              VotingDevice vd(t.params);
              BufferEntropy tape = scalar_tape({r});
              const auto receipt = harness::submit_over_link(link, dctx, vd, {t.alice, {v}}, tape);
              const std::size_t mark = endpoint.log().size();
              const zk::VerifierCoins coins{S(e), S(rc)};
              if (use_sim) {
                ServerViewSimulator sim(t.params, t.params.election, t.alice, coins);
                harness::audit_over_link(link, actx, sim, t.params, codes);
                ++simulated[audit_log(endpoint.log(), mark)];
              } else {
                AuditRun run(t.params, receipt.qr, coins);
                harness::audit_over_link(link, actx, run, t.params, codes);
                c.check(voter_accepts({v}, run.outcome()), "honest audit rejected");
                ++real[audit_log(endpoint.log(), mark)];
              }
              ++views;
            }
          }
        }
      }
      c.check(real == simulated, "real and simulated views differ for v=" + std::to_string(v));
      if (!reference) reference = real;
      c.check(*reference == real, "server view depends on the vote (v=" + std::to_string(v) + ")");
    }
  }
  c.detail = "server-received frame multisets equal for real and simulated auditors and across all " +
             std::to_string(kLabels) + " votes, both confirmation policies (" + std::to_string(views) + " audits)";
  return report(c);
}

int guarantee() {
  Criterion c{5, "individual verifiability guarantee"};
  const auto matrix = harness::scenario_matrix();
  harness::ScenarioConfig config;
  std::size_t scenarios = 0, accepts = 0, evidence = 0, rejects = 0, counterexamples = 0;
  for (const auto& scripts : matrix) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const harness::ScenarioReport rep = harness::run_scenario(scripts, config, seed);
      ++scenarios;
      const std::size_t bad = rep.counterexamples();
      counterexamples += bad;
      c.check(bad == 0, harness::scenario_name(scripts) + " seed " + std::to_string(seed));
      for (const auto& voter : rep.voters) {
        if (!voter.voter_accepts) {
          ++rejects;
        } else if (voter.receipt == ReceiptVerdict::ServerMisbehaviorEvidence) {
          ++evidence;
        } else {
          ++accepts;
        }
      }
    }
  }
  c.detail = std::to_string(matrix.size()) + " scenarios x 100 seeds, " + std::to_string(counterexamples) +
             " counterexamples (voter outcomes: " + std::to_string(accepts) + " accepted and counted, " +
             std::to_string(evidence) + " with evidence, " + std::to_string(rejects) + " rejected)";
  c.check(scenarios == matrix.size() * 100, "scenario count");
  return report(c);
}

int costs() {
  Criterion c{6, "exponentiation counts"};
  std::string detail;
  for (const auto& g : {std::shared_ptr<const Group>(tiny_group()), std::shared_ptr<const Group>(production_group())}) {
    const auto audit = bench::measure_audit(g, 1, 6);
    const auto dleq = bench::measure_dleq(g, 6);
    const std::string name(g->name());
    c.check(audit.accepted && audit.prover == 6 && audit.verifier == 8, name + " audit counts");
    c.check(dleq.accepted && dleq.prover == 4 && dleq.verifier == 6, name + " DLEQ counts");
    detail += name + ": audit " + std::to_string(audit.prover) + "/" + std::to_string(audit.verifier) + ", DLEQ " +
              std::to_string(dleq.prover) + "/" + std::to_string(dleq.verifier) + "; ";
  }
  detail.resize(detail.size() - 2);
  c.detail = detail + " (prover/verifier)";
  return report(c);
}

int latency() {
  Criterion c{7, "latency"};
  const auto g = std::shared_ptr<const Group>(production_group());
  const auto single = bench::measure_audit(g, 1, 7);
  c.check(single.accepted, "single audit rejected");
  c.check(single.seconds < 1.0, "single audit took " + std::to_string(single.seconds) + " s");
  const std::vector<double> secs = bench::median_audit_seconds(g, 4, 41, 7);
  const bench::AffineFit fit = bench::fit_affine({1, 2, 3, 4}, secs);
  c.check(fit.r_squared > 0.99, "R^2 = " + std::to_string(fit.r_squared));
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "single-element audit %.2f ms; medians L=1..4: %.2f %.2f %.2f %.2f ms; affine R^2 = %.4f",
                single.seconds * 1e3, secs[0] * 1e3, secs[1] * 1e3, secs[2] * 1e3, secs[3] * 1e3, fit.r_squared);
  c.detail = buf;
  return report(c);
}

int homomorphism() {
  Criterion c{8, "re-randomisation homomorphism"};
  GroupContext ctx(tiny_group());
  int cases = 0;
  for (std::uint64_t pk : oracle::subgroup()) {
    for (std::uint64_t m : oracle::subgroup()) {
      for (std::uint64_t r = 0; r < 11; ++r) {
        for (std::uint64_t x = 0; x < 11; ++x) {
          const Ciphertext direct = encrypt(ctx, E(pk), E(m), S((r + x) % 11));
          const Ciphertext rerand = rerandomize(ctx, E(pk), encrypt(ctx, E(pk), E(m), S(r)), S(x));
          c.check(direct == rerand, "tiny case mismatch");
          c.check(val(direct.u) == oracle::pow_naive(2, (r + x) % 11) &&
                      val(direct.w) == m * oracle::pow_naive(pk, (r + x) % 11) % 23,
                  "oracle mismatch");
          ++cases;
        }
      }
    }
  }
  GroupContext pctx(production_group());
  const Group& pg = pctx.group();
  SeededEntropy rng(8, "homomorphism");
  for (int i = 0; i < 1000; ++i) {
    const KeyPair kp = keygen(pctx, rng);
    const Element m = pctx.exp_g(pg.random_scalar(rng));
    const Scalar r = pg.random_scalar(rng), x = pg.random_scalar(rng);
    c.check(encrypt(pctx, kp.pk, m, pg.add(r, x)) == rerandomize(pctx, kp.pk, encrypt(pctx, kp.pk, m, r), x),
            "production case mismatch");
  }
  c.detail = std::to_string(cases) + " tiny cases (all pk, m, r, x) and 1000 production cases agree";
  return report(c);
}

int commitment_variant() {
  Criterion c{9, "commitment variant"};
  const Group& g = tiny();
  CommitmentElection el{tiny_group(), PedersenParams::derive(g), kLabels};
  GroupContext d(tiny_group()), s(tiny_group()), a(tiny_group());
  SeededEntropy rng(9, "commitment");

  // Completeness over (v, r, x).
  int complete = 0;
  for (std::size_t v = 0; v < kLabels; ++v) {
    for (std::uint64_t r = 0; r < 11; ++r) {
      for (std::uint64_t x = 0; x < 11; ++x) {
        CommitmentRun run = draw_commitment_run(el, v, rng);
        run.r = S(r);
        run.x = S(x);
        const CommitmentResult res = run_commitment_variant(d, s, a, el, run);
        if (res.outcome.accepted() && res.outcome.displayed_vote == Vote{v}) ++complete;
        c.check(val(res.r_star) == (r + x) % 11, "r* != r + x");
      }
    }
  }
  c.check(complete == static_cast<int>(kLabels) * 121, "honest commitment run rejected");

  // Soundness: shifted c* convinces for exactly one challenge per guess.
  std::uint64_t wins_total = 0, attempts = 0;
  for (std::size_t v = 0; v < kLabels; ++v) {
    for (std::size_t shift = 1; shift < kLabels; ++shift) {
      CommitmentRun cheat = draw_commitment_run(el, v, rng);
      cheat.shift = shift;
      // With h^x g^shift = 1 the server holds the trivial witness, so that x is
      // not a cheat on the proof.
      while (g.is_identity(g.mul(g.power(el.params.h, cheat.x), g.power(g.generator(), S(shift))))) {
        cheat.x = g.random_scalar(rng);
      }
      for (std::uint64_t guess = 0; guess < 11; ++guess) {
        cheat.cheat_guess = S(guess);
        int wins = 0;
        for (std::uint64_t e = 0; e < 11; ++e) {
          cheat.verifier_coins.e = S(e);
          const CommitmentResult res = run_commitment_variant(d, s, a, el, cheat);
          ++attempts;
          if (res.proof.accept) {
            ++wins;
            c.check(e == guess, "accepted on a challenge other than the guess");
            // The opening shows the shifted vote, or nothing when it leaves the alphabet.
            const std::size_t shown = (v + shift) % 11;
            c.check(shown < kLabels ? res.outcome.displayed_vote == Vote{shown}
                                    : res.outcome.reason == AuditFailure::OpeningMismatch,
                    "unexpected display after a lucky guess");
          }
        }
        c.check(wins == 1, "commitment cheat wins != 1");
        wins_total += static_cast<std::uint64_t>(wins);
      }
    }
  }
  c.check(wins_total * 11 == attempts, "aggregate rate is not 1/11");

  CommitmentElection pel{production_group(), PedersenParams::derive(*production_group()), 4};
  GroupContext pd(production_group()), ps(production_group()), pa(production_group());
  int prod_wins = 0;
  for (int i = 0; i < 1000; ++i) {
    CommitmentRun cheat = draw_commitment_run(pel, 0, rng);
    cheat.shift = 1 + static_cast<std::size_t>(i % 3);
    cheat.cheat_guess = pel.group->random_scalar(rng);
    if (run_commitment_variant(pd, ps, pa, pel, cheat).proof.accept) ++prod_wins;
  }
  c.check(prod_wins == 0, "production commitment cheat succeeded");

  // Homomorphism: Com(v; r + x) = Com(v; r) * h^x for every h != 1.
  GroupContext ctx(tiny_group());
  int hom = 0;
  for (std::uint64_t h : oracle::subgroup()) {
    if (h == 1) continue;
    const PedersenParams pp = PedersenParams::with_generator(g, E(h));
    for (std::uint64_t v = 0; v < 11; ++v) {
      for (std::uint64_t r = 0; r < 11; ++r) {
        for (std::uint64_t x = 0; x < 11; ++x) {
          const Element direct = commit(ctx, pp, S(v), S((r + x) % 11));
          const Element rerand = rerandomize_commitment(ctx, pp, commit(ctx, pp, S(v), S(r)), S(x));
          c.check(direct == rerand, "tiny commitment mismatch");
          c.check(val(direct) == oracle::pow_naive(2, v) * oracle::pow_naive(h, (r + x) % 11) % 23,
                  "commitment oracle mismatch");
          ++hom;
        }
      }
    }
  }
  GroupContext pctx(production_group());
  const Group& pg = pctx.group();
  for (int i = 0; i < 1000; ++i) {
    const Scalar v = pg.random_scalar(rng), r = pg.random_scalar(rng), x = pg.random_scalar(rng);
    c.check(commit(pctx, pel.params, v, pg.add(r, x)) ==
                rerandomize_commitment(pctx, pel.params, commit(pctx, pel.params, v, r), x),
            "production commitment mismatch");
  }

  char buf[300];
  std::snprintf(buf, sizeof buf,
                "completeness %d/%zu; cheating %llu/%llu = 1/11 exactly, production %d/1000; homomorphism %d tiny "
                "cases and 1000 production cases agree",
                complete, kLabels * 121, static_cast<unsigned long long>(wins_total),
                static_cast<unsigned long long>(attempts), prod_wins, hom);
  c.detail = buf;
  return report(c);
}

}  // namespace

int main() {
  int failed = 0;
  for (auto criterion : {completeness, soundness, deniability, server_privacy, guarantee, costs, latency,
                         homomorphism, commitment_variant}) {
    try {
      failed += criterion();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion threw: %s\n", e.what());
      ++failed;
    }
  }
  std::printf("%d of 9 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
