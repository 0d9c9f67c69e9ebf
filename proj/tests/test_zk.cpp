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

#include <map>
#include <tuple>

#include "cai/error.hpp"
#include "cai/zk.hpp"
#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace cai;
using namespace cai::zk;
using namespace testing_helpers;

namespace {

DlogStatement example_statement() { return DlogStatement::dleq(E(2), E(8), E(2), E(8)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::MalformedMessage;
}

/// Witness extraction from two accepting sigma transcripts sharing a first
/// message: x = (z - z') / (e - e').
Scalar extract(const Group& g, const Scalar& e1, const Scalar& z1, const Scalar& e2, const Scalar& z2) {
  return g.mul(g.sub(z1, z2), g.inv(g.sub(e1, e2)));
}

}  // namespace

TEST_SUITE("zk") {

TEST_CASE("hand-computed DLEQ run in the tiny group") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  Prover prover(example_statement(), {S(1)}, S(5), ProverCoins{{S(7)}});
  Verifier verifier(example_statement(), VerifierCoins{S(4), S(2)});

  Message k = prover.start(pc);
  CHECK(val(std::get<CommitKeyMsg>(k).k) == 9);
  auto com = verifier.step(vc, k);
  CHECK(val(std::get<ChallengeCommitMsg>(*com).com) == 1);
  Message first = prover.step(pc, *com);
  CHECK(val(std::get<FirstMsg>(first).commitments[0]) == 13);
  CHECK(val(std::get<FirstMsg>(first).commitments[1]) == 12);
  auto decommit = verifier.step(vc, first);
  Message response = prover.step(pc, *decommit);
  CHECK(val(std::get<ResponseMsg>(response).z[0]) == 0);
  CHECK_FALSE(verifier.step(vc, response).has_value());
  CHECK(verifier.accepted());
  CHECK(prover.phase() == Phase::Done);

  // First run pays for k; the verifier always pays 6.
  CHECK(pc.exponentiations() == 5);
  CHECK(vc.exponentiations() == 6);

  Transcript t = verifier.transcript();
  GroupContext ctx(tiny_group());
  CHECK(verify_transcript(ctx, example_statement(), t));
  t.z[0] = S(1);
  CHECK_FALSE(verify_transcript(ctx, example_statement(), t));
}

TEST_CASE("prover with a reused commitment key costs four exponentiations") {
  GroupContext setup(tiny_group()), pc(tiny_group()), vc(tiny_group());
  CommitKey key = make_commit_key(setup, S(5));
  Prover prover(example_statement(), {S(1)}, key, ProverCoins{{S(7)}});
  Verifier verifier(example_statement(), VerifierCoins{S(4), S(2)});
  run(pc, vc, prover, verifier);
  CHECK(verifier.accepted());
  CHECK(pc.exponentiations() == 4);
  CHECK(vc.exponentiations() == 6);
}

TEST_CASE("bad decommitment aborts the prover") {
  GroupContext pc(tiny_group());
  Prover prover(example_statement(), {S(1)}, S(5), ProverCoins{{S(7)}});
  prover.start(pc);
  prover.step(pc, ChallengeCommitMsg{E(1)});
  // 2^3 * 9^4 = 2 != 1
  CHECK(code_of([&] { prover.step(pc, DecommitMsg{S(4), S(3)}); }) == ErrorCode::DecommitMismatch);
  CHECK(prover.aborted());
  CHECK(prover.phase() == Phase::Done);
}

TEST_CASE("adversarial verifier cannot switch its challenge after seeing the first message") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  for (std::uint64_t e = 0; e < 11; ++e) {
    for (std::uint64_t e2 = 0; e2 < 11; ++e2) {
      if (e2 == e) continue;
      Prover prover(example_statement(), {S(1)}, S(5), ProverCoins{{S(7)}});
      Verifier verifier(example_statement(), VerifierCoins{S(e), S(3)});
      auto com = verifier.step(vc, prover.start(pc));
      verifier.step(vc, prover.step(pc, *com));
      CHECK(code_of([&] { prover.step(pc, DecommitMsg{S(e2), S(3)}); }) == ErrorCode::DecommitMismatch);
      CHECK(prover.aborted());
    }
  }

  // Without tau the adaptive verifier has no way to find a second opening.
  GroupContext ppc(production_group()), pvc(production_group());
  const auto& g = ppc.group();
  SeededEntropy rng(77);
  Scalar x = g.random_scalar(rng);
  Element h = ppc.exp_g(g.random_scalar(rng));
  auto st = DlogStatement::dleq(g.generator(), h, ppc.exp_g(x), ppc.exp(h, x));
  for (int i = 0; i < 20; ++i) {
    Prover prover(st, {x}, make_commit_key(ppc, rng), draw_prover_coins(g, Shape::of(st), rng));
    Verifier verifier(st, draw_verifier_coins(g, rng));
    auto com = verifier.step(pvc, prover.start(ppc));
    verifier.step(pvc, prover.step(ppc, *com));
    CHECK(code_of([&] { prover.step(ppc, DecommitMsg{g.random_scalar(rng), g.random_scalar(rng)}); }) ==
          ErrorCode::DecommitMismatch);
  }
}

TEST_CASE("out-of-order messages raise PhaseError") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  Prover prover(example_statement(), {S(1)}, S(5), ProverCoins{{S(7)}});
  prover.start(pc);
  CHECK(code_of([&] { prover.step(pc, DecommitMsg{S(4), S(2)}); }) == ErrorCode::PhaseError);
  CHECK(prover.phase() == Phase::AwaitChallengeCommit);
  CHECK(code_of([&] { prover.start(pc); }) == ErrorCode::PhaseError);

  Verifier verifier(example_statement(), VerifierCoins{S(4), S(2)});
  CHECK(code_of([&] { verifier.step(vc, ResponseMsg{{S(0)}}); }) == ErrorCode::PhaseError);
  CHECK(verifier.done());
  CHECK_FALSE(verifier.accepted());
}

TEST_CASE("abort message ends the verifier with reject") {
  GroupContext vc(tiny_group());
  Verifier verifier(example_statement(), VerifierCoins{S(4), S(2)});
  verifier.step(vc, CommitKeyMsg{E(9)});
  verifier.step(vc, FirstMsg{{E(13), E(12)}});
  CHECK_FALSE(verifier.step(vc, AbortMsg{}).has_value());
  CHECK(verifier.done());
  CHECK_FALSE(verifier.accepted());
}

TEST_CASE("false statement is rejected for every non-zero challenge") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  // X = g^1 but Y = h^3: no shared logarithm.
  auto st = DlogStatement::dleq(E(2), E(8), E(2), tiny().power(E(8), S(3)));
  for (std::uint64_t e = 0; e < 11; ++e) {
    for (std::uint64_t r = 0; r < 11; ++r) {
      Prover prover(st, {S(1)}, S(5), ProverCoins{{S(7)}});
      Verifier verifier(st, VerifierCoins{S(e), S(r)});
      run(pc, vc, prover, verifier);
      CHECK(verifier.accepted() == (e == 0));
    }
  }
}

TEST_CASE("special soundness: two challenges on one first message reveal the witness") {
  GroupContext ctx(tiny_group());
  for (std::uint64_t x = 0; x < 11; ++x) {
    auto st = DlogStatement::dleq(E(2), E(8), tiny().power(E(2), S(x)), tiny().power(E(8), S(x)));
    const Scalar a = S(6);
    auto z = [&](std::uint64_t e) { return tiny().add(a, tiny().mul(S(e), S(x))); };
    Transcript t1 = simulate(ctx, st, SimulatorCoins{S(1), S(3), S(0), {z(3)}});
    Transcript t2 = simulate(ctx, st, SimulatorCoins{S(1), S(8), S(0), {z(8)}});
    REQUIRE(t1.commitments == t2.commitments);
    CHECK(val(extract(tiny(), t1.e, t1.z[0], t2.e, t2.z[0])) == x);
  }
}

TEST_CASE("simulated transcripts verify, including for false statements") {
  GroupContext ctx(production_group());
  const auto& g = ctx.group();
  SeededEntropy rng(11);
  for (int i = 0; i < 1000; ++i) {
    const bool truthful = i % 2 == 0;
    Scalar x = g.random_scalar(rng);
    Element h = ctx.exp_g(g.random_scalar(rng));
    Element X = ctx.exp_g(x);
    Element Y = truthful ? ctx.exp(h, x) : ctx.exp(h, g.add(x, g.one()));
    auto st = DlogStatement::dleq(g.generator(), h, X, Y);
    Transcript t = simulate(ctx, st, rng);
    CHECK(t.accept);
    CHECK(verify_transcript(ctx, st, t));
    if (i >= 40) break;  // the full 1000 runs live in the acceptance suite
  }
  auto tiny_false = DlogStatement::dleq(E(2), E(8), tiny().power(E(2), S(2)), tiny().power(E(8), S(3)));
  GroupContext tc(tiny_group());
  SeededEntropy trng(12);
  for (int i = 0; i < 1000; ++i) CHECK(verify_transcript(tc, tiny_false, simulate(tc, tiny_false, trng)));
}

TEST_CASE("honest and simulated transcripts have identical distributions") {
  GroupContext ctx(tiny_group());
  const auto st = example_statement();

  // Exhaustive: enumerate every coin vector of both and compare multisets.
  std::map<Bytes, int> honest, simulated;
  for (std::uint64_t tau = 0; tau < 11; ++tau) {
    for (std::uint64_t a = 0; a < 11; ++a) {
      for (std::uint64_t e = 0; e < 11; ++e) {
        for (std::uint64_t r = 0; r < 11; ++r) {
          Prover prover(st, {S(1)}, S(tau), ProverCoins{{S(a)}});
          Verifier verifier(st, VerifierCoins{S(e), S(r)});
          GroupContext pc(tiny_group()), vc(tiny_group());
          ++honest[encode_transcript(run(pc, vc, prover, verifier))];
          ++simulated[encode_transcript(simulate(ctx, st, SimulatorCoins{S(tau), S(e), S(r), {S(a)}}))];
        }
      }
    }
  }
  CHECK(honest == simulated);

  // Sampled: chi-square on the joint (e, r, z).
  SeededEntropy rng(5);
  std::map<std::tuple<int, int, int>, std::uint64_t> hs, ss;
  for (int i = 0; i < 100000; ++i) {
    GroupContext pc(tiny_group()), vc(tiny_group());
    Prover prover(st, {S(1)}, tiny().random_scalar(rng), draw_prover_coins(tiny(), Shape::of(st), rng));
    Verifier verifier(st, draw_verifier_coins(tiny(), rng));
    Transcript h = run(pc, vc, prover, verifier);
    Transcript s = simulate(ctx, st, rng);
    ++hs[{int(val(h.e)), int(val(h.r)), int(val(h.z[0]))}];
    ++ss[{int(val(s.e)), int(val(s.r)), int(val(s.z[0]))}];
  }
  CHECK(oracle::chi_square_homogeneity_p(hs, ss) > 0.01);
}

TEST_CASE("Schnorr variant over a single base") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  SeededEntropy rng(8);
  SUBCASE("honest") {
    auto st = DlogStatement::schnorr(E(3), E(9));
    Prover prover(st, {S(2)}, tiny().random_scalar(rng), draw_prover_coins(tiny(), Shape::of(st), rng));
    Verifier verifier(st, draw_verifier_coins(tiny(), rng));
    run(pc, vc, prover, verifier);
    CHECK(verifier.accepted());
  }
  SUBCASE("zero witness") {
    auto st = DlogStatement::schnorr(E(3), tiny().identity());
    Prover prover(st, {S(0)}, S(4), ProverCoins{{S(9)}});
    Verifier verifier(st, VerifierCoins{S(6), S(1)});
    run(pc, vc, prover, verifier);
    CHECK(verifier.accepted());
  }
  SUBCASE("wrong witness") {
    auto st = DlogStatement::schnorr(E(3), E(9));
    for (std::uint64_t e = 0; e < 11; ++e) {
      Prover prover(st, {S(5)}, S(4), ProverCoins{{S(9)}});
      Verifier verifier(st, VerifierCoins{S(e), S(1)});
      run(pc, vc, prover, verifier);
      CHECK(verifier.accepted() == (e == 0));
    }
  }
}

TEST_CASE("guessing prover wins exactly when the challenge matches its guess") {
  GroupContext pc(tiny_group()), vc(tiny_group());
  auto st = DlogStatement::dleq(E(2), E(8), E(4), E(8));  // false: logs 2 and 1
  CommitKey key = make_commit_key(pc, S(5));
  for (std::uint64_t guess = 0; guess < 11; ++guess) {
    int wins = 0;
    for (std::uint64_t e = 0; e < 11; ++e) {
      GuessingProver cheat(st, key, S(guess), {S(3)});
      Verifier verifier(st, VerifierCoins{S(e), S(2)});
      auto m = verifier.step(vc, cheat.start(pc));
      m = verifier.step(vc, cheat.step(pc, *m));
      verifier.step(vc, cheat.step(pc, *m));
      wins += verifier.accepted();
      CHECK(verifier.accepted() == (e == guess));
    }
    CHECK(wins == 1);
  }
}

TEST_CASE("multi-instance statements share one challenge") {
  GroupContext setup(production_group()), pc(production_group()), vc(production_group());
  const auto& g = setup.group();
  SeededEntropy rng(21);
  Element h = setup.exp_g(g.random_scalar(rng));
  for (std::size_t L = 1; L <= 4; ++L) {
    DlogStatement st{{g.generator(), h}, {}};
    std::vector<Scalar> witness;
    for (std::size_t j = 0; j < L; ++j) {
      witness.push_back(g.random_scalar(rng));
      st.targets.push_back({setup.exp_g(witness.back()), setup.exp(h, witness.back())});
    }
    CHECK(st.holds(g, witness));
    CommitKey key = make_commit_key(setup, rng);
    Prover prover(st, witness, key, draw_prover_coins(g, Shape::of(st), rng));
    Verifier verifier(st, draw_verifier_coins(g, rng));
    pc.reset_count();
    vc.reset_count();
    run(pc, vc, prover, verifier);
    CHECK(verifier.accepted());
    CHECK(pc.exponentiations() == 2 * L + 2);
    CHECK(vc.exponentiations() == 4 * L + 2);
  }
}

TEST_CASE("message encoding") {
  auto group = production_group();
  GroupContext ctx(group);
  SeededEntropy rng(4);
  Shape shape{2, 3};
  auto el = [&] { return ctx.exp_g(group->random_scalar(rng)); };
  auto sc = [&] { return group->random_scalar(rng); };
  for (int i = 0; i < 20; ++i) {
    std::vector<Message> msgs{CommitKeyMsg{el()}, ChallengeCommitMsg{el()},
                              FirstMsg{{el(), el(), el(), el(), el(), el()}}, DecommitMsg{sc(), sc()},
                              ResponseMsg{{sc(), sc(), sc()}}, AbortMsg{}};
    for (const auto& m : msgs) {
      Bytes enc = encode(m);
      Message back = decode(*group, shape, enc);
      CHECK(encode(back) == enc);
      CHECK(tag_of(back) == tag_of(m));
      enc.pop_back();
      CHECK_THROWS_AS(decode(*group, shape, enc), Error);
    }
  }
  CHECK(code_of([&] { decode(*group, shape, Bytes{0x42}); }) == ErrorCode::MalformedMessage);
  CHECK(code_of([&] { decode(tiny(), Shape{2, 1}, Bytes{0x01, 5}); }) == ErrorCode::NotInGroup);
  Bytes first_tiny{0x03, 13, 12};
  CHECK(std::get<FirstMsg>(decode(tiny(), Shape{2, 1}, first_tiny)).commitments.size() == 2);
}

}  // TEST_SUITE
