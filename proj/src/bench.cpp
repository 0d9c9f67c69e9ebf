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

#include "cai/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "cai/protocol.hpp"
#include "cai/zk.hpp"

namespace cai::bench {

AuditMeasurement measure_audit(std::shared_ptr<const Group> group, std::size_t ballot_length, std::uint64_t seed) {
  SeededEntropy rng(seed, "bench/" + std::to_string(ballot_length));
  GroupContext setup_ctx(group), vd_ctx(group), vs_ctx(group), ad_ctx(group);
  ElectionSetup setup = setup_election(setup_ctx, ElectionId::from_name("bench"), {"a", "b", "c", "d"},
                                       ballot_length, rng);
  VotingDevice vd(setup.params);
  VotingServer vs(setup.params, setup.server_key);
  Vote vote;
  for (std::size_t j = 0; j < ballot_length; ++j) vote.push_back(j % 4);
  auto receipt = submit_ballot(vd_ctx, vd, vs_ctx, vs, {VoterId::from_name("bench"), vote}, rng, rng);

  vs_ctx.reset_count();
  AuditRun run(setup.params, receipt.qr, rng);
  const auto start = std::chrono::steady_clock::now();
  AuditOutcome outcome = run_audit(vs_ctx, vs, ad_ctx, run, rng);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  return {ballot_length, vs_ctx.exponentiations(), ad_ctx.exponentiations(), elapsed.count(),
          voter_accepts(vote, outcome)};
}

DleqMeasurement measure_dleq(std::shared_ptr<const Group> group, std::uint64_t seed) {
  SeededEntropy rng(seed, "bench/dleq");
  const Group& g = *group;
  GroupContext setup(group), prover_ctx(group), verifier_ctx(group);
  const Scalar x = g.random_scalar(rng);
  const Element h = setup.exp_g(g.random_scalar(rng));
  zk::DlogStatement st = zk::DlogStatement::dleq(g.generator(), h, setup.exp_g(x), setup.exp(h, x));
  zk::CommitKey key = zk::make_commit_key(setup, rng);
  zk::Prover prover(st, {x}, key, zk::draw_prover_coins(g, zk::Shape::of(st), rng));
  zk::Verifier verifier(st, zk::draw_verifier_coins(g, rng));
  zk::Transcript t = zk::run(prover_ctx, verifier_ctx, prover, verifier);
  return {prover_ctx.exponentiations(), verifier_ctx.exponentiations(), t.accept};
}

AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  AffineFit fit;
  fit.slope = sxx == 0 ? 0 : sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
  return fit;
}

std::vector<double> median_audit_seconds(std::shared_ptr<const Group> group, std::size_t max_length, std::size_t reps,
                                         std::uint64_t seed) {
  std::vector<std::vector<double>> samples(max_length);
  // Interleave lengths so drift in machine load hits every length alike.
  for (std::size_t rep = 0; rep < reps; ++rep) {
    for (std::size_t l = 1; l <= max_length; ++l) {
      samples[l - 1].push_back(measure_audit(group, l, seed + rep).seconds);
    }
  }
  std::vector<double> out;
  for (auto& s : samples) {
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    out.push_back(s[s.size() / 2]);
  }
  return out;
}

}  // namespace cai::bench
