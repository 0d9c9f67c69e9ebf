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
#include <cstdint>
#include <memory>
#include <vector>

#include "cai/group.hpp"

namespace cai::bench {

struct AuditMeasurement {
  std::size_t ballot_length = 0;
  std::uint64_t prover = 0;    // voting server, from audit request to last proof message
  std::uint64_t verifier = 0;  // audit device: proof plus special decryption
  double seconds = 0;          // wall clock for the whole in-process audit
  bool accepted = false;
};

/// Sets up an election, casts one ballot of the given length and audits it.
AuditMeasurement measure_audit(std::shared_ptr<const Group> group, std::size_t ballot_length, std::uint64_t seed);

struct DleqMeasurement {
  std::uint64_t prover = 0;
  std::uint64_t verifier = 0;
  bool accepted = false;
};

/// Standalone Chaum-Pedersen run with a commitment key made beforehand.
DleqMeasurement measure_dleq(std::shared_ptr<const Group> group, std::uint64_t seed);

struct AffineFit {
  double intercept = 0;
  double slope = 0;
  double r_squared = 0;
};

/// Least squares y = intercept + slope * x. R^2 is 1 for a perfect fit
/// (including a constant series).
AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y);

/// Median audit time per ballot length 1..max_length over `reps` runs.
std::vector<double> median_audit_seconds(std::shared_ptr<const Group> group, std::size_t max_length, std::size_t reps,
                                         std::uint64_t seed);

}  // namespace cai::bench
