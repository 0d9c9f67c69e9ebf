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

#include "cai/group.hpp"

namespace cai {

/// Commitment key (g, h) with log_g(h) unknown to everyone.
struct PedersenParams {
  Element g;
  Element h;

  /// h is hashed onto the group from a fixed domain tag; no trusted setup.
  static PedersenParams derive(const Group& group);
  /// Explicit second generator, for test vectors. Rejects non-members and the
  /// identity.
  static PedersenParams with_generator(const Group& group, const Element& h);
};

/// g^v * h^r.
Element commit(GroupContext& ctx, const PedersenParams& params, const Scalar& v, const Scalar& r);

/// c * h^x = Com(v; r + x).
Element rerandomize_commitment(GroupContext& ctx, const PedersenParams& params, const Element& c, const Scalar& x);

/// Returns the unique v < alphabet_size with c * h^-r = g^v. The g^v table is
/// built by repeated multiplication, so only h^-r costs an exponentiation.
/// Throws Error{OpeningMismatch}.
std::size_t open_with_randomness(GroupContext& ctx, const PedersenParams& params, const Element& c,
                                 const Scalar& r, std::size_t alphabet_size);

}  // namespace cai
