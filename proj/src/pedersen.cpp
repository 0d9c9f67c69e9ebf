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

#include "cai/pedersen.hpp"

#include "cai/error.hpp"

namespace cai {

PedersenParams PedersenParams::derive(const Group& group) {
  return {group.generator(), group.hash_to_element("cai/pedersen/h", as_bytes(group.name()))};
}

PedersenParams PedersenParams::with_generator(const Group& group, const Element& h) {
  Element checked = group.decode_element(h.bytes());
  if (group.is_identity(checked)) throw Error(ErrorCode::NotInGroup, "commitment generator is the identity");
  return {group.generator(), checked};
}

Element commit(GroupContext& ctx, const PedersenParams& params, const Scalar& v, const Scalar& r) {
  return ctx.group().mul(ctx.exp(params.g, v), ctx.exp(params.h, r));
}

Element rerandomize_commitment(GroupContext& ctx, const PedersenParams& params, const Element& c, const Scalar& x) {
  return ctx.group().mul(c, ctx.exp(params.h, x));
}

std::size_t open_with_randomness(GroupContext& ctx, const PedersenParams& params, const Element& c,
                                 const Scalar& r, std::size_t alphabet_size) {
  const Group& group = ctx.group();
  Element target = group.div(c, ctx.exp(params.h, r));
  Element candidate = group.identity();
  for (std::size_t v = 0; v < alphabet_size; ++v) {
    if (candidate == target) return v;
    candidate = group.mul(candidate, params.g);
  }
  throw Error(ErrorCode::OpeningMismatch, "no alphabet value opens the commitment");
}

}  // namespace cai
