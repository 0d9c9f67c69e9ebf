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

#include "cai/elgamal.hpp"

#include <algorithm>

#include "cai/error.hpp"

namespace cai {

KeyPair keygen(GroupContext& ctx, EntropySource& rng) {
  return keypair_from_secret(ctx, ctx.group().random_scalar(rng));
}

KeyPair keypair_from_secret(GroupContext& ctx, const Scalar& sk) { return {sk, ctx.exp_g(sk)}; }

Ciphertext encrypt(GroupContext& ctx, const Element& pk, const Element& m, const Scalar& r) {
  return {ctx.exp_g(r), ctx.group().mul(m, ctx.exp(pk, r))};
}

Element decrypt(GroupContext& ctx, const Scalar& sk, const Ciphertext& c) {
  return ctx.group().div(c.w, ctx.exp(c.u, sk));
}

Ciphertext rerandomize(GroupContext& ctx, const Element& pk, const Ciphertext& c, const Scalar& x) {
  const Group& g = ctx.group();
  return {g.mul(c.u, ctx.exp_g(x)), g.mul(c.w, ctx.exp(pk, x))};
}

Element special_decrypt(GroupContext& ctx, const Element& pk, const Ciphertext& c, const Scalar& r) {
  if (ctx.exp_g(r) != c.u) throw Error(ErrorCode::RandomnessMismatch, "u != g^r");
  return ctx.group().div(c.w, ctx.exp(pk, r));
}

Bytes encode_ciphertext(const Ciphertext& c) { return ByteWriter().raw(c.u.bytes()).raw(c.w.bytes()).bytes(); }

Ciphertext decode_ciphertext(const Group& group, ByteView bytes) {
  const std::size_t n = group.element_size();
  if (bytes.size() != 2 * n) throw Error(ErrorCode::BadLength, "ciphertext encoding");
  return {group.decode_element(bytes.first(n)), group.decode_element(bytes.subspan(n))};
}

Bytes encode_ballot(const BallotCiphertext& ballot) {
  ByteWriter out;
  for (const auto& c : ballot) out.raw(c.u.bytes()).raw(c.w.bytes());
  return std::move(out).bytes();
}

BallotCiphertext decode_ballot(const Group& group, ByteView bytes) {
  const std::size_t n = 2 * group.element_size();
  if (bytes.empty() || bytes.size() % n != 0) throw Error(ErrorCode::BadLength, "ballot encoding");
  BallotCiphertext out;
  for (std::size_t off = 0; off < bytes.size(); off += n) out.push_back(decode_ciphertext(group, bytes.subspan(off, n)));
  return out;
}

Digest ballot_digest(const BallotCiphertext& ballot) {
  return Sha256().update("cai/ballot/v1").update(encode_ballot(ballot)).finish();
}

VoteEncoding::VoteEncoding(const Group& group, std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) throw Error(ErrorCode::InvalidConfig, "vote alphabet needs at least two entries");
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidConfig, "duplicate label in vote alphabet");
  }
  Element m = group.identity();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    m = group.mul(m, group.generator());
    if (group.is_identity(m)) throw Error(ErrorCode::InvalidConfig, "vote alphabet larger than the group");
    elements_.push_back(m);
  }
}

std::size_t VoteEncoding::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::UnknownVote, "'" + std::string(label) + "' is not on the ballot");
  return static_cast<std::size_t>(it - labels_.begin());
}

const Element& VoteEncoding::encode(std::size_t index) const {
  if (index >= elements_.size()) throw Error(ErrorCode::UnknownVote, "vote index out of range");
  return elements_[index];
}

std::optional<std::size_t> VoteEncoding::try_decode(const Element& m) const {
  auto it = std::find(elements_.begin(), elements_.end(), m);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t VoteEncoding::decode(const Element& m) const {
  if (auto index = try_decode(m)) return *index;
  throw Error(ErrorCode::UnknownVote, "plaintext outside the vote alphabet");
}

}  // namespace cai
