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

#include "cai/zk.hpp"

#include <type_traits>

namespace cai::zk {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_shape(const DlogStatement& st) {
  if (st.bases.empty() || st.targets.empty()) throw Error(ErrorCode::MalformedMessage, "empty statement");
  for (const auto& row : st.targets) {
    if (row.size() != st.bases.size()) throw Error(ErrorCode::MalformedMessage, "ragged statement");
  }
}

/// bases[i]^z_j * targets[j][i]^-e for every (j, i).
std::vector<Element> back_compute(GroupContext& ctx, const DlogStatement& st, const Scalar& e,
                                  const std::vector<Scalar>& z) {
  const Group& group = ctx.group();
  const Scalar minus_e = group.neg(e);
  std::vector<Element> out;
  out.reserve(st.instances() * st.width());
  for (std::size_t j = 0; j < st.instances(); ++j) {
    for (std::size_t i = 0; i < st.width(); ++i) {
      out.push_back(group.mul(ctx.exp(st.bases[i], z[j]), ctx.exp(st.targets[j][i], minus_e)));
    }
  }
  return out;
}

Element challenge_commitment(GroupContext& ctx, const Element& k, const Scalar& e, const Scalar& r) {
  return ctx.group().mul(ctx.exp_g(r), ctx.exp(k, e));
}

[[noreturn]] void phase_error(const char* what) { throw Error(ErrorCode::PhaseError, what); }

}  // namespace

DlogStatement DlogStatement::dleq(const Element& g, const Element& h, const Element& x_target,
                                  const Element& y_target) {
  return {{g, h}, {{x_target, y_target}}};
}

DlogStatement DlogStatement::schnorr(const Element& base, const Element& target) { return {{base}, {{target}}}; }

bool DlogStatement::holds(const Group& group, const std::vector<Scalar>& witness) const {
  if (witness.size() != instances()) return false;
  for (std::size_t j = 0; j < instances(); ++j) {
    for (std::size_t i = 0; i < width(); ++i) {
      if (group.power(bases[i], witness[j]) != targets[j][i]) return false;
    }
  }
  return true;
}

MessageTag tag_of(const Message& msg) {
  return std::visit(Overloaded{
                        [](const CommitKeyMsg&) { return MessageTag::CommitKey; },
                        [](const ChallengeCommitMsg&) { return MessageTag::ChallengeCommit; },
                        [](const FirstMsg&) { return MessageTag::First; },
                        [](const DecommitMsg&) { return MessageTag::Decommit; },
                        [](const ResponseMsg&) { return MessageTag::Response; },
                        [](const AbortMsg&) { return MessageTag::Abort; },
                    },
                    msg);
}

Bytes encode(const Message& msg) {
  ByteWriter out;
  out.u8(static_cast<std::uint8_t>(tag_of(msg)));
  std::visit(Overloaded{
                 [&](const CommitKeyMsg& m) { out.raw(m.k.bytes()); },
                 [&](const ChallengeCommitMsg& m) { out.raw(m.com.bytes()); },
                 [&](const FirstMsg& m) {
                   for (const auto& a : m.commitments) out.raw(a.bytes());
                 },
                 [&](const DecommitMsg& m) { out.raw(m.e.bytes()).raw(m.r.bytes()); },
                 [&](const ResponseMsg& m) {
                   for (const auto& z : m.z) out.raw(z.bytes());
                 },
                 [&](const AbortMsg& m) { out.u8(static_cast<std::uint8_t>(m.reason)); },
             },
             msg);
  return std::move(out).bytes();
}

Message decode(const Group& group, Shape shape, ByteView bytes) {
  ByteReader in(bytes);
  const auto tag = static_cast<MessageTag>(in.u8());
  const std::size_t es = group.element_size();
  const std::size_t ss = group.scalar_size();
  Message out;
  switch (tag) {
    case MessageTag::CommitKey:
      out = CommitKeyMsg{group.decode_element(in.take(es))};
      break;
    case MessageTag::ChallengeCommit:
      out = ChallengeCommitMsg{group.decode_element(in.take(es))};
      break;
    case MessageTag::First: {
      FirstMsg m;
      for (std::size_t n = 0; n < shape.width * shape.instances; ++n) {
        m.commitments.push_back(group.decode_element(in.take(es)));
      }
      out = std::move(m);
      break;
    }
    case MessageTag::Decommit: {
      Scalar e = group.decode_scalar(in.take(ss));
      out = DecommitMsg{e, group.decode_scalar(in.take(ss))};
      break;
    }
    case MessageTag::Response: {
      ResponseMsg m;
      for (std::size_t n = 0; n < shape.instances; ++n) m.z.push_back(group.decode_scalar(in.take(ss)));
      out = std::move(m);
      break;
    }
    case MessageTag::Abort:
      out = AbortMsg{static_cast<ErrorCode>(in.u8())};
      break;
    default:
      throw Error(ErrorCode::MalformedMessage, "unknown zk message tag");
  }
  in.expect_end();
  return out;
}

CommitKey make_commit_key(GroupContext& ctx, EntropySource& rng) {
  return make_commit_key(ctx, ctx.group().random_scalar(rng));
}

CommitKey make_commit_key(GroupContext& ctx, const Scalar& tau) { return {tau, ctx.exp_g(tau)}; }

ProverCoins draw_prover_coins(const Group& group, Shape shape, EntropySource& rng) {
  ProverCoins coins;
  for (std::size_t j = 0; j < shape.instances; ++j) coins.a.push_back(group.random_scalar(rng));
  return coins;
}

VerifierCoins draw_verifier_coins(const Group& group, EntropySource& rng) {
  Scalar e = group.random_scalar(rng);
  return {e, group.random_scalar(rng)};
}

Bytes encode_transcript(const Transcript& t) {
  ByteWriter out;
  out.raw(encode(CommitKeyMsg{t.k}));
  out.raw(encode(ChallengeCommitMsg{t.com}));
  out.raw(encode(FirstMsg{t.commitments}));
  out.raw(encode(DecommitMsg{t.e, t.r}));
  out.raw(encode(ResponseMsg{t.z}));
  out.u8(t.accept ? 1 : 0);
  return std::move(out).bytes();
}

bool verify_transcript(GroupContext& ctx, const DlogStatement& st, const Transcript& t) {
  check_shape(st);
  if (t.commitments.size() != st.width() * st.instances() || t.z.size() != st.instances()) return false;
  if (challenge_commitment(ctx, t.k, t.e, t.r) != t.com) return false;
  return back_compute(ctx, st, t.e, t.z) == t.commitments;
}

Prover::Prover(DlogStatement statement, std::vector<Scalar> witness, CommitKey key, ProverCoins coins)
    : statement_(std::move(statement)),
      witness_(std::move(witness)),
      tau_(key.tau),
      k_(key.k),
      coins_(std::move(coins)) {
  check_shape(statement_);
  if (witness_.size() != statement_.instances() || coins_.a.size() != statement_.instances()) {
    throw Error(ErrorCode::MalformedMessage, "witness/coins do not match statement");
  }
}

Prover::Prover(DlogStatement statement, std::vector<Scalar> witness, Scalar tau, ProverCoins coins)
    : Prover(std::move(statement), std::move(witness), CommitKey{tau, Element{}}, std::move(coins)) {
  k_.reset();
}

Message Prover::start(GroupContext& ctx) {
  if (phase_ != Phase::AwaitCommitKey) phase_error("prover already started");
  if (!k_) k_ = ctx.exp_g(tau_);
  phase_ = Phase::AwaitChallengeCommit;
  return CommitKeyMsg{*k_};
}

Message Prover::step(GroupContext& ctx, const Message& incoming) {
  if (phase_ == Phase::AwaitChallengeCommit) {
    const auto* m = std::get_if<ChallengeCommitMsg>(&incoming);
    if (m == nullptr) phase_error("prover expected the challenge commitment");
    com_ = m->com;
    FirstMsg first;
    for (std::size_t j = 0; j < statement_.instances(); ++j) {
      for (const auto& base : statement_.bases) first.commitments.push_back(ctx.exp(base, coins_.a[j]));
    }
    phase_ = Phase::AwaitDecommit;
    return first;
  }
  if (phase_ == Phase::AwaitDecommit) {
    const auto* m = std::get_if<DecommitMsg>(&incoming);
    if (m == nullptr) phase_error("prover expected the challenge decommitment");
    phase_ = Phase::Done;
    if (challenge_commitment(ctx, *k_, m->e, m->r) != com_) {
      aborted_ = true;
      throw Error(ErrorCode::DecommitMismatch, "verifier opened a different challenge");
    }
    const Group& group = ctx.group();
    ResponseMsg response;
    for (std::size_t j = 0; j < statement_.instances(); ++j) {
      response.z.push_back(group.add(coins_.a[j], group.mul(m->e, witness_[j])));
    }
    return response;
  }
  phase_error("prover received a message out of order");
}

Verifier::Verifier(DlogStatement statement, VerifierCoins coins)
    : statement_(std::move(statement)), coins_(std::move(coins)) {
  check_shape(statement_);
}

void Verifier::reject() {
  phase_ = Phase::Done;
  transcript_.accept = false;
}

std::optional<Message> Verifier::step(GroupContext& ctx, const Message& incoming) {
  switch (phase_) {
    case Phase::AwaitCommitKey:
      if (const auto* m = std::get_if<CommitKeyMsg>(&incoming)) {
        transcript_.k = m->k;
        transcript_.com = challenge_commitment(ctx, m->k, coins_.e, coins_.r);
        phase_ = Phase::AwaitFirstMessage;
        return ChallengeCommitMsg{transcript_.com};
      }
      break;
    case Phase::AwaitFirstMessage:
      if (const auto* m = std::get_if<FirstMsg>(&incoming)) {
        if (m->commitments.size() != statement_.width() * statement_.instances()) {
          reject();
          throw Error(ErrorCode::MalformedMessage, "first message has the wrong number of elements");
        }
        transcript_.commitments = m->commitments;
        transcript_.e = coins_.e;
        transcript_.r = coins_.r;
        phase_ = Phase::AwaitResponse;
        return DecommitMsg{coins_.e, coins_.r};
      }
      break;
    case Phase::AwaitResponse:
      if (const auto* m = std::get_if<ResponseMsg>(&incoming)) {
        if (m->z.size() != statement_.instances()) {
          reject();
          throw Error(ErrorCode::MalformedMessage, "response has the wrong number of scalars");
        }
        transcript_.z = m->z;
        transcript_.accept = back_compute(ctx, statement_, coins_.e, m->z) == transcript_.commitments;
        phase_ = Phase::Done;
        return std::nullopt;
      }
      break;
    default:
      break;
  }
  if (std::holds_alternative<AbortMsg>(incoming) && phase_ != Phase::Done) {
    reject();
    return std::nullopt;
  }
  reject();
  phase_error("verifier received a message out of order");
}

Transcript run(GroupContext& prover_ctx, GroupContext& verifier_ctx, Prover& prover, Verifier& verifier) {
  Message to_verifier = prover.start(prover_ctx);
  while (!verifier.done()) {
    auto to_prover = verifier.step(verifier_ctx, to_verifier);
    if (!to_prover) break;
    try {
      to_verifier = prover.step(prover_ctx, *to_prover);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DecommitMismatch) throw;
      to_verifier = AbortMsg{e.code()};
    }
  }
  return verifier.transcript();
}

Transcript simulate(GroupContext& ctx, const DlogStatement& st, EntropySource& rng) {
  const Group& group = ctx.group();
  SimulatorCoins coins{group.random_scalar(rng), group.random_scalar(rng), group.random_scalar(rng), {}};
  for (std::size_t j = 0; j < st.instances(); ++j) coins.z.push_back(group.random_scalar(rng));
  return simulate(ctx, st, coins);
}

Transcript simulate(GroupContext& ctx, const DlogStatement& st, const SimulatorCoins& coins) {
  check_shape(st);
  Transcript t;
  t.k = ctx.exp_g(coins.tau);
  t.com = challenge_commitment(ctx, t.k, coins.e, coins.r);
  t.commitments = back_compute(ctx, st, coins.e, coins.z);
  t.e = coins.e;
  t.r = coins.r;
  t.z = coins.z;
  t.accept = true;
  return t;
}

GuessingProver::GuessingProver(DlogStatement statement, CommitKey key, Scalar guess, std::vector<Scalar> z)
    : statement_(std::move(statement)), key_(std::move(key)), guess_(guess), z_(std::move(z)) {
  check_shape(statement_);
  if (z_.size() != statement_.instances()) throw Error(ErrorCode::MalformedMessage, "one response per instance");
}

Message GuessingProver::start(GroupContext&) {
  if (phase_ != Phase::AwaitCommitKey) phase_error("prover already started");
  phase_ = Phase::AwaitChallengeCommit;
  return CommitKeyMsg{key_.k};
}

Message GuessingProver::step(GroupContext& ctx, const Message& incoming) {
  if (phase_ == Phase::AwaitChallengeCommit && std::holds_alternative<ChallengeCommitMsg>(incoming)) {
    phase_ = Phase::AwaitDecommit;
    return FirstMsg{back_compute(ctx, statement_, guess_, z_)};
  }
  if (phase_ == Phase::AwaitDecommit && std::holds_alternative<DecommitMsg>(incoming)) {
    phase_ = Phase::Done;
    return ResponseMsg{z_};
  }
  phase_error("guessing prover received a message out of order");
}

}  // namespace cai::zk
