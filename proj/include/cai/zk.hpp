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
#include <optional>
#include <variant>
#include <vector>

#include "cai/error.hpp"
#include "cai/group.hpp"

namespace cai::zk {

/// Equal-discrete-log statement: targets[j][i] = bases[i]^x_j for every
/// instance j and base i. One instance over (g, h) is Chaum-Pedersen DLEQ;
/// one base is Schnorr. Instances are AND-composed under a single challenge,
/// which is how a multi-race ballot is proven in one run.
struct DlogStatement {
  std::vector<Element> bases;
  std::vector<std::vector<Element>> targets;

  static DlogStatement dleq(const Element& g, const Element& h, const Element& x_target, const Element& y_target);
  static DlogStatement schnorr(const Element& base, const Element& target);

  std::size_t width() const { return bases.size(); }
  std::size_t instances() const { return targets.size(); }
  /// Checks the witness directly (uncounted); test and assertion helper.
  bool holds(const Group& group, const std::vector<Scalar>& witness) const;
};

struct Shape {
  std::size_t width = 0;
  std::size_t instances = 0;

  static Shape of(const DlogStatement& st) { return {st.width(), st.instances()}; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

enum class Phase : std::uint8_t {
  AwaitCommitKey,
  AwaitChallengeCommit,
  AwaitFirstMessage,
  AwaitDecommit,
  AwaitResponse,
  Done,
};

// Wire messages, in protocol order.
struct CommitKeyMsg {  // P -> V: k = g^tau
  Element k;
};
struct ChallengeCommitMsg {  // V -> P: com = g^r * k^e
  Element com;
};
struct FirstMsg {  // P -> V: bases[i]^a_j, instance-major
  std::vector<Element> commitments;
};
struct DecommitMsg {  // V -> P
  Scalar e;
  Scalar r;
};
struct ResponseMsg {  // P -> V: z_j = a_j + e * x_j
  std::vector<Scalar> z;
};
struct AbortMsg {  // P -> V after a bad decommitment
  ErrorCode reason = ErrorCode::DecommitMismatch;
};

using Message = std::variant<CommitKeyMsg, ChallengeCommitMsg, FirstMsg, DecommitMsg, ResponseMsg, AbortMsg>;

enum class MessageTag : std::uint8_t {
  CommitKey = 0x01,
  ChallengeCommit = 0x02,
  First = 0x03,
  Decommit = 0x04,
  Response = 0x05,
  Abort = 0x06,
};

MessageTag tag_of(const Message& msg);
/// tag byte || fixed-length fields.
Bytes encode(const Message& msg);
/// Field counts come from the statement shape, so every frame has one valid
/// length. Throws Error{BadLength}, Error{MalformedMessage}, Error{NotInGroup}.
Message decode(const Group& group, Shape shape, ByteView bytes);

/// Prover-side trapdoor for the challenge commitment.
struct CommitKey {
  Scalar tau;
  Element k;
};
CommitKey make_commit_key(GroupContext& ctx, EntropySource& rng);
CommitKey make_commit_key(GroupContext& ctx, const Scalar& tau);

struct ProverCoins {
  std::vector<Scalar> a;  // one per instance
};
struct VerifierCoins {
  Scalar e;
  Scalar r;
};

ProverCoins draw_prover_coins(const Group& group, Shape shape, EntropySource& rng);
VerifierCoins draw_verifier_coins(const Group& group, EntropySource& rng);

struct Transcript {
  Element k;
  Element com;
  std::vector<Element> commitments;
  Scalar e;
  Scalar r;
  std::vector<Scalar> z;
  bool accept = false;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Canonical byte string of all six messages plus the accept bit.
Bytes encode_transcript(const Transcript& t);

/// Checks com = g^r k^e and commitments == bases^z * targets^-e.
bool verify_transcript(GroupContext& ctx, const DlogStatement& st, const Transcript& t);

/// Honest prover. With a pre-made CommitKey the run costs width*instances + 2
/// exponentiations (4 for DLEQ); constructed from tau alone it also pays for
/// k = g^tau in start().
class Prover {
 public:
  Prover(DlogStatement statement, std::vector<Scalar> witness, CommitKey key, ProverCoins coins);
  Prover(DlogStatement statement, std::vector<Scalar> witness, Scalar tau, ProverCoins coins);

  /// Emits CommitKeyMsg.
  Message start(GroupContext& ctx);
  /// ChallengeCommitMsg -> FirstMsg; DecommitMsg -> ResponseMsg.
  /// Throws Error{PhaseError} (state unchanged) or Error{DecommitMismatch}
  /// (prover is then Done and aborted).
  Message step(GroupContext& ctx, const Message& incoming);

  Phase phase() const { return phase_; }
  bool aborted() const { return aborted_; }
  const DlogStatement& statement() const { return statement_; }

 private:
  DlogStatement statement_;
  std::vector<Scalar> witness_;
  Scalar tau_;
  std::optional<Element> k_;
  ProverCoins coins_;
  Element com_;
  Phase phase_ = Phase::AwaitCommitKey;
  bool aborted_ = false;
};

/// Honest verifier with committed challenge. Costs 2 + 2*width*instances
/// exponentiations (6 for DLEQ). Any failure ends in Done with accept = 0.
class Verifier {
 public:
  Verifier(DlogStatement statement, VerifierCoins coins);

  /// CommitKeyMsg -> ChallengeCommitMsg; FirstMsg -> DecommitMsg;
  /// ResponseMsg or AbortMsg -> nothing (Done). An out-of-order message
  /// rejects and throws Error{PhaseError}.
  std::optional<Message> step(GroupContext& ctx, const Message& incoming);

  Phase phase() const { return phase_; }
  bool done() const { return phase_ == Phase::Done; }
  bool accepted() const { return done() && transcript_.accept; }
  const Transcript& transcript() const { return transcript_; }
  const DlogStatement& statement() const { return statement_; }

 private:
  void reject();

  DlogStatement statement_;
  VerifierCoins coins_;
  Transcript transcript_;
  Phase phase_ = Phase::AwaitCommitKey;
};

/// Runs both parties in-process and returns the verifier's transcript.
Transcript run(GroupContext& prover_ctx, GroupContext& verifier_ctx, Prover& prover, Verifier& verifier);

struct SimulatorCoins {
  Scalar tau;
  Scalar e;
  Scalar r;
  std::vector<Scalar> z;
};

/// Accepting transcript without the witness: pick (e, z) first and solve for
/// the first message. Works for false statements too, which is the point.
Transcript simulate(GroupContext& ctx, const DlogStatement& st, EntropySource& rng);
Transcript simulate(GroupContext& ctx, const DlogStatement& st, const SimulatorCoins& coins);

/// Cheating prover without a witness that bets on one challenge value. It
/// convinces the verifier exactly when the decommitted challenge equals the
/// guess.
class GuessingProver {
 public:
  GuessingProver(DlogStatement statement, CommitKey key, Scalar guess, std::vector<Scalar> z);

  Message start(GroupContext& ctx);
  Message step(GroupContext& ctx, const Message& incoming);
  Phase phase() const { return phase_; }

 private:
  DlogStatement statement_;
  CommitKey key_;
  Scalar guess_;
  std::vector<Scalar> z_;
  Phase phase_ = Phase::AwaitCommitKey;
};

}  // namespace cai::zk
