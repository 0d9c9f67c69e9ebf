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

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <thread>

#include "cai/bytes.hpp"
#include "cai/error.hpp"

namespace cai::wire {

inline constexpr std::uint8_t kVersion = 0x01;
/// Upper bound on the body of one frame.
inline constexpr std::uint32_t kMaxBody = 1u << 20;
inline constexpr std::chrono::milliseconds kDefaultTimeout{5000};

enum class Role : std::uint8_t {
  Voter = 0x01,
  VotingDevice = 0x02,
  VotingServer = 0x03,
  AuditDevice = 0x04,
};

enum class Phase : std::uint8_t {
  Hello = 0x01,         // VD -> VS: request a submission token
  SubmitToken = 0x02,   // VS -> VD: token in the header
  Cast = 0x03,          // VD -> VS
  Blind = 0x04,         // VS -> VD
  AuditRequest = 0x10,  // AD -> VS
  AuditOffer = 0x11,    // VS -> AD: offer || commit-key message
  Proof = 0x12,         // both ways: one proof message
  Confirm = 0x13,       // AD -> VS: verdict bit
  Ack = 0x14,
  Error = 0x7F,         // error code byte || text
};

struct WireMessage {
  std::uint8_t version = kVersion;
  SessionToken token;
  Role role = Role::Voter;
  Phase phase = Phase::Hello;
  Bytes payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

/// u32 big-endian body length || version || token (16) || role || phase || payload.
Bytes frame(const WireMessage& msg);
/// Exactly one frame. Throws Error{BadLength} on truncated, over-long or
/// inconsistent input, Error{UnknownVersion}, or Error{MalformedMessage} on an
/// unknown role or phase tag.
WireMessage unframe(ByteView bytes);

WireMessage error_message(Role role, const SessionToken& token, ErrorCode code, std::string_view text);
/// Throws the Error carried by an Error-phase message; otherwise no-op.
void raise_if_error(const WireMessage& msg);

/// Server side: one reply frame per request frame.
using Handler = std::function<Bytes(ByteView request)>;

/// Client side of a request/reply link.
class Link {
 public:
  virtual ~Link() = default;
  virtual WireMessage exchange(const WireMessage& request) = 0;
};

/// Direct call into the handler, still through frame/unframe.
class InProcessLink final : public Link {
 public:
  explicit InProcessLink(Handler handler) : handler_(std::move(handler)) {}
  WireMessage exchange(const WireMessage& request) override;

 private:
  Handler handler_;
};

/// Local stream socket pair; the handler runs on its own thread. Each read
/// waits at most `timeout`; a stall surfaces as Error{Timeout}.
class SocketLink final : public Link {
 public:
  SocketLink(Handler handler, std::chrono::milliseconds timeout = kDefaultTimeout);
  ~SocketLink() override;
  SocketLink(const SocketLink&) = delete;
  SocketLink& operator=(const SocketLink&) = delete;

  WireMessage exchange(const WireMessage& request) override;

 private:
  int client_fd_ = -1;
  int server_fd_ = -1;
  std::chrono::milliseconds timeout_;
  std::thread server_;
};

/// Reads one length-prefixed frame from a stream socket. Throws Error{Timeout}
/// or Error{TransportClosed}.
Bytes read_frame(int fd, std::chrono::milliseconds timeout);
void write_frame(int fd, ByteView frame);

}  // namespace cai::wire
