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

#include "cai/wire.hpp"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "cai/error.hpp"

namespace cai::wire {
namespace {

constexpr std::size_t kHeader = 1 + SessionToken::kSize + 1 + 1;

bool known_role(std::uint8_t r) { return r >= 0x01 && r <= 0x04; }

bool known_phase(std::uint8_t p) {
  switch (static_cast<Phase>(p)) {
    case Phase::Hello:
    case Phase::SubmitToken:
    case Phase::Cast:
    case Phase::Blind:
    case Phase::AuditRequest:
    case Phase::AuditOffer:
    case Phase::Proof:
    case Phase::Confirm:
    case Phase::Ack:
    case Phase::Error:
      return true;
  }
  return false;
}

void read_exact(int fd, std::uint8_t* out, std::size_t n, std::chrono::milliseconds timeout) {
  while (n > 0) {
    pollfd p{fd, POLLIN, 0};
    int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw Error(ErrorCode::TransportClosed, std::strerror(errno));
    if (rc == 0) throw Error(ErrorCode::Timeout, "no frame within timeout");
    ssize_t got = ::read(fd, out, n);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) throw Error(ErrorCode::TransportClosed, "peer closed the stream");
    out += got;
    n -= static_cast<std::size_t>(got);
  }
}

}  // namespace

Bytes frame(const WireMessage& msg) {
  const std::size_t body = kHeader + msg.payload.size();
  if (body > kMaxBody) throw Error(ErrorCode::BadLength, "frame too long");
  return ByteWriter()
      .u32(static_cast<std::uint32_t>(body))
      .u8(msg.version)
      .raw(msg.token.bytes())
      .u8(static_cast<std::uint8_t>(msg.role))
      .u8(static_cast<std::uint8_t>(msg.phase))
      .raw(msg.payload)
      .bytes();
}

WireMessage unframe(ByteView bytes) {
  ByteReader in(bytes);
  const std::uint32_t body = in.u32();
  if (body > kMaxBody || body < kHeader || body != in.remaining()) throw Error(ErrorCode::BadLength, "frame length");
  WireMessage msg;
  msg.version = in.u8();
  if (msg.version != kVersion) throw Error(ErrorCode::UnknownVersion, "frame version " + std::to_string(msg.version));
  msg.token = SessionToken::from_bytes(in.take(SessionToken::kSize));
  const std::uint8_t role = in.u8(), phase = in.u8();
  if (!known_role(role) || !known_phase(phase)) throw Error(ErrorCode::MalformedMessage, "unknown role or phase tag");
  msg.role = static_cast<Role>(role);
  msg.phase = static_cast<Phase>(phase);
  ByteView rest = in.take(in.remaining());
  msg.payload.assign(rest.begin(), rest.end());
  return msg;
}

WireMessage error_message(Role role, const SessionToken& token, ErrorCode code, std::string_view text) {
  WireMessage msg{kVersion, token, role, Phase::Error, {}};
  msg.payload = ByteWriter().u8(static_cast<std::uint8_t>(code)).raw(as_bytes(text)).bytes();
  return msg;
}

void raise_if_error(const WireMessage& msg) {
  if (msg.phase != Phase::Error) return;
  if (msg.payload.empty()) throw Error(ErrorCode::MalformedMessage, "empty error frame");
  std::string text(msg.payload.begin() + 1, msg.payload.end());
  throw Error(static_cast<ErrorCode>(msg.payload[0]), text);
}

WireMessage InProcessLink::exchange(const WireMessage& request) { return unframe(handler_(frame(request))); }

Bytes read_frame(int fd, std::chrono::milliseconds timeout) {
  Bytes out(4);
  read_exact(fd, out.data(), 4, timeout);
  const std::uint32_t body = ByteReader(out).u32();
  if (body > kMaxBody) throw Error(ErrorCode::BadLength, "frame too long");
  out.resize(4 + body);
  read_exact(fd, out.data() + 4, body, timeout);
  return out;
}

void write_frame(int fd, ByteView bytes) {
  while (!bytes.empty()) {
    ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw Error(ErrorCode::TransportClosed, "write failed");
    bytes = bytes.subspan(static_cast<std::size_t>(n));
  }
}

SocketLink::SocketLink(Handler handler, std::chrono::milliseconds timeout) : timeout_(timeout) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) throw Error(ErrorCode::TransportClosed, "socketpair");
  client_fd_ = fds[0];
  server_fd_ = fds[1];
  server_ = std::thread([fd = server_fd_, handler = std::move(handler)] {
    for (;;) {
      Bytes request;
      try {
        // The server waits for the next request as long as the client lives.
        request = read_frame(fd, std::chrono::hours(24));
      } catch (const Error&) {
        return;
      }
      try {
        write_frame(fd, handler(request));
      } catch (const Error&) {
        return;
      }
    }
  });
}

SocketLink::~SocketLink() {
  ::shutdown(client_fd_, SHUT_RDWR);
  if (server_.joinable()) server_.join();
  ::close(client_fd_);
  ::close(server_fd_);
}

WireMessage SocketLink::exchange(const WireMessage& request) {
  write_frame(client_fd_, frame(request));
  return unframe(read_frame(client_fd_, timeout_));
}

}  // namespace cai::wire
