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

#include "cai/error.hpp"

namespace cai {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotInGroup: return "NotInGroup";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::ScalarOutOfRange: return "ScalarOutOfRange";
    case ErrorCode::EntropyExhausted: return "EntropyExhausted";
    case ErrorCode::RandomnessMismatch: return "RandomnessMismatch";
    case ErrorCode::OpeningMismatch: return "OpeningMismatch";
    case ErrorCode::UnknownVote: return "UnknownVote";
    case ErrorCode::DecommitMismatch: return "DecommitMismatch";
    case ErrorCode::PhaseError: return "PhaseError";
    case ErrorCode::DuplicateBallot: return "DuplicateBallot";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::HashMismatch: return "HashMismatch";
    case ErrorCode::ZkpRejected: return "ZkpRejected";
    case ErrorCode::InvalidSignature: return "InvalidSignature";
    case ErrorCode::DuplicateVoter: return "DuplicateVoter";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::MalformedMessage: return "MalformedMessage";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::TransportClosed: return "TransportClosed";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace cai
