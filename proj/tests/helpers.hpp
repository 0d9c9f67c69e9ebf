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

#include <cstdint>

#include "cai/group.hpp"

namespace testing_helpers {

inline const cai::SchnorrGroup& tiny() { return *cai::tiny_group(); }
inline cai::Scalar S(std::uint64_t v) { return tiny().scalar_from_u64(v); }
inline cai::Element E(std::uint64_t v) { return tiny().element(v); }
inline std::uint64_t val(const cai::Element& e) { return tiny().value(e); }
inline std::uint64_t val(const cai::Scalar& s) { return tiny().value(s); }

}  // namespace testing_helpers
