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
#include <string>
#include <string_view>
#include <vector>

namespace cai {

/// Flat key=value election configuration. '#' starts a comment line.
///
///   group = tiny | production
///   alphabet = yes,no,blank
///   ballot_length = 1
///   replacement = false
///   confirmation = false
///   election_id = demo
struct ElectionConfig {
  std::string group = "production";
  std::vector<std::string> alphabet{"yes", "no"};
  std::size_t ballot_length = 1;
  bool replacement = false;
  bool confirmation_codes = false;
  std::string election_id = "election";

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

/// Throws Error{InvalidConfig} on unknown keys, bad values or broken invariants.
ElectionConfig parse_config(std::string_view text);
ElectionConfig load_config(const std::string& path);
std::string to_text(const ElectionConfig& config);

}  // namespace cai
