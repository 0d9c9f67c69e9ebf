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

#include "cai/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "cai/error.hpp"

namespace cai {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidConfig, std::string(key) + ": expected a boolean");
}

}  // namespace

void ElectionConfig::validate() const {
  if (group != "tiny" && group != "production") throw Error(ErrorCode::InvalidConfig, "group must be tiny or production");
  if (alphabet.size() < 2) throw Error(ErrorCode::InvalidConfig, "alphabet needs at least two labels");
  if (std::set<std::string>(alphabet.begin(), alphabet.end()).size() != alphabet.size()) {
    throw Error(ErrorCode::InvalidConfig, "alphabet labels must be distinct");
  }
  for (const auto& l : alphabet) {
    if (l.empty()) throw Error(ErrorCode::InvalidConfig, "empty alphabet label");
  }
  if (ballot_length < 1) throw Error(ErrorCode::InvalidConfig, "ballot_length must be at least 1");
  if (election_id.empty() || election_id.size() > 16) {
    throw Error(ErrorCode::InvalidConfig, "election_id must be 1 to 16 bytes");
  }
}

ElectionConfig parse_config(std::string_view text) {
  ElectionConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(ErrorCode::InvalidConfig, "duplicate key " + key);

    if (key == "group") {
      c.group = value;
    } else if (key == "alphabet") {
      c.alphabet.clear();
      std::string_view rest = value;
      while (true) {
        const std::size_t comma = rest.find(',');
        c.alphabet.emplace_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key == "ballot_length") {
      std::size_t n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidConfig, "ballot_length: expected a number");
      }
      c.ballot_length = n;
    } else if (key == "replacement") {
      c.replacement = parse_bool(key, value);
    } else if (key == "confirmation") {
      c.confirmation_codes = parse_bool(key, value);
    } else if (key == "election_id") {
      c.election_id = value;
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown key " + key);
    }
  }
  c.validate();
  return c;
}

ElectionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ElectionConfig& c) {
  std::string alphabet;
  for (const auto& l : c.alphabet) alphabet += (alphabet.empty() ? "" : ",") + l;
  return "group = " + c.group + "\nalphabet = " + alphabet + "\nballot_length = " + std::to_string(c.ballot_length) +
         "\nreplacement = " + (c.replacement ? "true" : "false") +
         "\nconfirmation = " + (c.confirmation_codes ? "true" : "false") + "\nelection_id = " + c.election_id + "\n";
}

}  // namespace cai
