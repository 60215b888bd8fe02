// Copyright 2026 The cqedswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Flat "key = value" scenario files.
//
//   # comment
//   preset = paper-fig2
//   model = primary
//   scenario = set
//   beta = 0.5
//   alpha_s = (0.158, 0)
//
// Keys are case-sensitive; unknown or repeated keys are errors. See
// config_keys() for the full list.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cqedswitch/bench.hpp"

namespace cqedswitch {

struct KeyValueEntry {
  std::string value;
  std::string where;  // "source:line" for error messages
};

/// Settings in file order.
using KeyValues = std::vector<std::pair<std::string, KeyValueEntry>>;

/// Parses key = value lines; '#' starts a comment. Throws InvalidArgument on
/// malformed lines and duplicate keys.
KeyValues parse_key_values(std::istream& is, const std::string& source);
KeyValues load_key_values(const std::filesystem::path& path);

/// Entries of `overrides` replace same-named entries of `base`.
KeyValues merge(KeyValues base, const KeyValues& overrides);

double parse_double(const std::string& text, const std::string& where);
long parse_integer(const std::string& text, const std::string& where);
bool parse_bool(const std::string& text, const std::string& where);
/// "re", "(re)" or "(re,im)".
cplx parse_complex(const std::string& text, const std::string& where);

struct ConfigKey {
  std::string name;
  std::string help;
};

/// Every accepted scenario key with a one-line description.
const std::vector<ConfigKey>& config_keys();

/// Builds a scenario: preset, model, scenario and init select the starting
/// point; the remaining keys override it (collective keys such as `kappa`
/// are applied before their per-mode forms). The result is validated.
Scenario scenario_from_settings(const KeyValues& settings);

}  // namespace cqedswitch
