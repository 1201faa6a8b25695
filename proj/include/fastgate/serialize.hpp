// Copyright 2026 The fastgate Authors
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

// Text artifacts. Trap configs are `key = value` lines with `#` comments,
// solutions are JSON with a fixed key order, tables are CSV. Doubles are
// written in the shortest form that parses back to the same value.

#ifndef FASTGATE_SERIALIZE_HPP
#define FASTGATE_SERIALIZE_HPP

#include <map>
#include <string>
#include <vector>

#include "fastgate/gpg.hpp"

namespace fastgate {

inline constexpr const char *kSolutionFormat = "fastgate-solution/1";

std::string format_double(double v);
double parse_double(const std::string &text, const std::string &what);  // throws ConfigError

// Parses `key = value` lines. Duplicate keys and malformed lines throw ConfigError.
std::map<std::string, std::string> parse_key_values(const std::string &text);

std::string trap_to_text(const TrapConfig &trap);
// Uses stored a values when present (no recalibration), else calibrates.
TrapConfig trap_from_text(const std::string &text);

std::string solution_to_json(const GateSolution &sol, bool record_timing = false,
                             const std::vector<GateSolution> &runners_up = {});
// Metrics are re-evaluated from the sequence, never read back.
GateSolution solution_from_json(const std::string &text);

std::string csv_field(const std::string &s);
std::string csv_row(const std::vector<std::string> &fields);

std::string read_file(const std::string &path);
// Writes to a temporary file in the same directory and renames over `path`.
// "-" writes to standard output.
void write_atomic(const std::string &path, const std::string &content);

}  // namespace fastgate

#endif
