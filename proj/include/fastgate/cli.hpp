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

#ifndef FASTGATE_CLI_HPP
#define FASTGATE_CLI_HPP

#include <string>
#include <vector>

#include "fastgate/errors.hpp"

namespace fastgate::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kNoSolution = 4 };

int exit_code_for(ErrorCode code);

// args excludes the program name. Diagnostics go to stderr.
int run(const std::vector<std::string> &args);
int run(int argc, char **argv);

}  // namespace fastgate::cli

#endif
