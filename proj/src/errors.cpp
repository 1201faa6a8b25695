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

#include "fastgate/errors.hpp"

namespace fastgate {

const char *error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotStable:
            return "NotStable";
        case ErrorCode::NoConvergence:
            return "NoConvergence";
        case ErrorCode::TruncationFailure:
            return "TruncationFailure";
        case ErrorCode::CalibrationFailure:
            return "CalibrationFailure";
        case ErrorCode::InvalidSpacing:
            return "InvalidSpacing";
        case ErrorCode::NoCandidates:
            return "NoCandidates";
        case ErrorCode::InfeasibleSpacing:
            return "InfeasibleSpacing";
        case ErrorCode::NoSolution:
            return "NoSolution";
        case ErrorCode::IntegratorFailure:
            return "IntegratorFailure";
        case ErrorCode::RouteMismatch:
            return "RouteMismatch";
        case ErrorCode::DomainError:
            return "DomainError";
        case ErrorCode::ConfigError:
            return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string &message) { throw Error(code, message); }

}  // namespace fastgate
