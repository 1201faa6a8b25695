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

// Brute-force gate verification: integrate X' = omega Y, Y' = -lambda(t) X / omega
// per mode and spin branch with impulsive kicks, and accumulate the action
// by quadrature of L = (omega^2 Y^2 - lambda X^2) / (2 omega). Nothing here
// uses the closed forms in gatekernel.

#ifndef FASTGATE_ORACLE_HPP
#define FASTGATE_ORACLE_HPP

#include <array>
#include <vector>

#include "fastgate/gatekernel.hpp"

namespace fastgate {

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
};

struct OracleOptions {
    double ode_tol = 1e-12;
    double route_tol = 1e-8;
    // Common offset of every branch at t = 0 (excess micromotion), per mode.
    std::array<PhasePoint, 2> initial{};
    // Extra times at which branch states are recorded; must lie in [0, gate_time].
    std::vector<double> sample_times;
};

// One spin branch of one mode. s is the state factor b^A sigma^A + b^B sigma^B.
struct BranchPath {
    double s = 0.0;
    std::vector<PhasePoint> samples;
    std::vector<double> sample_action;     // quadrature of L up to each sample
    std::vector<double> sample_kick_work;  // sum of X_j dY_j up to each sample
    PhasePoint start;
    PhasePoint end;
    double action_quadrature = 0.0;
    double action_boundary = 0.0;  // sum over smooth segments of [X Y / 2]
    double kick_work = 0.0;
    double jump_total = 0.0;  // sum of |dY|
};

struct ModePaths {
    ModeLabel label = ModeLabel::CM;
    BranchPath free;
    BranchPath plus;   // s = +sqrt(2)
    BranchPath minus;  // s = -sqrt(2)
};

struct Trajectory {
    double gate_time = 0.0;
    std::vector<double> times;
    std::array<ModePaths, 2> modes;
    long steps = 0;
};

struct ActionPhases {
    // Phase relative to free evolution, per mode: {s = +sqrt2, s = -sqrt2}.
    std::array<std::array<double, 2>, 2> branch;
    double theta = 0.0;
    double route_gap = 0.0;  // max |quadrature - boundary| over branches
};

Trajectory integrate(const KickSequence &seq, const TrapConfig &trap, const OracleOptions &options = {});

// Throws RouteMismatch when quadrature and boundary formula disagree by more than route_tol.
ActionPhases action_phase(const Trajectory &traj, const TrapConfig &trap, double route_tol = 1e-8);

GateMetrics oracle_metrics(const KickSequence &seq, const TrapConfig &trap, const ThermalState &thermal,
                           const OracleOptions &options = {});

// Running entangling phase at each sample time.
std::vector<double> running_phase(const Trajectory &traj, const TrapConfig &trap);

}  // namespace fastgate

#endif
