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

// Two-stage pulse-group search. Stage 1 optimizes a continuous relaxation of
// the kick multiplicities at uniform times and integerizes; stage 2 moves the
// group times under the repetition-rate spacing constraint.

#ifndef FASTGATE_GPG_HPP
#define FASTGATE_GPG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastgate/errors.hpp"
#include "fastgate/gatekernel.hpp"

namespace fastgate {

struct SearchConfig {
    int n_groups = 0;  // 0 selects ceil(4 t_g Omega / (2 pi)), capped at 400
    double gate_time = 0.0;
    std::optional<double> rep_rate;
    int multistarts = 16;
    uint64_t seed = 1;
    int stage1_iters = 2000;
    int stage2_iters = 2000;
    int z_bound = 6;
    double fidelity_target = 0.999;
    double floor_fidelity = 0.0;
    ThermalState thermal;
    int top_k = 8;
    int per_start_candidates = 2;
    double sparsity_weight = 0.0;
    int threads = 1;

    int resolved_groups(double rf_ratio) const;
    void validate() const;
};

struct Candidate {
    std::vector<int> z;
    double cost = 0.0;
    int start = 0;
};

struct Provenance {
    uint64_t seed = 0;
    int start = 0;
    int multistarts = 0;
    int stage1_iters = 0;
    int stage2_iters = 0;
    int n_groups = 0;
    int z_bound = 0;
    double fidelity_target = 0.0;
    double wall_time_s = 0.0;
    std::string version;
};

struct GateSolution {
    KickSequence sequence;
    GateMetrics metrics;
    TrapConfig trap;
    ThermalState thermal;
    Provenance provenance;
};

struct SolveResult {
    GateSolution best;
    std::vector<GateSolution> ranked;
};

// Thrown by solve_gate when nothing reaches cfg.floor_fidelity; carries the ranking.
class NoSolutionError : public Error {
   public:
    NoSolutionError(const std::string &message, SolveResult result)
        : Error(ErrorCode::NoSolution, message), result_(std::move(result)) {}
    const SolveResult &result() const { return result_; }

   private:
    SolveResult result_;
};

std::vector<double> uniform_timings(int n_groups, double gate_time);

// Best integer candidates of each multistart, ordered by start index then cost.
std::vector<std::vector<Candidate>> stage1_candidates(const TrapConfig &trap, const SearchConfig &cfg);

// Global top-K distinct candidates by cost. Throws NoCandidates if none beats the empty gate.
std::vector<Candidate> stage1_search(const TrapConfig &trap, const SearchConfig &cfg);

GateSolution stage2_refine(const TrapConfig &trap, const std::vector<int> &z, const std::vector<double> &t_init,
                           const SearchConfig &cfg);

// Total order: meets target, fewer kicks, lower infidelity, lower start index.
bool ranks_before(const GateSolution &a, const GateSolution &b, double fidelity_target);

SolveResult solve_gate(const TrapConfig &trap, const SearchConfig &cfg);

enum class SweepAxis { GateTime, RepRate };

struct SweepRow {
    double value = 0.0;
    double q_x = 0.0;
    double infidelity = 0.0;
    int n_sdk = 0;
    double theta = 0.0;
    std::string status;  // "ok", "below_target", or an error code name
};

// One solve_gate per (trap, grid value); failures are recorded, not thrown.
// Gate times in the grid are in units of 1/omega_0.
std::vector<SweepRow> sweep(const std::vector<TrapConfig> &traps, SweepAxis axis, const std::vector<double> &grid,
                            const SearchConfig &cfg);

}  // namespace fastgate

#endif
