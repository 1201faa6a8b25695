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

// Robustness of a gate solution: the kick-population fidelity bound, the
// stratified Monte-Carlo over kick errors, and ensemble sweeps over timing,
// repetition-period, mode-splitting and drive-phase noise.

#ifndef FASTGATE_NOISE_HPP
#define FASTGATE_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fastgate/gpg.hpp"

namespace fastgate {

enum class NoiseKind { SdkError, TimingJitter, RepPeriod, ModeSplitting, RfPhase };

const char *noise_kind_name(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string &name);  // throws ConfigError

struct NoiseChannel {
    NoiseKind kind = NoiseKind::SdkError;
    // Error probability for SdkError, trap periods for the timing channels,
    // absolute chi for ModeSplitting, radians for RfPhase.
    double sigma = 0.0;
    int samples = 1000;
    uint64_t seed = 1;
    int m_max = 3;
    double flip_fraction = 0.5;  // erroneous kicks that reverse; the rest are dropped
    int bins = 50;
    // Common random numbers: the draw stream ignores sigma, so sweeps over sigma
    // reuse the same standard normals.
    bool common_random_numbers = false;

    void validate() const;
};

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> mass;  // sums to 1
};

struct SdkStratum {
    int m = 0;
    double weight = 0.0;
    double mean = 0.0;
    double variance = 0.0;
    int samples = 0;
    Histogram histogram;
};

struct NoiseReport {
    NoiseChannel channel;
    double baseline = 0.0;  // noise-free infidelity of the solution
    double mean = 0.0;
    double variance = 0.0;
    double standard_error = 0.0;
    int samples = 0;
    int failures = 0;
    Histogram histogram;
    // SdkError only. Retained strata and the binomial mass beyond m_max,
    // which the mean counts as total failure.
    std::vector<SdkStratum> strata;
    double tail_mass = 0.0;
    std::string projection;  // min-gap repair used by timing_jitter, if any
    std::vector<std::string> warnings;
};

// (1 - n eps)^2 f0. Throws DomainError unless 0 <= eps and n eps < 1.
double population_bound(double f0, int n_sdk, double eps);

// C(n, m) eps^m (1 - eps)^(n - m) for m = 0..min(m_max, n).
std::vector<double> binomial_weights(int n, double eps, int m_max);

// Unit-kick times and signs: groups expanded at the repetition period, or
// repeated in place under an unlimited rate.
std::vector<KickGroup> unit_kicks(const KickSequence &seq);

// Stratified estimate: m = 0..m_max errors placed uniformly over unit kicks,
// mixed with binomial weights.
NoiseReport mc_sdk_errors(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                          int threads = 1);

// Plain Monte-Carlo: every unit kick fails independently with probability sigma.
NoiseReport mc_sdk_errors_direct(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                                 int threads = 1);

NoiseReport mc_parameter_noise(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                               int threads = 1);

// Sort, then push violating neighbours apart symmetrically until every gap is at
// least `gap`; finally shifts into [0, t_end] if the span allows.
void enforce_min_gap(std::vector<double> &t, double gap, double t_end);

}  // namespace fastgate

#endif
