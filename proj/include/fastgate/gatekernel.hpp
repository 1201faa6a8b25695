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

// Closed-form gate metrics for a sequence of state-dependent kicks.
//
// A kick of multiplicity z on mode alpha shifts Y_alpha by 2^{3/2} eta_alpha z s,
// with s = b^A sigma^A + b^B sigma^B. With W the constant Wronskian ratio,
//     omega G(t, t') = [sin(omega D) mu_c + cos(omega D) mu_s] / W,   D = t - t',
// the position response, and the momentum response is
//     [sin(omega D) kappa_s + cos(omega D) kappa_c] / W.

#ifndef FASTGATE_GATEKERNEL_HPP
#define FASTGATE_GATEKERNEL_HPP

#include <array>
#include <optional>
#include <vector>

#include "fastgate/trap.hpp"

namespace fastgate {

struct KickGroup {
    double t = 0.0;
    int z = 0;
};

struct KickSequence {
    std::vector<KickGroup> kicks;
    double gate_time = 0.0;
    // R = 2 pi f_rep / omega_0; nullopt means unlimited repetition rate.
    std::optional<double> rep_rate;

    // Minimum separation of unit kicks, 2 pi / R, or 0.
    double min_spacing() const;
    int n_sdk() const;
    // Unit kicks spaced by min_spacing under a finite rate; nonzero groups otherwise.
    std::vector<KickGroup> expanded() const;
    // Throws InvalidSpacing or DomainError.
    void validate() const;
};

struct ThermalState {
    double nbar_cm = 0.0;
    double nbar_br = 0.0;

    double nbar(ModeLabel label) const { return label == ModeLabel::CM ? nbar_cm : nbar_br; }
};

struct ModeDisplacement {
    double dx = 0.0;
    double dy = 0.0;
};

struct GateMetrics {
    double theta = 0.0;
    double phase_error = 0.0;  // |theta| - pi / 4
    std::array<ModeDisplacement, 2> displacements{};
    double infidelity = 0.0;
    int n_sdk = 0;

    double fidelity() const { return 1.0 - infidelity; }
};

struct TensorPair {
    double c = 0.0;
    double s = 0.0;
};

TensorPair mu_tensors(const ModeSpec &mode, double t, double t_prime);
TensorPair kappa_tensors(const ModeSpec &mode, double t, double t_prime);

// omega G(t, t'), the X response at t to a unit Y jump at t'.
double position_response(const ModeSpec &mode, double t, double t_prime);
// Y response at t to a unit Y jump at t'.
double momentum_response(const ModeSpec &mode, double t, double t_prime);

double entangling_phase(const KickSequence &seq, const TrapConfig &trap);

ModeDisplacement residual_displacement(const KickSequence &seq, const ModeSpec &mode);

double infidelity(double phase_error, const std::array<ModeDisplacement, 2> &displacements, const TrapConfig &trap,
                  const ThermalState &thermal);

GateMetrics evaluate(const KickSequence &seq, const TrapConfig &trap, const ThermalState &thermal);

// Infidelity of the empty sequence, (2/3)(pi/4)^2.
double baseline_infidelity();

}  // namespace fastgate

#endif
