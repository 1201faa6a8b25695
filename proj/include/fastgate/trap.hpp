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

// Two-ion radial trap in units where omega_CM = 1.

#ifndef FASTGATE_TRAP_HPP
#define FASTGATE_TRAP_HPP

#include <array>
#include <string>

#include "fastgate/floquet.hpp"

namespace fastgate {

enum class ModeLabel { CM, BR };

const char *mode_name(ModeLabel label);

struct ModeSpec {
    ModeLabel label = ModeLabel::CM;
    MathieuParams params;
    FloquetSolution floquet;
    double omega = 1.0;
    std::array<double, 2> couplings{};  // (b^A, b^B)
    double eta = 0.0;                   // eta * sqrt(omega_CM / omega)
    double wronskian = 1.0;             // W / omega, see wronskian_ratio
};

struct TrapParams {
    double q_x = 0.0;
    double rf_ratio = 40.0;
    // (omega_BR - omega_CM) / omega_CM. Zero makes the modes degenerate and the
    // entangling phase cancels identically.
    double chi = -0.014;
    double eta = 0.15;
    double rf_phase = 0.0;
};

struct TrapConfig {
    TrapParams params;
    double a_cm = 0.0;
    double a_br = 0.0;
    std::array<ModeSpec, 2> modes;

    double rf_ratio() const { return params.rf_ratio; }
    // Same calibrated a values and Floquet coefficients at a different drive phase.
    TrapConfig with_rf_phase(double rf_phase) const;
};

// Solves beta(a, q) = 2 omega_target / rf_ratio for a.
double calibrate_a(double q, double rf_ratio, double omega_target);

TrapConfig calibrate(const TrapParams &params);

// Rebuilds a configuration from stored a values and checks the calibration
// invariants to `tol`.
TrapConfig assemble_trap(const TrapParams &params, double a_cm, double a_br, double tol = 1e-10);

struct CoulombShift {
    double a_cm;
    double a_br;
};

CoulombShift coulomb_mode_shift(double a_x, double gamma_norm);

// Dimensionless Coulomb curvature gamma_norm = 8 / (Omega^2 d^3) for spacing d in
// units where e^2 / (4 pi eps0 m) = omega_0^2.
double coulomb_gamma_norm(double rf_ratio, double d_gap);

// Lambda(t) = offset + amplitude * cos(Omega t + phi).
struct HillCoefficient {
    double offset;
    double amplitude;
};

struct HessianModes {
    HillCoefficient cm;
    HillCoefficient br;
    std::array<std::array<double, 2>, 2> vectors;  // rows: CM, BR
};

HessianModes hessian_eigenvalues(double d_gap, const MathieuParams &p);

double mean_occupation(double omega, double temperature);

}  // namespace fastgate

#endif
