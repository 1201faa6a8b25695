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

// Floquet solutions of the Mathieu-Hill equation
//     x'' + (Omega/2)^2 [a - 2 q cos(Omega t + phi)] x = 0
// in the first stability region. Times are in units of 1/omega_0.

#ifndef FASTGATE_FLOQUET_HPP
#define FASTGATE_FLOQUET_HPP

#include <complex>
#include <vector>

namespace fastgate {

struct MathieuParams {
    double a = 0.0;
    double q = 0.0;
    double rf_ratio = 1.0;  // Omega / omega_0
    double rf_phase = 0.0;  // phi
};

// Coefficients C_n, n in [-n_max, n_max], normalized so that C_0 = 1.
struct FloquetSolution {
    double beta = 0.0;
    int n_max = 0;
    double residual = 0.0;  // max |C_{n+1} - D_n C_n + C_{n-1}| over retained rows
    std::vector<double> coeffs;

    double coeff(int n) const;
};

struct FloquetTolerances {
    double beta_tol = 1e-12;
    double coeff_tol = 1e-14;
    int n_max_cap = 64;
};

// Value of the complex mode u = exp(i omega t) F(t) and its time derivative.
struct ModeValue {
    std::complex<double> u;
    std::complex<double> u_dot;
};

// F(t) = f_C + i f_S with f_C = sum C_n cos(n theta), f_S = sum C_n sin(n theta).
struct Envelope {
    double f_c = 0.0;
    double f_s = 0.0;
    double f_c_dot = 0.0;
    double f_s_dot = 0.0;
};

// Characteristic exponent beta in (0, 1) from the continued-fraction
// equation. q = 0 gives sqrt(a). Throws NotStable outside the first region.
double characteristic_exponent(double a, double q, double tol = 1e-12);

// Residual a - beta^2 - q (R_+ + R_-) of the characteristic equation at a
// fixed continued-fraction depth.
double characteristic_residual(double a, double q, double beta, int depth);

FloquetSolution fourier_coefficients(double a, double q, double beta, int n_max_cap = 64, double tol = 1e-14);

FloquetSolution solve_floquet(double a, double q, const FloquetTolerances &tol = {});

double secular_frequency(const FloquetSolution &sol, const MathieuParams &p);

Envelope envelope_functions(const FloquetSolution &sol, const MathieuParams &p, double t);

ModeValue mode_function(const FloquetSolution &sol, const MathieuParams &p, double t);

// 1 + (f_C f_S' - f_S f_C') / omega, as written in the literature.
double rho(const FloquetSolution &sol, const MathieuParams &p, double t);

// Constant Wronskian Im(u* u') / omega = |F|^2 + (f_C f_S' - f_S f_C') / omega.
// This is the normalization that makes omega G(t, t') = Im(u(t) u*(t')) / W.
double wronskian_ratio(const FloquetSolution &sol, const MathieuParams &p);

// Trace of the monodromy matrix of x'' + (a - 2 q cos 2 tau) x = 0 over tau in [0, pi].
double monodromy_trace(double a, double q, double ode_tol = 1e-13);

// beta = arccos(trace / 2) / pi. Throws NotStable if |trace| >= 2.
double monodromy_exponent(double a, double q, double ode_tol = 1e-13);

// The trace is independent of rf_ratio after rescaling time to tau = Omega t / 2.
bool is_stable(double a, double q, double rf_ratio = 1.0);

// Smallest q > 0 at fixed a where the first stability region ends, by
// bisection on |trace| = 2 between q_lo (stable) and q_hi (unstable).
double stability_edge_q(double a, double q_lo, double q_hi, double tol = 1e-10);

}  // namespace fastgate

#endif
