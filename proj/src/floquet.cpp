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

#include "fastgate/floquet.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "fastgate/errors.hpp"
#include "fastgate/ode.hpp"

namespace fastgate {

namespace {

// D_n = (a - (2n + beta)^2) / q.
inline double recurrence_diag(double a, double q, double beta, int n) {
    double k = 2.0 * n + beta;
    return (a - k * k) / q;
}

// Continued fraction 1 / (D_s - 1 / (D_{2s} - ...)) truncated at |n| = depth,
// where s = +1 walks upward and s = -1 walks downward.
double tail_ratio(double a, double q, double beta, int depth, int s) {
    double r = 0.0;
    for (int n = depth; n >= 1; --n) {
        r = 1.0 / (recurrence_diag(a, q, beta, s * n) - r);
    }
    return r;
}

std::string describe(double a, double q) {
    std::ostringstream os;
    os.precision(17);
    os << "(a=" << a << ", q=" << q << ")";
    return os.str();
}

void check_finite(double a, double q) {
    if (!std::isfinite(a) || !std::isfinite(q)) {
        fail(ErrorCode::DomainError, "non-finite Mathieu parameters " + describe(a, q));
    }
}

double solve_at_depth(double a, double q, int depth) {
    auto f = [&](double beta) { return characteristic_residual(a, q, beta, depth); };
    double f_lo = f(0.0);
    double f_hi = f(1.0);
    if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
        fail(ErrorCode::NotStable, "no first-region exponent at " + describe(a, q));
    }
    // Start from the small-q estimate and widen until the sign changes.
    double guess = std::sqrt(std::max(a + 0.5 * q * q, 0.0));
    guess = std::clamp(guess, 1e-6, 1.0 - 1e-6);
    double lo = 0.0, hi = 1.0;
    double flo = f_lo, fhi = f_hi;
    double f_guess = f(guess);
    double step = 1e-3;
    if (f_guess > 0.0) {
        lo = guess;
        flo = f_guess;
        for (double x = guess + step; x < 1.0; step *= 4.0, x = guess + step) {
            double fx = f(x);
            if (fx < 0.0) {
                hi = x;
                fhi = fx;
                break;
            }
            lo = x;
            flo = fx;
        }
    } else if (f_guess < 0.0) {
        hi = guess;
        fhi = f_guess;
        for (double x = guess - step; x > 0.0; step *= 4.0, x = guess - step) {
            double fx = f(x);
            if (fx > 0.0) {
                lo = x;
                flo = fx;
                break;
            }
            hi = x;
            fhi = fx;
        }
    } else {
        return guess;
    }
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
    auto [r0, r1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
    double beta = 0.5 * (r0 + r1);
    double scale = 1.0 + std::abs(a) + std::abs(q);
    if (!(std::abs(f(beta)) < 1e-9 * scale)) {
        // A pole of the continued fraction inside (0, 1) means we left the first region.
        fail(ErrorCode::NotStable, "characteristic equation has a pole in (0, 1) at " + describe(a, q));
    }
    return beta;
}

}  // namespace

double FloquetSolution::coeff(int n) const {
    if (n < -n_max || n > n_max) {
        return 0.0;
    }
    return coeffs[static_cast<size_t>(n + n_max)];
}

double characteristic_residual(double a, double q, double beta, int depth) {
    if (q == 0.0) {
        return a - beta * beta;
    }
    double r_plus = tail_ratio(a, q, beta, depth, +1);
    double r_minus = tail_ratio(a, q, beta, depth, -1);
    return a - beta * beta - q * (r_plus + r_minus);
}

double characteristic_exponent(double a, double q, double tol) {
    check_finite(a, q);
    if (q == 0.0) {
        if (!(a > 0.0) || !(a < 1.0)) {
            fail(ErrorCode::NotStable, "free oscillator outside the first region " + describe(a, q));
        }
        return std::sqrt(a);
    }
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int depth = 8; depth <= 4096; depth *= 2) {
        double beta = solve_at_depth(a, q, depth);
        if (std::abs(beta - prev) <= tol) {
            return beta;
        }
        prev = beta;
    }
    fail(ErrorCode::NoConvergence, "continued fraction did not converge at " + describe(a, q));
}

FloquetSolution fourier_coefficients(double a, double q, double beta, int n_max_cap, double tol) {
    check_finite(a, q);
    FloquetSolution sol;
    sol.beta = beta;
    if (q == 0.0) {
        sol.n_max = 0;
        sol.coeffs = {1.0};
        sol.residual = 0.0;
        return sol;
    }
    // Backward ratios r_{+n} = C_n / C_{n-1} and r_{-n} = C_{-n} / C_{-n+1}.
    const int depth = n_max_cap + 48;
    std::vector<double> up(depth + 2, 0.0), down(depth + 2, 0.0);
    for (int n = depth; n >= 1; --n) {
        up[n] = 1.0 / (recurrence_diag(a, q, beta, n) - up[n + 1]);
        down[n] = 1.0 / (recurrence_diag(a, q, beta, -n) - down[n + 1]);
    }
    std::vector<double> cp(n_max_cap + 1, 1.0), cm(n_max_cap + 1, 1.0);
    int n_max = -1;
    for (int n = 1; n <= n_max_cap; ++n) {
        cp[n] = cp[n - 1] * up[n];
        cm[n] = cm[n - 1] * down[n];
        if (std::abs(cp[n]) < tol && std::abs(cm[n]) < tol) {
            n_max = n;
            break;
        }
    }
    if (n_max < 0) {
        fail(ErrorCode::TruncationFailure, "Fourier series not truncated by n=" + std::to_string(n_max_cap) +
                                               " at " + describe(a, q));
    }
    sol.n_max = n_max;
    sol.coeffs.assign(2 * n_max + 1, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        sol.coeffs[n_max + n] = cp[n];
        sol.coeffs[n_max - n] = cm[n];
    }
    double residual = 0.0;
    for (int n = -n_max + 1; n <= n_max - 1; ++n) {
        double row = sol.coeff(n + 1) - recurrence_diag(a, q, beta, n) * sol.coeff(n) + sol.coeff(n - 1);
        residual = std::max(residual, std::abs(row));
    }
    sol.residual = residual;
    return sol;
}

FloquetSolution solve_floquet(double a, double q, const FloquetTolerances &tol) {
    double beta = characteristic_exponent(a, q, tol.beta_tol);
    return fourier_coefficients(a, q, beta, tol.n_max_cap, tol.coeff_tol);
}

double secular_frequency(const FloquetSolution &sol, const MathieuParams &p) { return 0.5 * sol.beta * p.rf_ratio; }

Envelope envelope_functions(const FloquetSolution &sol, const MathieuParams &p, double t) {
    const double theta = p.rf_ratio * t + p.rf_phase;
    const std::complex<double> e(std::cos(theta), std::sin(theta));
    std::complex<double> f = sol.coeff(0);
    std::complex<double> df = 0.0;
    std::complex<double> ep = 1.0;
    for (int n = 1; n <= sol.n_max; ++n) {
        ep *= e;
        const std::complex<double> em = std::conj(ep);
        const double cp = sol.coeff(n), cm = sol.coeff(-n);
        f += cp * ep + cm * em;
        df += static_cast<double>(n) * (cp * ep - cm * em);
    }
    df *= std::complex<double>(0.0, p.rf_ratio);
    return {f.real(), f.imag(), df.real(), df.imag()};
}

ModeValue mode_function(const FloquetSolution &sol, const MathieuParams &p, double t) {
    const double omega = secular_frequency(sol, p);
    const Envelope env = envelope_functions(sol, p, t);
    const std::complex<double> f(env.f_c, env.f_s), df(env.f_c_dot, env.f_s_dot);
    const std::complex<double> phase = std::polar(1.0, omega * t);
    return {phase * f, phase * (std::complex<double>(0.0, omega) * f + df)};
}

double rho(const FloquetSolution &sol, const MathieuParams &p, double t) {
    const double omega = secular_frequency(sol, p);
    const Envelope env = envelope_functions(sol, p, t);
    return 1.0 + (env.f_c * env.f_s_dot - env.f_s * env.f_c_dot) / omega;
}

double wronskian_ratio(const FloquetSolution &sol, const MathieuParams &) {
    // Period average of |F|^2 + Im(F* F') / omega, exact because the Wronskian is constant.
    if (sol.beta == 0.0) {
        fail(ErrorCode::DomainError, "zero characteristic exponent");
    }
    double acc = 0.0;
    for (int n = -sol.n_max; n <= sol.n_max; ++n) {
        const double c = sol.coeff(n);
        acc += c * c * (1.0 + 2.0 * n / sol.beta);
    }
    return acc;
}

double monodromy_trace(double a, double q, double ode_tol) {
    check_finite(a, q);
    using State = std::array<double, 4>;
    auto rhs = [a, q](const State &x, State &dx, double tau) {
        const double k = a - 2.0 * q * std::cos(2.0 * tau);
        dx[0] = x[1];
        dx[1] = -k * x[0];
        dx[2] = x[3];
        dx[3] = -k * x[2];
    };
    OdeOptions opt;
    opt.rel_tol = ode_tol;
    opt.abs_tol = ode_tol * 1e-2;
    opt.max_step = std::numbers::pi / 200.0;
    OdeStepper<State> stepper(opt);
    State x{1.0, 0.0, 0.0, 1.0};
    double tau = 0.0;
    stepper.advance(rhs, x, tau, std::numbers::pi);
    return x[0] + x[3];
}

double monodromy_exponent(double a, double q, double ode_tol) {
    const double tr = monodromy_trace(a, q, ode_tol);
    if (!(std::abs(tr) < 2.0)) {
        fail(ErrorCode::NotStable, "monodromy trace " + std::to_string(tr) + " at " + describe(a, q));
    }
    return std::acos(0.5 * tr) / std::numbers::pi;
}

bool is_stable(double a, double q, double rf_ratio) {
    if (!(rf_ratio > 0.0)) {
        fail(ErrorCode::DomainError, "rf_ratio must be positive");
    }
    return std::abs(monodromy_trace(a, q, 1e-12)) < 2.0;
}

double stability_edge_q(double a, double q_lo, double q_hi, double tol) {
    if (!is_stable(a, q_lo) || is_stable(a, q_hi)) {
        fail(ErrorCode::DomainError, "stability edge is not bracketed");
    }
    while (q_hi - q_lo > tol) {
        const double mid = 0.5 * (q_lo + q_hi);
        (is_stable(a, mid) ? q_lo : q_hi) = mid;
    }
    return 0.5 * (q_lo + q_hi);
}

}  // namespace fastgate
