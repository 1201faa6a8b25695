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

#include "fastgate/trap.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

// beta(a) with points below the region mapped to 0 and above it to 1, which
// keeps the function monotone for bracketing.
double clamped_beta(double a, double q) {
    try {
        return characteristic_exponent(a, q);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::NotStable) {
            throw;
        }
        // Below the lower edge the residual at beta = 0 is non-positive (imaginary exponent).
        return characteristic_residual(a, q, 0.0, 64) > 0.0 ? 1.0 : 0.0;
    }
}

ModeSpec build_mode(ModeLabel label, double a, const TrapParams &p) {
    ModeSpec m;
    m.label = label;
    m.params = MathieuParams{a, p.q_x, p.rf_ratio, p.rf_phase};
    m.floquet = solve_floquet(a, p.q_x);
    m.omega = secular_frequency(m.floquet, m.params);
    const double h = 1.0 / std::numbers::sqrt2;
    m.couplings = label == ModeLabel::CM ? std::array<double, 2>{h, h} : std::array<double, 2>{-h, h};
    m.eta = p.eta / std::sqrt(m.omega);
    m.wronskian = wronskian_ratio(m.floquet, m.params);
    return m;
}

void validate_params(const TrapParams &p) {
    if (!(p.rf_ratio > 0.0) || !std::isfinite(p.rf_ratio)) {
        fail(ErrorCode::DomainError, "rf_ratio must be positive and finite");
    }
    if (!(1.0 + p.chi > 0.0)) {
        fail(ErrorCode::DomainError, "chi must exceed -1");
    }
    if (!std::isfinite(p.q_x) || !std::isfinite(p.eta) || !std::isfinite(p.rf_phase)) {
        fail(ErrorCode::DomainError, "non-finite trap parameter");
    }
    if (!(p.eta >= 0.0)) {
        fail(ErrorCode::DomainError, "eta must be non-negative");
    }
}

}  // namespace

const char *mode_name(ModeLabel label) { return label == ModeLabel::CM ? "CM" : "BR"; }

double calibrate_a(double q, double rf_ratio, double omega_target) {
    const double beta_target = 2.0 * omega_target / rf_ratio;
    if (!(beta_target > 0.0 && beta_target < 1.0)) {
        fail(ErrorCode::NotStable, "target exponent outside (0, 1); increase rf_ratio");
    }
    if (q == 0.0) {
        return beta_target * beta_target;
    }
    auto g = [&](double a) { return clamped_beta(a, q) - beta_target; };
    // Lowest-order estimate, then widen geometrically until g changes sign.
    const double guess = beta_target * beta_target - 0.5 * q * q;
    double width = 1e-3 * (beta_target * beta_target + q * q) + 1e-12;
    double lo = guess - width, hi = guess + width;
    double glo = g(lo), ghi = g(hi);
    for (int i = 0; i < 200 && !(glo <= 0.0 && ghi >= 0.0); ++i) {
        width *= 2.0;
        if (glo > 0.0) {
            hi = lo;
            ghi = glo;
            lo = guess - width;
            glo = g(lo);
        } else {
            lo = hi;
            glo = ghi;
            hi = guess + width;
            ghi = g(hi);
        }
    }
    if (!(glo <= 0.0 && ghi >= 0.0)) {
        fail(ErrorCode::NotStable, "no stable a for the requested secular frequency");
    }
    if (glo == 0.0) {
        return lo;
    }
    if (ghi == 0.0) {
        return hi;
    }
    std::uintmax_t max_iter = 300;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
    auto [r0, r1] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, max_iter);
    if (max_iter >= 300) {
        fail(ErrorCode::CalibrationFailure, "root finding on a did not converge");
    }
    // Pick the endpoint with the smaller residual; both are within a few ulps.
    const double a = std::abs(g(r0)) <= std::abs(g(r1)) ? r0 : r1;
    if (!(std::abs(g(a)) < 1e-12)) {
        fail(ErrorCode::CalibrationFailure, "calibrated exponent misses target");
    }
    return a;
}

TrapConfig assemble_trap(const TrapParams &params, double a_cm, double a_br, double tol) {
    validate_params(params);
    TrapConfig cfg;
    cfg.params = params;
    cfg.a_cm = a_cm;
    cfg.a_br = a_br;
    cfg.modes[0] = build_mode(ModeLabel::CM, a_cm, params);
    cfg.modes[1] = build_mode(ModeLabel::BR, a_br, params);
    const double targets[2] = {1.0, 1.0 + params.chi};
    for (int k = 0; k < 2; ++k) {
        if (!(std::abs(cfg.modes[k].omega - targets[k]) < tol)) {
            std::ostringstream os;
            os.precision(17);
            os << mode_name(cfg.modes[k].label) << " frequency " << cfg.modes[k].omega << " differs from target "
               << targets[k];
            fail(ErrorCode::CalibrationFailure, os.str());
        }
    }
    return cfg;
}

TrapConfig calibrate(const TrapParams &params) {
    validate_params(params);
    const double a_cm = calibrate_a(params.q_x, params.rf_ratio, 1.0);
    const double a_br = calibrate_a(params.q_x, params.rf_ratio, 1.0 + params.chi);
    return assemble_trap(params, a_cm, a_br);
}

TrapConfig TrapConfig::with_rf_phase(double rf_phase) const {
    TrapConfig out = *this;
    out.params.rf_phase = rf_phase;
    for (auto &m : out.modes) {
        m.params.rf_phase = rf_phase;
    }
    return out;
}

CoulombShift coulomb_mode_shift(double a_x, double gamma_norm) { return {a_x, a_x - gamma_norm}; }

double coulomb_gamma_norm(double rf_ratio, double d_gap) {
    if (!(d_gap > 0.0)) {
        fail(ErrorCode::InvalidSpacing, "ion spacing must be positive");
    }
    return 8.0 / (rf_ratio * rf_ratio * d_gap * d_gap * d_gap);
}

HessianModes hessian_eigenvalues(double d_gap, const MathieuParams &p) {
    if (!(d_gap > 0.0)) {
        fail(ErrorCode::InvalidSpacing, "ion spacing must be positive");
    }
    const double w2 = 0.25 * p.rf_ratio * p.rf_ratio;
    const HillCoefficient cm{w2 * p.a, -2.0 * w2 * p.q};
    // The transverse Coulomb curvature of a pair is -2 / d^3 on the relative coordinate.
    const HillCoefficient br{cm.offset - 2.0 / (d_gap * d_gap * d_gap), cm.amplitude};
    const double h = 1.0 / std::numbers::sqrt2;
    return {cm, br, {{{h, h}, {-h, h}}}};
}

double mean_occupation(double omega, double temperature) {
    if (!(omega > 0.0) || !(temperature >= 0.0)) {
        fail(ErrorCode::DomainError, "mean_occupation needs omega > 0 and temperature >= 0");
    }
    if (temperature == 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(omega / temperature);
}

}  // namespace fastgate
