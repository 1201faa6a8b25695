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

#include "fastgate/gatekernel.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "fastgate/errors.hpp"

namespace fastgate {

namespace {

constexpr double kSpacingSlack = 1e-12;

// Both mu and kappa from envelopes at t and t_prime.
struct PairTensors {
    TensorPair mu;
    TensorPair kappa;
};

PairTensors pair_tensors(const ModeSpec &mode, const Envelope &e, const Envelope &ep) {
    const double mu_c = e.f_c * ep.f_c + e.f_s * ep.f_s;
    const double mu_s = ep.f_c * e.f_s - e.f_c * ep.f_s;
    const double dmu_c = e.f_c_dot * ep.f_c + e.f_s_dot * ep.f_s;
    const double dmu_s = ep.f_c * e.f_s_dot - e.f_c_dot * ep.f_s;
    return {{mu_c, mu_s}, {dmu_s / mode.omega + mu_c, dmu_c / mode.omega - mu_s}};
}

double kick_scale(const ModeSpec &mode) { return 2.0 * std::numbers::sqrt2 * mode.eta; }

}  // namespace

double KickSequence::min_spacing() const {
    if (!rep_rate) {
        return 0.0;
    }
    return 2.0 * std::numbers::pi / *rep_rate;
}

int KickSequence::n_sdk() const {
    int n = 0;
    for (const auto &k : kicks) {
        n += std::abs(k.z);
    }
    return n;
}

std::vector<KickGroup> KickSequence::expanded() const {
    std::vector<KickGroup> out;
    const double dt = min_spacing();
    for (const auto &k : kicks) {
        if (k.z == 0) {
            continue;
        }
        if (!rep_rate) {
            out.push_back(k);
            continue;
        }
        const int sign = k.z > 0 ? 1 : -1;
        for (int i = 0; i < std::abs(k.z); ++i) {
            out.push_back({k.t + i * dt, sign});
        }
    }
    return out;
}

void KickSequence::validate() const {
    if (!std::isfinite(gate_time) || gate_time < 0.0) {
        fail(ErrorCode::DomainError, "gate_time must be finite and non-negative");
    }
    if (rep_rate && !(*rep_rate > 0.0 && std::isfinite(*rep_rate))) {
        fail(ErrorCode::DomainError, "rep_rate must be positive and finite");
    }
    for (size_t i = 0; i < kicks.size(); ++i) {
        if (!std::isfinite(kicks[i].t)) {
            fail(ErrorCode::DomainError, "non-finite kick time");
        }
        if (i > 0 && !(kicks[i].t > kicks[i - 1].t)) {
            fail(ErrorCode::InvalidSpacing, "kick times must be strictly increasing");
        }
    }
    const auto unit = expanded();
    const double dt = min_spacing();
    for (size_t i = 1; i < unit.size(); ++i) {
        if (unit[i].t - unit[i - 1].t < dt - kSpacingSlack) {
            std::ostringstream os;
            os.precision(17);
            os << "kicks at " << unit[i - 1].t << " and " << unit[i].t << " are closer than " << dt;
            fail(ErrorCode::InvalidSpacing, os.str());
        }
    }
    if (!unit.empty() && unit.back().t > gate_time + kSpacingSlack) {
        fail(ErrorCode::InvalidSpacing, "last kick after gate_time");
    }
}

TensorPair mu_tensors(const ModeSpec &mode, double t, double t_prime) {
    const Envelope e = envelope_functions(mode.floquet, mode.params, t);
    const Envelope ep = envelope_functions(mode.floquet, mode.params, t_prime);
    return pair_tensors(mode, e, ep).mu;
}

TensorPair kappa_tensors(const ModeSpec &mode, double t, double t_prime) {
    const Envelope e = envelope_functions(mode.floquet, mode.params, t);
    const Envelope ep = envelope_functions(mode.floquet, mode.params, t_prime);
    return pair_tensors(mode, e, ep).kappa;
}

double position_response(const ModeSpec &mode, double t, double t_prime) {
    const TensorPair mu = mu_tensors(mode, t, t_prime);
    const double wd = mode.omega * (t - t_prime);
    return (std::sin(wd) * mu.c + std::cos(wd) * mu.s) / mode.wronskian;
}

double momentum_response(const ModeSpec &mode, double t, double t_prime) {
    const TensorPair k = kappa_tensors(mode, t, t_prime);
    const double wd = mode.omega * (t - t_prime);
    return (std::sin(wd) * k.s + std::cos(wd) * k.c) / mode.wronskian;
}

double entangling_phase(const KickSequence &seq, const TrapConfig &trap) {
    const auto kicks = seq.expanded();
    double theta = 0.0;
    for (const ModeSpec &mode : trap.modes) {
        std::vector<Envelope> env;
        env.reserve(kicks.size());
        for (const auto &k : kicks) {
            env.push_back(envelope_functions(mode.floquet, mode.params, k.t));
        }
        // Ordered pairs m < n over every earlier kick.
        double acc = 0.0;
        for (size_t n = 1; n < kicks.size(); ++n) {
            double inner = 0.0;
            for (size_t m = 0; m < n; ++m) {
                const TensorPair mu = pair_tensors(mode, env[n], env[m]).mu;
                const double wd = mode.omega * (kicks[n].t - kicks[m].t);
                inner += kicks[m].z * (std::sin(wd) * mu.c + std::cos(wd) * mu.s);
            }
            acc += kicks[n].z * inner;
        }
        const double k = kick_scale(mode);
        theta += k * k * mode.couplings[0] * mode.couplings[1] * acc / mode.wronskian;
    }
    return theta;
}

ModeDisplacement residual_displacement(const KickSequence &seq, const ModeSpec &mode) {
    const auto kicks = seq.expanded();
    const Envelope eg = envelope_functions(mode.floquet, mode.params, seq.gate_time);
    double dx = 0.0, dy = 0.0;
    for (const auto &k : kicks) {
        const Envelope ek = envelope_functions(mode.floquet, mode.params, k.t);
        const PairTensors pt = pair_tensors(mode, eg, ek);
        const double wd = mode.omega * (seq.gate_time - k.t);
        const double sn = std::sin(wd), cs = std::cos(wd);
        dx += k.z * (sn * pt.mu.c + cs * pt.mu.s);
        dy += k.z * (sn * pt.kappa.s + cs * pt.kappa.c);
    }
    const double scale = kick_scale(mode) / mode.wronskian;
    return {scale * dx, scale * dy};
}

double infidelity(double phase_error, const std::array<ModeDisplacement, 2> &displacements, const TrapConfig &trap,
                  const ThermalState &thermal) {
    double motional = 0.0;
    for (int a = 0; a < 2; ++a) {
        const ModeSpec &mode = trap.modes[a];
        const double b2 = mode.couplings[0] * mode.couplings[0] + mode.couplings[1] * mode.couplings[1];
        const auto &d = displacements[a];
        motional += (0.5 + thermal.nbar(mode.label)) * b2 * (d.dx * d.dx + d.dy * d.dy);
    }
    return (2.0 / 3.0) * phase_error * phase_error + (4.0 / 3.0) * motional;
}

GateMetrics evaluate(const KickSequence &seq, const TrapConfig &trap, const ThermalState &thermal) {
    seq.validate();
    if (thermal.nbar_cm < 0.0 || thermal.nbar_br < 0.0) {
        fail(ErrorCode::DomainError, "occupations must be non-negative");
    }
    GateMetrics m;
    m.theta = entangling_phase(seq, trap);
    m.phase_error = std::abs(m.theta) - 0.25 * std::numbers::pi;
    for (int a = 0; a < 2; ++a) {
        m.displacements[a] = residual_displacement(seq, trap.modes[a]);
    }
    m.infidelity = infidelity(m.phase_error, m.displacements, trap, thermal);
    m.n_sdk = seq.n_sdk();
    return m;
}

double baseline_infidelity() {
    const double p = 0.25 * std::numbers::pi;
    return (2.0 / 3.0) * p * p;
}

}  // namespace fastgate
