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

#include "fastgate/gate_model.hpp"

#include <cmath>
#include <numbers>

namespace fastgate {

namespace {

// Im(a * conj(b)).
inline double im_conj(std::complex<double> a, std::complex<double> b) { return a.imag() * b.real() - a.real() * b.imag(); }

// Im(a * b).
inline double im_mul(std::complex<double> a, std::complex<double> b) { return a.real() * b.imag() + a.imag() * b.real(); }

}  // namespace

GateModel::GateModel(const TrapConfig &trap, const ThermalState &thermal, double gate_time) : gate_time_(gate_time) {
    for (int a = 0; a < 2; ++a) {
        const ModeSpec &m = trap.modes[a];
        const double k = 2.0 * std::numbers::sqrt2 * m.eta;
        const ModeValue g = mode_function(m.floquet, m.params, gate_time);
        modes_[a] = {&m,
                     k * k * m.couplings[0] * m.couplings[1] / m.wronskian,
                     k / m.wronskian,
                     (0.5 + thermal.nbar(m.label)) * (m.couplings[0] * m.couplings[0] + m.couplings[1] * m.couplings[1]),
                     g.u,
                     g.u_dot / m.omega};
    }
}

GateModel::Basis GateModel::basis(const std::vector<double> &t) const {
    Basis b;
    for (int a = 0; a < 2; ++a) {
        const ModeSpec &m = *modes_[a].mode;
        b.u[a].resize(t.size());
        b.u_dot[a].resize(t.size());
        for (size_t j = 0; j < t.size(); ++j) {
            const ModeValue v = mode_function(m.floquet, m.params, t[j]);
            b.u[a][j] = v.u;
            b.u_dot[a][j] = v.u_dot;
        }
    }
    return b;
}

GateModel::Parts GateModel::evaluate(const std::vector<double> &t, const std::vector<double> &z,
                                     std::vector<double> *grad_z, std::vector<double> *grad_t) const {
    return evaluate(basis(t), z, grad_z, grad_t);
}

GateModel::Parts GateModel::evaluate(const Basis &b, const std::vector<double> &z, std::vector<double> *grad_z,
                                     std::vector<double> *grad_t) const {
    const size_t n = z.size();
    Parts out;
    std::array<double, 2> theta_a{};
    std::array<std::complex<double>, 2> sum_conj{};  // sum_j z_j u_j*
    for (int a = 0; a < 2; ++a) {
        const auto &u = b.u[a];
        std::complex<double> prefix = 0.0;
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) {
            acc += z[j] * im_mul(u[j], prefix);
            prefix += z[j] * std::conj(u[j]);
        }
        theta_a[a] = modes_[a].phase_scale * acc;
        sum_conj[a] = prefix;
        out.theta += theta_a[a];
        const double dx = modes_[a].disp_scale * im_mul(modes_[a].u_g, prefix);
        const double dy = modes_[a].disp_scale * im_mul(modes_[a].v_g, prefix);
        out.displacements[a] = {dx, dy};
    }
    const double phase_error = std::abs(out.theta) - 0.25 * std::numbers::pi;
    double motional = 0.0;
    for (int a = 0; a < 2; ++a) {
        const auto &d = out.displacements[a];
        motional += modes_[a].weight * (d.dx * d.dx + d.dy * d.dy);
    }
    out.cost = (2.0 / 3.0) * phase_error * phase_error + (4.0 / 3.0) * motional;
    if (!grad_z && !grad_t) {
        return out;
    }
    const double d_theta = (4.0 / 3.0) * phase_error * (out.theta < 0.0 ? -1.0 : 1.0);
    if (grad_z) {
        grad_z->assign(n, 0.0);
    }
    if (grad_t) {
        grad_t->assign(n, 0.0);
    }
    for (int a = 0; a < 2; ++a) {
        const ModeConst &mc = modes_[a];
        const auto &u = b.u[a];
        const auto &ud = b.u_dot[a];
        const auto &d = out.displacements[a];
        const double c_dx = (8.0 / 3.0) * mc.weight * d.dx * mc.disp_scale;
        const double c_dy = (8.0 / 3.0) * mc.weight * d.dy * mc.disp_scale;
        const double c_th = d_theta * mc.phase_scale;
        // suffix Q_{j+1} = sum_{m>j} z_m u_m, prefix P_{j-1} = sum_{m<j} z_m u_m*.
        std::complex<double> suffix = 0.0;
        for (size_t j = 0; j < n; ++j) {
            suffix += z[j] * u[j];
        }
        std::complex<double> prefix = 0.0;
        for (size_t j = 0; j < n; ++j) {
            suffix -= z[j] * u[j];
            if (grad_z) {
                const double dth = im_mul(u[j], prefix) + im_conj(suffix, u[j]);
                const double ddx = im_conj(mc.u_g, u[j]);
                const double ddy = im_conj(mc.v_g, u[j]);
                (*grad_z)[j] += c_th * dth + c_dx * ddx + c_dy * ddy;
            }
            if (grad_t) {
                const double dth = im_mul(ud[j], prefix) + im_conj(suffix, ud[j]);
                const double ddx = im_conj(mc.u_g, ud[j]);
                const double ddy = im_conj(mc.v_g, ud[j]);
                (*grad_t)[j] += z[j] * (c_th * dth + c_dx * ddx + c_dy * ddy);
            }
            prefix += z[j] * std::conj(u[j]);
        }
    }
    return out;
}

}  // namespace fastgate
