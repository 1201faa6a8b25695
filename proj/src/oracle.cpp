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

#include "fastgate/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fastgate/errors.hpp"
#include "fastgate/ode.hpp"

namespace fastgate {

namespace {

using State = std::array<double, 3>;  // X, Y, action

struct Event {
    double t;
    int kind;  // 0 = kick, 1 = sample; kicks sort first at equal times
    size_t index;
};

struct UnitKick {
    double t;
    double dy;  // momentum jump for s = 1
};

BranchPath integrate_branch(const ModeSpec &mode, const std::vector<UnitKick> &kicks, const std::vector<Event> &events,
                            size_t n_samples, double s, PhasePoint start, double gate_time, double ode_tol,
                            long &steps) {
    const double w = mode.omega;
    const double w2 = 0.25 * mode.params.rf_ratio * mode.params.rf_ratio;
    const double a = mode.params.a, q = mode.params.q;
    const double rf = mode.params.rf_ratio, phi = mode.params.rf_phase;
    auto rhs = [=](const State &x, State &dx, double t) {
        const double lambda = w2 * (a - 2.0 * q * std::cos(rf * t + phi));
        dx[0] = w * x[1];
        dx[1] = -lambda * x[0] / w;
        dx[2] = 0.5 * (w * x[1] * x[1] - lambda * x[0] * x[0] / w);
    };
    OdeOptions opt;
    opt.rel_tol = ode_tol;
    opt.abs_tol = ode_tol * 1e-2;
    opt.max_step = (2.0 * std::numbers::pi / rf) / 50.0;
    opt.initial_step = opt.max_step / 8.0;
    OdeStepper<State> stepper(opt);

    BranchPath path;
    path.s = s;
    path.start = start;
    path.samples.resize(n_samples);
    path.sample_action.resize(n_samples);
    path.sample_kick_work.resize(n_samples);
    State x{start.x, start.y, 0.0};
    double t = 0.0;
    double seg_start_xy = x[0] * x[1];
    long local_steps = 0;
    auto advance = [&](double t_end) {
        if (t_end > t) {
            stepper.advance(rhs, x, t, t_end);
            ++local_steps;
        }
    };
    for (const Event &ev : events) {
        advance(ev.t);
        if (ev.kind == 0) {
            const double dy = s * kicks[ev.index].dy;
            path.action_boundary += 0.5 * (x[0] * x[1] - seg_start_xy);
            path.kick_work += x[0] * dy;
            path.jump_total += std::abs(dy);
            x[1] += dy;
            seg_start_xy = x[0] * x[1];
        } else {
            path.samples[ev.index] = {x[0], x[1]};
            path.sample_action[ev.index] = x[2];
            path.sample_kick_work[ev.index] = path.kick_work;
        }
    }
    advance(gate_time);
    path.action_boundary += 0.5 * (x[0] * x[1] - seg_start_xy);
    path.action_quadrature = x[2];
    path.end = {x[0], x[1]};
    steps += local_steps;
    return path;
}

// Phase of a branch relative to nothing: S + sum X_j dY_j - [X Y]/2.
double branch_phase(const BranchPath &p, double action) {
    return action + p.kick_work - 0.5 * (p.end.x * p.end.y - p.start.x * p.start.y);
}

double sample_phase(const BranchPath &p, size_t k) {
    const PhasePoint &xy = p.samples[k];
    return p.sample_action[k] + p.sample_kick_work[k] - 0.5 * (xy.x * xy.y - p.start.x * p.start.y);
}

}  // namespace

Trajectory integrate(const KickSequence &seq, const TrapConfig &trap, const OracleOptions &options) {
    seq.validate();
    if (!(options.ode_tol > 0.0)) {
        fail(ErrorCode::DomainError, "ode_tol must be positive");
    }
    const auto expanded = seq.expanded();
    if (!expanded.empty() && expanded.front().t < 0.0) {
        fail(ErrorCode::DomainError, "oracle integrates from t = 0; kicks must not precede it");
    }
    for (double ts : options.sample_times) {
        if (!(ts >= 0.0 && ts <= seq.gate_time)) {
            fail(ErrorCode::DomainError, "sample time outside [0, gate_time]");
        }
    }
    std::vector<Event> events;
    for (size_t i = 0; i < expanded.size(); ++i) {
        events.push_back({expanded[i].t, 0, i});
    }
    for (size_t i = 0; i < options.sample_times.size(); ++i) {
        events.push_back({options.sample_times[i], 1, i});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event &l, const Event &r) {
        return l.t < r.t || (l.t == r.t && l.kind < r.kind);
    });

    Trajectory traj;
    traj.gate_time = seq.gate_time;
    traj.times = options.sample_times;
    for (int m = 0; m < 2; ++m) {
        const ModeSpec &mode = trap.modes[m];
        std::vector<UnitKick> kicks;
        const double scale = 2.0 * std::numbers::sqrt2 * mode.eta;
        for (const auto &k : expanded) {
            kicks.push_back({k.t, scale * k.z});
        }
        const PhasePoint start = options.initial[m];
        const size_t ns = options.sample_times.size();
        ModePaths &paths = traj.modes[m];
        paths.label = mode.label;
        paths.free = integrate_branch(mode, kicks, events, ns, 0.0, start, seq.gate_time, options.ode_tol, traj.steps);
        paths.plus = integrate_branch(mode, kicks, events, ns, std::numbers::sqrt2, start, seq.gate_time,
                                      options.ode_tol, traj.steps);
        paths.minus = integrate_branch(mode, kicks, events, ns, -std::numbers::sqrt2, start, seq.gate_time,
                                       options.ode_tol, traj.steps);
    }
    return traj;
}

ActionPhases action_phase(const Trajectory &traj, const TrapConfig &trap, double route_tol) {
    ActionPhases out;
    for (int m = 0; m < 2; ++m) {
        const ModePaths &p = traj.modes[m];
        const BranchPath *branches[3] = {&p.free, &p.plus, &p.minus};
        double quad[3], bound[3];
        for (int b = 0; b < 3; ++b) {
            quad[b] = branch_phase(*branches[b], branches[b]->action_quadrature);
            bound[b] = branch_phase(*branches[b], branches[b]->action_boundary);
            const double gap = std::abs(quad[b] - bound[b]);
            out.route_gap = std::max(out.route_gap, gap);
            if (gap > route_tol * std::max(1.0, std::abs(branches[b]->action_quadrature))) {
                std::ostringstream os;
                os.precision(6);
                os << mode_name(p.label) << " branch " << b << ": quadrature and boundary phases differ by " << gap;
                fail(ErrorCode::RouteMismatch, os.str());
            }
        }
        out.branch[m] = {quad[1] - quad[0], quad[2] - quad[0]};
        const ModeSpec &mode = trap.modes[m];
        out.theta += 0.5 * mode.couplings[0] * mode.couplings[1] * (out.branch[m][0] + out.branch[m][1]);
    }
    return out;
}

GateMetrics oracle_metrics(const KickSequence &seq, const TrapConfig &trap, const ThermalState &thermal,
                           const OracleOptions &options) {
    const Trajectory traj = integrate(seq, trap, options);
    const ActionPhases phases = action_phase(traj, trap, options.route_tol);
    GateMetrics m;
    m.theta = phases.theta;
    m.phase_error = std::abs(m.theta) - 0.25 * std::numbers::pi;
    const double denom = 2.0 * std::numbers::sqrt2;
    for (int k = 0; k < 2; ++k) {
        const ModePaths &p = traj.modes[k];
        m.displacements[k] = {(p.plus.end.x - p.minus.end.x) / denom, (p.plus.end.y - p.minus.end.y) / denom};
    }
    m.infidelity = infidelity(m.phase_error, m.displacements, trap, thermal);
    m.n_sdk = seq.n_sdk();
    return m;
}

std::vector<double> running_phase(const Trajectory &traj, const TrapConfig &trap) {
    std::vector<double> theta(traj.times.size(), 0.0);
    for (size_t k = 0; k < traj.times.size(); ++k) {
        for (int m = 0; m < 2; ++m) {
            const ModePaths &p = traj.modes[m];
            const double free = sample_phase(p.free, k);
            const double g = (sample_phase(p.plus, k) - free) + (sample_phase(p.minus, k) - free);
            theta[k] += 0.5 * trap.modes[m].couplings[0] * trap.modes[m].couplings[1] * g;
        }
    }
    return theta;
}

}  // namespace fastgate
