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

#include "fastgate/gpg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "fastgate/gate_model.hpp"
#include "fastgate/parallel.hpp"
#include "lbfgs.hpp"

namespace fastgate {

namespace {

constexpr int kMaxDefaultGroups = 400;
constexpr double kMergeGap = 1e-12;

double integer_cost(const GateModel &model, const GateModel::Basis &basis, const std::vector<int> &z) {
    std::vector<double> zd(z.begin(), z.end());
    return model.evaluate(basis, zd).cost;
}

// Round, then one greedy +-1 pass over coordinates.
std::vector<Candidate> integerize(const GateModel &model, const GateModel::Basis &basis,
                                  const std::vector<double> &z_cont, int z_bound, int start) {
    std::vector<int> z(z_cont.size());
    for (size_t i = 0; i < z.size(); ++i) {
        z[i] = std::clamp(static_cast<int>(std::lround(z_cont[i])), -z_bound, z_bound);
    }
    Candidate rounded{z, integer_cost(model, basis, z), start};
    double best = rounded.cost;
    for (size_t i = 0; i < z.size(); ++i) {
        const int orig = z[i];
        int keep = orig;
        for (int d : {-1, 1}) {
            const int trial = orig + d;
            if (std::abs(trial) > z_bound) {
                continue;
            }
            z[i] = trial;
            const double c = integer_cost(model, basis, z);
            if (c < best) {
                best = c;
                keep = trial;
            }
        }
        z[i] = keep;
    }
    Candidate greedy{z, best, start};
    if (greedy.z == rounded.z) {
        return {greedy};
    }
    return {greedy, rounded};
}

// Continuous cost over the free coordinates of z, with z = b tanh(w / b) keeping
// each free coordinate inside the bound. Fixed coordinates hold integers.
class RelaxedObjective {
   public:
    RelaxedObjective(const GateModel &model, const GateModel::Basis &basis, std::vector<double> &z,
                     const std::vector<size_t> &free, double bound, double sparsity)
        : model_(model), basis_(basis), z_(z), free_(free), bound_(bound), sparsity_(sparsity) {}

    double operator()(const std::vector<double> &w, std::vector<double> &grad) {
        for (size_t k = 0; k < free_.size(); ++k) {
            z_[free_[k]] = bound_ * std::tanh(w[k] / bound_);
        }
        double cost = model_.evaluate(basis_, z_, &full_).cost;
        grad.assign(free_.size(), 0.0);
        for (size_t k = 0; k < free_.size(); ++k) {
            const double zi = z_[free_[k]];
            double g = full_[free_[k]];
            if (sparsity_ > 0.0) {
                const double r = std::sqrt(zi * zi + 1e-2);
                cost += sparsity_ * r;
                g += sparsity_ * zi / r;
            }
            const double th = zi / bound_;
            grad[k] = g * (1.0 - th * th);
        }
        return cost;
    }

   private:
    const GateModel &model_;
    const GateModel::Basis &basis_;
    std::vector<double> &z_;
    const std::vector<size_t> &free_;
    double bound_;
    double sparsity_;
    std::vector<double> full_;
};

// Pre-image of z under z = b tanh(w / b), kept finite at the bound.
double unbounded(double z, double bound) {
    const double r = std::clamp(z / bound, -1.0 + 1e-9, 1.0 - 1e-9);
    return bound * std::atanh(r);
}

std::vector<Candidate> run_start(const TrapConfig &trap, const SearchConfig &cfg, int n_groups, int start) {
    std::mt19937_64 rng = make_stream(cfg.seed, static_cast<uint64_t>(start));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const GateModel model(trap, cfg.thermal, cfg.gate_time);
    const auto times = uniform_timings(n_groups, cfg.gate_time);
    const GateModel::Basis basis = model.basis(times);
    const double bound = static_cast<double>(cfg.z_bound) + 0.49;

    const double init_scale = 0.6 * std::exp(0.7 * uniform(rng));
    std::vector<double> z(n_groups);
    for (auto &zi : z) {
        zi = init_scale * normal(rng);
    }
    std::vector<size_t> free(n_groups);
    for (int i = 0; i < n_groups; ++i) {
        free[i] = static_cast<size_t>(i);
    }
    RelaxedObjective objective(model, basis, z, free, bound, cfg.sparsity_weight);
    auto relax = [&](int iters) {
        std::vector<double> w(free.size());
        for (size_t k = 0; k < free.size(); ++k) {
            w[k] = unbounded(z[free[k]], bound);
        }
        detail::lbfgs_minimize(objective, w, iters);
        std::vector<double> g;
        objective(w, g);  // leaves z at the optimum
    };
    relax(cfg.stage1_iters);

    // Progressive rounding: fix the free coordinates nearest to integers a
    // fraction at a time and re-relax the rest, so later coordinates absorb the
    // rounding error of earlier ones.
    const int polish = std::max(1, cfg.stage1_iters / 4);
    while (!free.empty()) {
        std::stable_sort(free.begin(), free.end(), [&](size_t a, size_t b) {
            return std::abs(z[a] - std::round(z[a])) < std::abs(z[b] - std::round(z[b]));
        });
        const size_t fix = std::max<size_t>(1, (free.size() + 9) / 10);
        for (size_t k = 0; k < fix; ++k) {
            z[free[k]] = std::clamp(std::round(z[free[k]]), -static_cast<double>(cfg.z_bound),
                                    static_cast<double>(cfg.z_bound));
        }
        free.erase(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(fix));
        std::sort(free.begin(), free.end());
        if (!free.empty()) {
            relax(polish);
        }
    }

    auto cands = integerize(model, basis, z, cfg.z_bound, start);
    std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) { return a.cost < b.cost; });
    if (static_cast<int>(cands.size()) > cfg.per_start_candidates) {
        cands.resize(cfg.per_start_candidates);
    }
    return cands;
}

// Pool-adjacent-violators projection onto s_1 <= ... <= s_n, then clip to [lo, hi].
void project_monotone(std::vector<double> &s, double lo, double hi) {
    std::vector<double> level;
    std::vector<size_t> count;
    for (double v : s) {
        level.push_back(v);
        count.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const size_t c = count.back() + count[count.size() - 2];
            const double l = (level.back() * count.back() + level[level.size() - 2] * count[count.size() - 2]) / c;
            level.pop_back();
            count.pop_back();
            level.back() = l;
            count.back() = c;
        }
    }
    size_t k = 0;
    for (size_t b = 0; b < level.size(); ++b) {
        const double v = std::clamp(level[b], lo, hi);
        for (size_t i = 0; i < count[b]; ++i) {
            s[k++] = v;
        }
    }
}

// Group layout in shifted coordinates s_i = T_i - offset_i.
struct GroupLayout {
    std::vector<int> z;
    std::vector<double> offset;
    double spacing = 0.0;
    double upper = 0.0;

    std::vector<double> group_times(const std::vector<double> &s) const {
        std::vector<double> t(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            t[i] = s[i] + offset[i];
        }
        return t;
    }
};

class TimingObjective {
   public:
    TimingObjective(const GateModel &model, const GroupLayout &layout) : model_(model), layout_(layout) {
        for (size_t i = 0; i < layout.z.size(); ++i) {
            const int n = layout.spacing > 0.0 ? std::abs(layout.z[i]) : 1;
            const double w = layout.spacing > 0.0 ? (layout.z[i] > 0 ? 1.0 : -1.0) : layout.z[i];
            for (int k = 0; k < n; ++k) {
                owner_.push_back(i);
                step_.push_back(k);
                weight_.push_back(w);
            }
        }
    }

    double operator()(const std::vector<double> &s, std::vector<double> *grad) const {
        const auto groups = layout_.group_times(s);
        std::vector<double> t(owner_.size());
        for (size_t j = 0; j < t.size(); ++j) {
            t[j] = groups[owner_[j]] + step_[j] * layout_.spacing;
        }
        std::vector<double> gt;
        const auto parts = model_.evaluate(t, weight_, nullptr, grad ? &gt : nullptr);
        if (grad) {
            grad->assign(s.size(), 0.0);
            for (size_t j = 0; j < gt.size(); ++j) {
                (*grad)[owner_[j]] += gt[j];
            }
        }
        return parts.cost;
    }

   private:
    const GateModel &model_;
    const GroupLayout &layout_;
    std::vector<size_t> owner_;
    std::vector<int> step_;
    std::vector<double> weight_;
};

// Nonmonotone spectral projected gradient. Returns the best point seen.
std::vector<double> spg_minimize(const TimingObjective &f, std::vector<double> x, double lo, double hi, int max_iter) {
    const size_t n = x.size();
    project_monotone(x, lo, hi);
    std::vector<double> g, g_new, x_new(n), d(n);
    double fx = f(x, &g);
    std::vector<double> best_x = x;
    double best_f = fx;
    std::deque<double> history{fx};
    double alpha = 1e-3;
    int stall = 0;
    for (int it = 0; it < max_iter && n > 0; ++it) {
        for (size_t i = 0; i < n; ++i) {
            d[i] = x[i] - alpha * g[i];
        }
        project_monotone(d, lo, hi);
        double dnorm = 0.0, gd = 0.0;
        for (size_t i = 0; i < n; ++i) {
            d[i] -= x[i];
            dnorm = std::max(dnorm, std::abs(d[i]));
            gd += g[i] * d[i];
        }
        if (dnorm < 1e-15 || gd >= 0.0) {
            break;
        }
        const double f_ref = *std::max_element(history.begin(), history.end());
        double lambda = 1.0, f_new = 0.0;
        int tries = 0;
        for (;; ++tries) {
            for (size_t i = 0; i < n; ++i) {
                x_new[i] = x[i] + lambda * d[i];
            }
            f_new = f(x_new, &g_new);
            if (f_new <= f_ref + 1e-4 * lambda * gd || tries >= 40) {
                break;
            }
            lambda *= 0.5;
        }
        double ss = 0.0, sy = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double si = x_new[i] - x[i];
            ss += si * si;
            sy += si * (g_new[i] - g[i]);
        }
        alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e6) : 1e6;
        const double improvement = best_f - f_new;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        history.push_back(fx);
        if (history.size() > 10) {
            history.pop_front();
        }
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        stall = improvement < 1e-14 ? stall + 1 : 0;
        if (stall >= 25 || best_f < 1e-15) {
            break;
        }
    }
    return best_x;
}

KickSequence build_sequence(const GroupLayout &layout, const std::vector<double> &s, const SearchConfig &cfg) {
    const auto t = layout.group_times(s);
    KickSequence seq;
    seq.gate_time = cfg.gate_time;
    seq.rep_rate = cfg.rep_rate;
    for (size_t i = 0; i < t.size(); ++i) {
        const double ti = std::clamp(t[i], 0.0, cfg.gate_time);
        if (!seq.kicks.empty() && ti - seq.kicks.back().t < kMergeGap) {
            seq.kicks.back().z += layout.z[i];
            if (seq.kicks.back().z == 0) {
                seq.kicks.pop_back();
            }
            continue;
        }
        seq.kicks.push_back({ti, layout.z[i]});
    }
    return seq;
}

}  // namespace

int SearchConfig::resolved_groups(double rf_ratio) const {
    if (n_groups > 0) {
        return n_groups;
    }
    const int m = static_cast<int>(std::ceil(4.0 * gate_time * rf_ratio / (2.0 * std::numbers::pi) - 1e-9));
    return std::clamp(m, 2, kMaxDefaultGroups);
}

void SearchConfig::validate() const {
    if (n_groups != 0 && n_groups < 2) {
        fail(ErrorCode::ConfigError, "n_groups must be at least 2");
    }
    if (!(gate_time > 0.0) || !std::isfinite(gate_time)) {
        fail(ErrorCode::ConfigError, "gate_time must be positive");
    }
    if (rep_rate && !(*rep_rate > 0.0)) {
        fail(ErrorCode::ConfigError, "rep_rate must be positive");
    }
    if (multistarts < 1 || stage1_iters < 1 || stage2_iters < 1) {
        fail(ErrorCode::ConfigError, "budgets must be at least 1");
    }
    if (z_bound < 1) {
        fail(ErrorCode::ConfigError, "z_bound must be at least 1");
    }
    if (top_k < 1 || per_start_candidates < 1) {
        fail(ErrorCode::ConfigError, "candidate counts must be at least 1");
    }
    if (!(fidelity_target > 0.0 && fidelity_target <= 1.0) || !(floor_fidelity >= 0.0 && floor_fidelity <= 1.0)) {
        fail(ErrorCode::ConfigError, "fidelity thresholds must lie in [0, 1]");
    }
    if (thermal.nbar_cm < 0.0 || thermal.nbar_br < 0.0) {
        fail(ErrorCode::ConfigError, "occupations must be non-negative");
    }
}

std::vector<double> uniform_timings(int n_groups, double gate_time) {
    std::vector<double> t(n_groups);
    for (int i = 0; i < n_groups; ++i) {
        t[i] = gate_time * i / (n_groups - 1);
    }
    return t;
}

std::vector<std::vector<Candidate>> stage1_candidates(const TrapConfig &trap, const SearchConfig &cfg) {
    cfg.validate();
    const int m = cfg.resolved_groups(trap.rf_ratio());
    std::vector<std::vector<Candidate>> per_start(cfg.multistarts);
    parallel_for(per_start.size(), cfg.threads,
                 [&](size_t s) { per_start[s] = run_start(trap, cfg, m, static_cast<int>(s)); });
    return per_start;
}

std::vector<Candidate> stage1_search(const TrapConfig &trap, const SearchConfig &cfg) {
    const auto per_start = stage1_candidates(trap, cfg);
    std::vector<Candidate> all;
    std::set<std::vector<int>> seen;
    for (const auto &list : per_start) {
        for (const auto &c : list) {
            if (c.cost < baseline_infidelity() && seen.insert(c.z).second) {
                all.push_back(c);
            }
        }
    }
    if (all.empty()) {
        fail(ErrorCode::NoCandidates, "no integer candidate beats the empty sequence");
    }
    std::stable_sort(all.begin(), all.end(), [](const Candidate &a, const Candidate &b) { return a.cost < b.cost; });
    if (static_cast<int>(all.size()) > cfg.top_k) {
        all.resize(cfg.top_k);
    }
    return all;
}

GateSolution stage2_refine(const TrapConfig &trap, const std::vector<int> &z, const std::vector<double> &t_init,
                           const SearchConfig &cfg) {
    cfg.validate();
    if (z.size() != t_init.size()) {
        fail(ErrorCode::ConfigError, "z and t_init lengths differ");
    }
    const auto t0 = std::chrono::steady_clock::now();
    GroupLayout layout;
    std::vector<double> s;
    layout.spacing = cfg.rep_rate ? 2.0 * std::numbers::pi / *cfg.rep_rate : 0.0;
    double used = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0) {
            continue;
        }
        layout.z.push_back(z[i]);
        layout.offset.push_back(used);
        s.push_back(t_init[i] - used);
        used += std::abs(z[i]) * layout.spacing;
    }
    if (!layout.z.empty()) {
        layout.upper = cfg.gate_time - (used - layout.spacing);
        if (layout.upper < 0.0) {
            fail(ErrorCode::InfeasibleSpacing, "kicks do not fit in the gate time at this repetition rate");
        }
    }
    const GateModel model(trap, cfg.thermal, cfg.gate_time);
    const TimingObjective objective(model, layout);
    const auto s_best = spg_minimize(objective, s, 0.0, layout.upper, cfg.stage2_iters);

    GateSolution sol;
    sol.sequence = build_sequence(layout, s_best, cfg);
    sol.trap = trap;
    sol.thermal = cfg.thermal;
    sol.metrics = evaluate(sol.sequence, trap, cfg.thermal);
    sol.provenance.seed = cfg.seed;
    sol.provenance.multistarts = cfg.multistarts;
    sol.provenance.stage1_iters = cfg.stage1_iters;
    sol.provenance.stage2_iters = cfg.stage2_iters;
    sol.provenance.n_groups = static_cast<int>(z.size());
    sol.provenance.z_bound = cfg.z_bound;
    sol.provenance.fidelity_target = cfg.fidelity_target;
    sol.provenance.version = FASTGATE_VERSION;
    sol.provenance.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

bool ranks_before(const GateSolution &a, const GateSolution &b, double fidelity_target) {
    const bool pa = a.metrics.fidelity() >= fidelity_target;
    const bool pb = b.metrics.fidelity() >= fidelity_target;
    if (pa != pb) {
        return pa;
    }
    if (pa && a.metrics.n_sdk != b.metrics.n_sdk) {
        return a.metrics.n_sdk < b.metrics.n_sdk;
    }
    if (a.metrics.infidelity != b.metrics.infidelity) {
        return a.metrics.infidelity < b.metrics.infidelity;
    }
    return a.provenance.start < b.provenance.start;
}

SolveResult solve_gate(const TrapConfig &trap, const SearchConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto per_start = stage1_candidates(trap, cfg);
    // Union of per-start candidates; identical vectors keep the lowest start.
    std::vector<Candidate> pool;
    std::set<std::vector<int>> seen;
    for (const auto &list : per_start) {
        for (const auto &c : list) {
            if (seen.insert(c.z).second) {
                pool.push_back(c);
            }
        }
    }
    const int m = cfg.resolved_groups(trap.rf_ratio());
    const auto t_init = uniform_timings(m, cfg.gate_time);
    std::vector<GateSolution> refined(pool.size());
    parallel_for(pool.size(), cfg.threads, [&](size_t i) {
        refined[i] = stage2_refine(trap, pool[i].z, t_init, cfg);
        refined[i].provenance.start = pool[i].start;
    });
    std::stable_sort(refined.begin(), refined.end(), [&](const GateSolution &a, const GateSolution &b) {
        return ranks_before(a, b, cfg.fidelity_target);
    });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto &r : refined) {
        r.provenance.wall_time_s = wall;
    }
    SolveResult result{refined.front(), refined};
    if (result.best.metrics.fidelity() < cfg.floor_fidelity) {
        throw NoSolutionError("best fidelity is below the floor", std::move(result));
    }
    return result;
}

std::vector<SweepRow> sweep(const std::vector<TrapConfig> &traps, SweepAxis axis, const std::vector<double> &grid,
                            const SearchConfig &cfg) {
    if (grid.empty()) {
        fail(ErrorCode::ConfigError, "sweep grid is empty");
    }
    std::vector<SweepRow> rows;
    for (const auto &trap : traps) {
        for (double v : grid) {
            SearchConfig c = cfg;
            if (axis == SweepAxis::GateTime) {
                c.gate_time = v;
            } else {
                c.rep_rate = v;
            }
            SweepRow row;
            row.value = v;
            row.q_x = trap.params.q_x;
            try {
                const auto res = solve_gate(trap, c);
                row.infidelity = res.best.metrics.infidelity;
                row.n_sdk = res.best.metrics.n_sdk;
                row.theta = res.best.metrics.theta;
                row.status = res.best.metrics.fidelity() >= c.fidelity_target ? "ok" : "below_target";
            } catch (const NoSolutionError &e) {
                row.infidelity = e.result().best.metrics.infidelity;
                row.n_sdk = e.result().best.metrics.n_sdk;
                row.theta = e.result().best.metrics.theta;
                row.status = error_code_name(e.code());
            } catch (const Error &e) {
                row.infidelity = std::numeric_limits<double>::quiet_NaN();
                row.theta = std::numeric_limits<double>::quiet_NaN();
                row.status = error_code_name(e.code());
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace fastgate
