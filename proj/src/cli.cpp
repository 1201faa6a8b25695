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

#include "fastgate/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fastgate/floquet.hpp"
#include "fastgate/noise.hpp"
#include "fastgate/oracle.hpp"
#include "fastgate/parallel.hpp"
#include "fastgate/serialize.hpp"
#include "json.hpp"

namespace fastgate::cli {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Common {
    uint64_t seed = 1;
    int threads = 0;  // 0: default cap
    std::string out = "-";
    std::optional<double> tol;
    std::string config;
    int verbose = 0;

    int thread_count() const { return threads > 0 ? threads : default_thread_cap(); }
};

struct TrapOptions {
    std::string file;
    TrapParams params;
    std::vector<double> q_list;  // sweeps only
};

struct SearchOptions {
    double gate_periods = 0.0;
    std::optional<double> rep_rate;
    SearchConfig cfg;
    bool record_timing = false;
};

struct NoiseOptions {
    std::string solution;
    std::string channel = "sdk_error";
    std::vector<double> sigmas{0.0};
    NoiseChannel ch;
    bool direct = false;
};

struct GridSpec {
    std::string text;
};

void add_common(CLI::App *app, Common &c) {
    app->add_option("--seed", c.seed, "Master random seed")->capture_default_str();
    app->add_option("--threads", c.threads, "Worker cap (default: FASTGATE_THREADS or all cores)");
    app->add_option("--out", c.out, "Output path, - for stdout")->capture_default_str();
    app->add_option("--tol", c.tol, "Numerical tolerance for the command");
    app->add_option("--config", c.config, "key = value file supplying defaults for this command's flags");
    app->add_flag("-v,--verbose", c.verbose, "Diagnostics on stderr");
}

void add_trap(CLI::App *app, TrapOptions &t, bool family) {
    auto *file = app->add_option("--trap", t.file, "Trap configuration file");
    CLI::Option *qx = nullptr;
    if (family) {
        qx = app->add_option("--qx", t.q_list, "Micromotion q_x; comma list for a trap family")->delimiter(',');
    } else {
        qx = app->add_option("--qx", t.params.q_x, "Micromotion q_x");
    }
    auto *rf = app->add_option("--rf-ratio", t.params.rf_ratio, "RF drive / secular frequency")->capture_default_str();
    auto *chi = app->add_option("--chi", t.params.chi, "Relative mode splitting")->capture_default_str();
    auto *eta = app->add_option("--eta", t.params.eta, "Lamb-Dicke parameter of the COM mode")->capture_default_str();
    auto *phase = app->add_option("--rf-phase", t.params.rf_phase, "RF phase at t = 0")->capture_default_str();
    for (auto *o : {qx, rf, chi, eta, phase}) {
        file->excludes(o);
    }
}

void add_search(CLI::App *app, SearchOptions &s, bool gate_time_required) {
    auto *gt = app->add_option("--gate-time", s.gate_periods, "Gate time in trap periods");
    if (gate_time_required) {
        gt->required();
    }
    app->add_option("--rep-rate", s.rep_rate, "Repetition rate 2 pi f_rep / omega_0 (default unlimited)");
    app->add_option("--n-groups", s.cfg.n_groups, "Stage-1 groups M (0: ceil(4 t_g Omega / 2 pi))")
        ->capture_default_str();
    app->add_option("--multistarts", s.cfg.multistarts, "Stage-1 random starts")->capture_default_str();
    app->add_option("--stage1-iters", s.cfg.stage1_iters, "Stage-1 iteration budget")->capture_default_str();
    app->add_option("--stage2-iters", s.cfg.stage2_iters, "Stage-2 iteration budget")->capture_default_str();
    app->add_option("--z-bound", s.cfg.z_bound, "Maximum |z| per group")->capture_default_str();
    app->add_option("--fidelity-target", s.cfg.fidelity_target, "Ranking threshold")->capture_default_str();
    app->add_option("--floor", s.cfg.floor_fidelity, "Exit 4 when the best fidelity is below this")
        ->capture_default_str();
    app->add_option("--nbar-cm", s.cfg.thermal.nbar_cm, "Mean COM occupation")->capture_default_str();
    app->add_option("--nbar-br", s.cfg.thermal.nbar_br, "Mean breathing occupation")->capture_default_str();
    app->add_option("--top-k", s.cfg.top_k, "Stage-1 candidates kept")->capture_default_str();
    app->add_option("--per-start", s.cfg.per_start_candidates, "Candidates refined per start")
        ->capture_default_str();
    app->add_option("--sparsity", s.cfg.sparsity_weight, "Smoothed L1 weight on z in stage 1")
        ->capture_default_str();
    app->add_flag("--record-timing", s.record_timing, "Write wall time into the output");
}

TrapConfig load_trap(const TrapOptions &t) {
    if (!t.file.empty()) {
        return trap_from_text(read_file(t.file));
    }
    return calibrate(t.params);
}

std::vector<TrapConfig> load_family(const TrapOptions &t) {
    if (!t.file.empty()) {
        return {trap_from_text(read_file(t.file))};
    }
    if (t.q_list.empty()) {
        fail(ErrorCode::ConfigError, "give --trap or --qx");
    }
    std::vector<TrapConfig> out;
    for (double q : t.q_list) {
        TrapParams p = t.params;
        p.q_x = q;
        out.push_back(calibrate(p));
    }
    return out;
}

SearchConfig search_config(const SearchOptions &s, const Common &c) {
    SearchConfig cfg = s.cfg;
    cfg.gate_time = kTwoPi * s.gate_periods;
    cfg.rep_rate = s.rep_rate;
    cfg.seed = c.seed;
    cfg.threads = c.thread_count();
    return cfg;
}

// "start:stop:step" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string &text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) {
            parts.push_back(parse_double(item, "grid"));
        }
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
            fail(ErrorCode::ConfigError, "grid must be start:stop:step with step > 0 and stop >= start");
        }
        const int n = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) {
            out.push_back(parts[0] + i * parts[2]);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(item, "grid"));
    }
    if (out.empty()) {
        fail(ErrorCode::ConfigError, "empty grid");
    }
    return out;
}

Json metrics_object(const GateMetrics &m) {
    Json j;
    j["theta"] = m.theta;
    j["phase_error"] = m.phase_error;
    j["infidelity"] = m.infidelity;
    j["fidelity"] = m.fidelity();
    j["n_sdk"] = m.n_sdk;
    j["displacements"] = {{"CM", {{"dx", m.displacements[0].dx}, {"dy", m.displacements[0].dy}}},
                          {"BR", {{"dx", m.displacements[1].dx}, {"dy", m.displacements[1].dy}}}};
    return j;
}

Json histogram_object(const Histogram &h) { return {{"lo", h.lo}, {"hi", h.hi}, {"mass", h.mass}}; }

Json report_object(const NoiseReport &r, int n_sdk) {
    Json j;
    j["sigma"] = r.channel.sigma;
    j["baseline"] = r.baseline;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["standard_error"] = r.standard_error;
    j["samples"] = r.samples;
    j["failures"] = r.failures;
    if (r.channel.kind == NoiseKind::SdkError) {
        const double f0 = 1.0 - r.baseline;
        j["population_bound"] =
            n_sdk * r.channel.sigma < 1.0 ? Json(population_bound(f0, n_sdk, r.channel.sigma)) : Json(nullptr);
        j["tail_mass"] = r.tail_mass;
        Json strata = Json::array();
        for (const auto &s : r.strata) {
            strata.push_back({{"m", s.m},
                              {"weight", s.weight},
                              {"mean", s.mean},
                              {"variance", s.variance},
                              {"samples", s.samples},
                              {"histogram", histogram_object(s.histogram)}});
        }
        j["strata"] = strata;
    }
    if (!r.projection.empty()) {
        j["projection"] = r.projection;
    }
    j["histogram"] = histogram_object(r.histogram);
    j["warnings"] = r.warnings;
    return j;
}

void log(const Common &c, const std::string &msg) {
    if (c.verbose > 0) {
        std::cerr << msg << "\n";
    }
}

// --- commands -------------------------------------------------------------

int cmd_calibrate(const TrapOptions &t, const Common &c) {
    const TrapConfig trap = load_trap(t);
    std::ostringstream os;
    os << "a_cm=" << format_double(trap.a_cm) << " a_br=" << format_double(trap.a_br)
       << " beta_cm=" << format_double(trap.modes[0].floquet.beta) << " omega_br=" << format_double(trap.modes[1].omega);
    log(c, os.str());
    write_atomic(c.out, trap_to_text(trap));
    return kOk;
}

int cmd_solve(const TrapOptions &t, const SearchOptions &s, const Common &c) {
    const TrapConfig trap = load_trap(t);
    const SearchConfig cfg = search_config(s, c);
    const auto t0 = std::chrono::steady_clock::now();
    int code = kOk;
    SolveResult result;
    try {
        result = solve_gate(trap, cfg);
    } catch (const NoSolutionError &e) {
        std::cerr << "fastgate: " << e.what() << "\n";
        result = e.result();
        code = kNoSolution;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "solve: infidelity " << format_double(result.best.metrics.infidelity) << ", N = "
              << result.best.metrics.n_sdk << ", " << wall << " s\n";
    std::vector<GateSolution> ranked(result.ranked.begin(),
                                     result.ranked.begin() + std::min<size_t>(result.ranked.size(), 16));
    write_atomic(c.out, solution_to_json(result.best, s.record_timing, ranked));
    return code;
}

int cmd_eval(const std::string &path, std::optional<double> rf_phase, const Common &c) {
    GateSolution sol = solution_from_json(read_file(path));
    TrapConfig trap = rf_phase ? sol.trap.with_rf_phase(*rf_phase) : sol.trap;
    Json j;
    j["format"] = "fastgate-eval/1";
    j["rf_phase"] = trap.params.rf_phase;
    j["metrics"] = metrics_object(evaluate(sol.sequence, trap, sol.thermal));
    write_atomic(c.out, j.dump(2) + "\n");
    return kOk;
}

int cmd_verify(const std::string &path, const Common &c) {
    const GateSolution sol = solution_from_json(read_file(path));
    const double tol = c.tol.value_or(1e-6);
    const GateMetrics analytic = sol.metrics;
    const GateMetrics oracle = oracle_metrics(sol.sequence, sol.trap, sol.thermal);
    double gap = std::abs(analytic.theta - oracle.theta);
    for (int m = 0; m < 2; ++m) {
        gap = std::max(gap, std::abs(analytic.displacements[m].dx - oracle.displacements[m].dx));
        gap = std::max(gap, std::abs(analytic.displacements[m].dy - oracle.displacements[m].dy));
    }
    const bool ok = gap <= tol;
    Json j;
    j["format"] = "fastgate-verify/1";
    j["tolerance"] = tol;
    j["max_abs_difference"] = gap;
    j["match"] = ok;
    j["analytic"] = metrics_object(analytic);
    j["oracle"] = metrics_object(oracle);
    write_atomic(c.out, j.dump(2) + "\n");
    if (!ok) {
        std::cerr << "verify: oracle and analytic metrics differ by " << format_double(gap) << "\n";
    }
    return ok ? kOk : kNumericalFailure;
}

int cmd_sweep(SweepAxis axis, const TrapOptions &t, const SearchOptions &s, const std::string &grid_text,
              const Common &c) {
    const auto traps = load_family(t);
    SearchConfig cfg = search_config(s, c);
    auto grid = parse_grid(grid_text);
    std::vector<double> physical = grid;
    if (axis == SweepAxis::GateTime) {
        for (auto &g : physical) {
            g *= kTwoPi;
        }
        if (!(cfg.gate_time > 0.0)) {
            cfg.gate_time = physical.front();  // placeholder; every row sets its own
        }
    }
    const auto rows = sweep(traps, axis, physical, cfg);
    std::string out = csv_row({axis == SweepAxis::GateTime ? "gate_time_periods" : "rep_rate", "q_x", "infidelity",
                               "fidelity", "n_sdk", "theta", "status"});
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        out += csv_row({format_double(grid[i % grid.size()]), format_double(r.q_x), format_double(r.infidelity),
                        format_double(1.0 - r.infidelity), std::to_string(r.n_sdk), format_double(r.theta),
                        r.status});
    }
    write_atomic(c.out, out);
    return kOk;
}

int cmd_noise(const NoiseOptions &n, const Common &c) {
    const GateSolution sol = solution_from_json(read_file(n.solution));
    NoiseChannel ch = n.ch;
    ch.kind = parse_noise_kind(n.channel);
    ch.seed = c.seed;
    Json reports = Json::array();
    for (double sigma : n.sigmas) {
        ch.sigma = sigma;
        NoiseReport r;
        if (ch.kind == NoiseKind::SdkError) {
            r = n.direct ? mc_sdk_errors_direct(sol, ch, sol.thermal, c.thread_count())
                         : mc_sdk_errors(sol, ch, sol.thermal, c.thread_count());
        } else {
            r = mc_parameter_noise(sol, ch, sol.thermal, c.thread_count());
        }
        for (const auto &w : r.warnings) {
            std::cerr << "noise: " << w << "\n";
        }
        reports.push_back(report_object(r, sol.metrics.n_sdk));
    }
    Json j;
    j["format"] = "fastgate-noise/1";
    j["channel"] = {{"kind", noise_kind_name(ch.kind)},
                    {"samples", ch.samples},
                    {"seed", ch.seed},
                    {"m_max", ch.m_max},
                    {"flip_fraction", ch.flip_fraction},
                    {"bins", ch.bins},
                    {"common_random_numbers", ch.common_random_numbers},
                    {"estimator", ch.kind == NoiseKind::SdkError ? (n.direct ? "direct" : "stratified") : "direct"}};
    j["n_sdk"] = sol.metrics.n_sdk;
    j["reports"] = reports;
    write_atomic(c.out, j.dump(2) + "\n");
    return kOk;
}

int cmd_traj(const std::string &path, int samples, const Common &c) {
    if (samples < 2) {
        fail(ErrorCode::ConfigError, "traj needs at least 2 samples");
    }
    const GateSolution sol = solution_from_json(read_file(path));
    OracleOptions opt;
    const double tg = sol.sequence.gate_time;
    for (int i = 0; i < samples; ++i) {
        opt.sample_times.push_back(i == samples - 1 ? tg : tg * i / (samples - 1));
    }
    const Trajectory traj = integrate(sol.sequence, sol.trap, opt);
    const auto theta = running_phase(traj, sol.trap);
    const double target = std::copysign(std::numbers::pi / 4.0, sol.metrics.theta);
    std::string out = csv_row({"t", "X_CM", "Y_CM", "X_BR", "Y_BR", "dPhi"});
    for (size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<std::string> row{format_double(traj.times[k])};
        for (int m = 0; m < 2; ++m) {
            const auto &p = traj.modes[m];
            row.push_back(format_double(p.plus.samples[k].x - p.free.samples[k].x));
            row.push_back(format_double(p.plus.samples[k].y - p.free.samples[k].y));
        }
        row.push_back(format_double(theta[k] - target));
        out += csv_row(row);
    }
    write_atomic(c.out, out);
    return kOk;
}

struct StabilityGrid {
    double a_min = -0.6, a_max = 1.2, q_min = 0.0, q_max = 1.2;
    int na = 61, nq = 61;
};

int cmd_stability(const StabilityGrid &g, const Common &c) {
    if (g.na < 2 || g.nq < 2 || !(g.a_max > g.a_min) || !(g.q_max > g.q_min)) {
        fail(ErrorCode::ConfigError, "stability grid needs at least 2 points per axis and increasing bounds");
    }
    const double tol = c.tol.value_or(1e-13);
    std::vector<std::string> rows(static_cast<size_t>(g.na) * g.nq);
    parallel_for(rows.size(), c.thread_count(), [&](size_t idx) {
        const int i = static_cast<int>(idx) / g.nq, j = static_cast<int>(idx) % g.nq;
        const double a = g.a_min + (g.a_max - g.a_min) * i / (g.na - 1);
        const double q = g.q_min + (g.q_max - g.q_min) * j / (g.nq - 1);
        const double tr = monodromy_trace(a, q, tol);
        const bool stable = std::abs(tr) < 2.0;
        const std::string beta = stable ? format_double(std::acos(tr / 2.0) / std::numbers::pi) : "";
        rows[idx] = csv_row({format_double(a), format_double(q), format_double(tr), stable ? "1" : "0", beta});
    });
    std::string out = csv_row({"a", "q", "trace", "stable", "beta"});
    for (const auto &r : rows) {
        out += r;
    }
    write_atomic(c.out, out);
    return kOk;
}

// Appends `--key value` pairs from the --config file for flags not given on
// the command line. Unknown keys are errors.
std::vector<std::string> expand_config(const CLI::App &app, std::vector<std::string> args) {
    std::string path;
    size_t sub_at = args.size();
    for (size_t i = 0; i < args.size(); ++i) {
        if (sub_at == args.size() && !args[i].empty() && args[i][0] != '-') {
            sub_at = i;
        }
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty() || sub_at == args.size()) {
        return args;
    }
    const CLI::App *sub = app.get_subcommand_no_throw(args[sub_at]);
    if (sub == nullptr) {
        return args;
    }
    for (const auto &[key, value] : parse_key_values(read_file(path))) {
        std::string name = "--" + key;
        std::replace(name.begin() + 2, name.end(), '_', '-');
        if (name == "--config") {
            fail(ErrorCode::ConfigError, "config files cannot include other config files");
        }
        const CLI::Option *opt = sub->get_option_no_throw(name);
        if (opt == nullptr) {
            fail(ErrorCode::ConfigError, "unknown config key '" + key + "' for " + args[sub_at]);
        }
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string &a) {
            return a == name || a.rfind(name + "=", 0) == 0;
        });
        if (given) {
            continue;
        }
        if (opt->get_type_size_max() == 0) {
            if (value == "true" || value == "1") {
                args.push_back(name);
            } else if (value != "false" && value != "0") {
                fail(ErrorCode::ConfigError, "flag '" + key + "' takes true or false");
            }
        } else {
            args.push_back(name);
            args.push_back(value);
        }
    }
    return args;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigError:
        case ErrorCode::DomainError:
        case ErrorCode::InvalidSpacing:
            return kConfigError;
        case ErrorCode::NoSolution:
            return kNoSolution;
        default:
            return kNumericalFailure;
    }
}

int run(const std::vector<std::string> &args_in) {
    CLI::App app{"fastgate: micromotion-aware fast two-qubit gate design", "fastgate"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FASTGATE_VERSION);

    Common common;
    TrapOptions trap;
    SearchOptions search;
    NoiseOptions noise;
    std::string solution, grid;
    std::optional<double> rf_phase;
    int traj_samples = 400;
    StabilityGrid stab;

    auto *calibrate_cmd = app.add_subcommand("calibrate", "Calibrate a values for the COM and breathing modes");
    add_common(calibrate_cmd, common);
    add_trap(calibrate_cmd, trap, false);

    auto *solve_cmd = app.add_subcommand("solve", "Search for a gate sequence");
    add_common(solve_cmd, common);
    add_trap(solve_cmd, trap, false);
    add_search(solve_cmd, search, true);

    auto *eval_cmd = app.add_subcommand("eval", "Closed-form metrics of a stored solution");
    add_common(eval_cmd, common);
    eval_cmd->add_option("--solution", solution, "Solution JSON")->required();
    eval_cmd->add_option("--rf-phase", rf_phase, "Evaluate at a different RF phase");

    auto *verify_cmd = app.add_subcommand("verify", "Compare closed-form metrics with the ODE oracle");
    add_common(verify_cmd, common);
    verify_cmd->add_option("--solution", solution, "Solution JSON")->required();

    auto *sweep_time_cmd = app.add_subcommand("sweep-time", "Best gate per target gate time");
    add_common(sweep_time_cmd, common);
    add_trap(sweep_time_cmd, trap, true);
    add_search(sweep_time_cmd, search, false);
    sweep_time_cmd->add_option("--grid", grid, "Gate times in periods: start:stop:step or a comma list")
        ->required();

    auto *sweep_rate_cmd = app.add_subcommand("sweep-reprate", "Best gate per repetition rate");
    add_common(sweep_rate_cmd, common);
    add_trap(sweep_rate_cmd, trap, true);
    add_search(sweep_rate_cmd, search, true);
    sweep_rate_cmd->add_option("--grid", grid, "Rates 2 pi f_rep / omega_0: start:stop:step or a comma list")
        ->required();

    auto *noise_cmd = app.add_subcommand("noise", "Monte-Carlo robustness of a stored solution");
    add_common(noise_cmd, common);
    noise_cmd->add_option("--solution", noise.solution, "Solution JSON")->required();
    noise_cmd
        ->add_option("--channel", noise.channel,
                     "sdk_error, timing_jitter, rep_period, mode_splitting or rf_phase")
        ->capture_default_str();
    noise_cmd->add_option("--sigma", noise.sigmas, "Channel width; comma list for a sweep")->delimiter(',');
    noise_cmd->add_option("--samples", noise.ch.samples, "Samples per width (per stratum for sdk_error)")
        ->capture_default_str();
    noise_cmd->add_option("--m-max", noise.ch.m_max, "Largest error count stratum")->capture_default_str();
    noise_cmd->add_option("--flip-fraction", noise.ch.flip_fraction, "Erroneous kicks that reverse")
        ->capture_default_str();
    noise_cmd->add_option("--bins", noise.ch.bins, "Histogram bins")->capture_default_str();
    noise_cmd->add_flag("--crn", noise.ch.common_random_numbers, "Reuse draws across widths");
    noise_cmd->add_flag("--direct", noise.direct, "Plain Monte-Carlo for sdk_error");

    auto *traj_cmd = app.add_subcommand("traj", "Phase-space trajectories and running phase error");
    add_common(traj_cmd, common);
    traj_cmd->add_option("--solution", solution, "Solution JSON")->required();
    traj_cmd->add_option("--samples", traj_samples, "Time samples")->capture_default_str();

    auto *stab_cmd = app.add_subcommand("stability", "Monodromy stability raster over (a, q)");
    add_common(stab_cmd, common);
    stab_cmd->add_option("--a-min", stab.a_min)->capture_default_str();
    stab_cmd->add_option("--a-max", stab.a_max)->capture_default_str();
    stab_cmd->add_option("--q-min", stab.q_min)->capture_default_str();
    stab_cmd->add_option("--q-max", stab.q_max)->capture_default_str();
    stab_cmd->add_option("--na", stab.na, "Grid points in a")->capture_default_str();
    stab_cmd->add_option("--nq", stab.nq, "Grid points in q")->capture_default_str();

    try {
        auto args = expand_config(app, args_in);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kConfigError;
    } catch (const Error &e) {
        std::cerr << "fastgate: " << e.what() << "\n";
        return exit_code_for(e.code());
    }

    try {
        if (common.threads < 0) {
            fail(ErrorCode::ConfigError, "--threads must be positive");
        }
        if (calibrate_cmd->parsed()) {
            return cmd_calibrate(trap, common);
        }
        if (solve_cmd->parsed()) {
            return cmd_solve(trap, search, common);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(solution, rf_phase, common);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(solution, common);
        }
        if (sweep_time_cmd->parsed()) {
            return cmd_sweep(SweepAxis::GateTime, trap, search, grid, common);
        }
        if (sweep_rate_cmd->parsed()) {
            return cmd_sweep(SweepAxis::RepRate, trap, search, grid, common);
        }
        if (noise_cmd->parsed()) {
            return cmd_noise(noise, common);
        }
        if (traj_cmd->parsed()) {
            return cmd_traj(solution, traj_samples, common);
        }
        if (stab_cmd->parsed()) {
            return cmd_stability(stab, common);
        }
    } catch (const Error &e) {
        std::cerr << "fastgate: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception &e) {
        std::cerr << "fastgate: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kConfigError;
}

int run(int argc, char **argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args);
}

}  // namespace fastgate::cli
