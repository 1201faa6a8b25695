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

// Runs the twelve acceptance checks at their pinned tolerances and prints one
// PASS/FAIL line per check. Exits non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fastgate/cli.hpp"
#include "fastgate/floquet.hpp"
#include "fastgate/gpg.hpp"
#include "fastgate/noise.hpp"
#include "fastgate/oracle.hpp"
#include "fastgate/parallel.hpp"
#include "fastgate/serialize.hpp"

using namespace fastgate;

namespace {

constexpr double kPeriod = 2.0 * std::numbers::pi;
constexpr double kRf = 40.0;
constexpr double kChi = -0.014;
constexpr double kEta = 0.15;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

TrapConfig trap_at(double q) { return calibrate({q, kRf, kChi, kEta, 0.0}); }

SearchConfig search(double periods, std::optional<double> rep_rate, uint64_t seed) {
    SearchConfig cfg;
    cfg.gate_time = periods * kPeriod;
    cfg.rep_rate = rep_rate;
    cfg.seed = seed;
    cfg.threads = default_thread_cap();
    return cfg;
}

// Random sequence with at most max_kicks unit kicks in [0, gate_time].
KickSequence random_sequence(std::mt19937_64 &rng, int max_kicks, double gate_time) {
    std::uniform_int_distribution<int> groups(2, 10);
    std::uniform_int_distribution<int> mult(-3, 3);
    std::uniform_real_distribution<double> when(0.0, gate_time);
    KickSequence seq;
    seq.gate_time = gate_time;
    const int m = groups(rng);
    std::vector<double> t(m);
    for (auto &x : t) {
        x = when(rng);
    }
    std::sort(t.begin(), t.end());
    int used = 0;
    for (double x : t) {
        int z = mult(rng);
        if (z == 0) {
            z = 1;
        }
        if (used + std::abs(z) > max_kicks) {
            break;
        }
        used += std::abs(z);
        seq.kicks.push_back({x, z});
    }
    return seq;
}

Outcome floquet_grid() {
    double worst_beta = 0.0, worst_res = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double q = 0.85 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            const double beta = 0.02 + (0.9 - 0.02) * j / 19.0;
            // rf_ratio = 2 makes the target exponent equal to omega_target.
            const double a = calibrate_a(q, 2.0, beta);
            const auto sol = solve_floquet(a, q);
            worst_beta = std::max(worst_beta, std::abs(sol.beta - monodromy_exponent(a, q)));
            worst_res = std::max(worst_res, sol.residual);
        }
    }
    return {worst_beta < 1e-9 && worst_res < 1e-12,
            fmt("max |beta_cf - beta_mono| = %.2e, max residual = %.2e", worst_beta, worst_res)};
}

Outcome stability_boundary() {
    const auto t0 = std::chrono::steady_clock::now();
    const double q = stability_edge_q(0.0, 0.5, 1.0);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::abs(q - 0.908) <= 0.001 && s < 1.0, fmt("q* = %.6f in %.3f s", q, s)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(2026);
    double d_theta = 0.0, d_disp = 0.0;
    for (double q : {0.01, 0.1, 0.3, 0.5}) {
        const auto trap = trap_at(q);
        for (int i = 0; i < 20; ++i) {
            const auto seq = random_sequence(rng, 30, kPeriod);
            const auto a = evaluate(seq, trap, {});
            const auto b = oracle_metrics(seq, trap, {});
            d_theta = std::max(d_theta, std::abs(a.theta - b.theta));
            for (int m = 0; m < 2; ++m) {
                d_disp = std::max({d_disp, std::abs(a.displacements[m].dx - b.displacements[m].dx),
                                   std::abs(a.displacements[m].dy - b.displacements[m].dy)});
            }
        }
    }
    return {d_theta < 1e-6 && d_disp < 1e-8, fmt("max |dTheta| = %.2e, max |dX|,|dY| = %.2e", d_theta, d_disp)};
}

Outcome secular_reduction() {
    const auto trap = trap_at(1e-6);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto seq = random_sequence(rng, 30, 1.3 * kPeriod);
        const auto m = evaluate(seq, trap, {});
        const double tg = seq.gate_time;
        double theta = 0.0;
        for (int a = 0; a < 2; ++a) {
            const auto &mode = trap.modes[a];
            const double k = 2.0 * std::numbers::sqrt2 * mode.eta;
            double pairs = 0.0, dx = 0.0, dy = 0.0;
            for (size_t n = 0; n < seq.kicks.size(); ++n) {
                const auto &kn = seq.kicks[n];
                for (size_t j = 0; j < n; ++j) {
                    pairs += kn.z * seq.kicks[j].z * std::sin(mode.omega * (kn.t - seq.kicks[j].t));
                }
                dx += kn.z * std::sin(mode.omega * (tg - kn.t));
                dy += kn.z * std::cos(mode.omega * (tg - kn.t));
            }
            theta += k * k * mode.couplings[0] * mode.couplings[1] * pairs;
            worst = std::max({worst, std::abs(m.displacements[a].dx - k * dx) / std::abs(k * dx),
                              std::abs(m.displacements[a].dy - k * dy) / std::abs(k * dy)});
        }
        worst = std::max(worst, std::abs(m.theta - theta) / std::abs(theta));
    }
    return {worst < 1e-4, fmt("max relative deviation = %.2e", worst)};
}

Outcome excess_micromotion() {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (double q : {0.1, 0.5}) {
        const auto trap = trap_at(q);
        const auto seq = random_sequence(rng, 30, kPeriod);
        const auto base = oracle_metrics(seq, trap, {});
        for (double scale : {1.0, 3.0, 10.0}) {
            const double d = scale * 2.0 * std::numbers::sqrt2 * kEta;
            OracleOptions opt;
            opt.initial = {PhasePoint{d, -0.5 * d}, PhasePoint{-d, d}};
            const auto shifted = oracle_metrics(seq, trap, {}, opt);
            worst = std::max({worst, std::abs(shifted.theta - base.theta),
                              std::abs(shifted.infidelity - base.infidelity)});
        }
    }
    return {worst < 1e-8, fmt("max change in Theta or infidelity = %.2e", worst)};
}

// Best solution over up to three seeds; stops at the first that reaches 0.999.
GateSolution solve_with_retries(double q, double periods, std::optional<double> rep_rate, int &seeds_used) {
    GateSolution best;
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        seeds_used = static_cast<int>(seed);
        const auto res = solve_gate(trap_at(q), search(periods, rep_rate, seed));
        if (seed == 1 || res.best.metrics.infidelity < best.metrics.infidelity) {
            best = res.best;
        }
        if (best.metrics.fidelity() >= 0.999) {
            break;
        }
    }
    return best;
}

Outcome existence(double periods, std::optional<double> rep_rate) {
    bool ok = true;
    std::string detail;
    for (double q : {0.01, 0.5}) {
        int seeds = 0;
        const auto sol = solve_with_retries(q, periods, rep_rate, seeds);
        ok = ok && sol.metrics.fidelity() >= 0.999;
        detail += fmt("%sq=%.2f: 1-F = %.2e, N = %d, seeds = %d", detail.empty() ? "" : "; ", q,
                      sol.metrics.infidelity, sol.metrics.n_sdk, seeds);
    }
    return {ok, detail};
}

Outcome micromotion_enhancement() {
    // Below 1e-10 the two kernels no longer resolve differences.
    const double floor = 1e-10;
    double inf[2];
    const double qs[2] = {0.01, 0.5};
    for (int i = 0; i < 2; ++i) {
        inf[i] = solve_gate(trap_at(qs[i]), search(0.7, std::nullopt, 1)).best.metrics.infidelity;
    }
    const double ratio = std::max(inf[0], floor) / std::max(inf[1], floor);
    return {ratio >= 10.0,
            fmt("1-F(q=0.01) = %.2e, 1-F(q=0.5) = %.2e, floored ratio = %.2f", inf[0], inf[1], ratio)};
}

Outcome population_bound_check() {
    const double v = population_bound(1.0, 40, 0.007);
    bool monotone = true;
    double prev = 2.0;
    for (int k = 0; k <= 100; ++k) {
        const double b = population_bound(1.0, 40, 0.02 * k / 100.0);
        monotone = monotone && b < prev;
        prev = b;
    }
    prev = 2.0;
    for (int n = 0; n <= 140; ++n) {
        const double b = population_bound(1.0, n, 0.007);
        monotone = monotone && b < prev;
        prev = b;
    }
    return {std::abs(v - 0.5184) <= 1e-12 && monotone, fmt("bound = %.15f, monotone = %d", v, monotone)};
}

Outcome sdk_monte_carlo(GateSolution &secular) {
    // Few kicks keep the error budget low: sparse search over a long gate at finite rate.
    auto cfg = search(5.0, 800.0, 1);
    cfg.multistarts = 32;
    cfg.sparsity_weight = 3e-4;
    secular = solve_gate(trap_at(0.01), cfg).best;
    const int n = secular.metrics.n_sdk;

    NoiseChannel ch;
    ch.kind = NoiseKind::SdkError;
    ch.sigma = 0.007;
    ch.samples = 10000;
    ch.m_max = 3;
    const auto strat = mc_sdk_errors(secular, ch, secular.thermal, default_thread_cap());
    const auto direct = mc_sdk_errors_direct(secular, ch, secular.thermal, default_thread_cap());

    double sum = 0.0;
    for (double w : binomial_weights(n, ch.sigma, n)) {
        sum += w;
    }
    double strata = strat.tail_mass;
    for (const auto &s : strat.strata) {
        strata += s.weight;
    }
    const double se = std::hypot(strat.standard_error, direct.standard_error);
    const double gap = std::abs(strat.mean - direct.mean);
    const bool ok = 1.0 - strat.mean > 0.9 && std::abs(sum - 1.0) <= 1e-14 && std::abs(strata - 1.0) <= 1e-14 &&
                    gap <= 3.0 * se;
    return {ok, fmt("N = %d, mean F = %.4f (stratified), %.4f (direct), |diff| = %.2e vs 3 SE = %.2e, "
                    "weight sum - 1 = %.1e, tail = %.1e",
                    n, 1.0 - strat.mean, 1.0 - direct.mean, gap, 3.0 * se, sum - 1.0, strat.tail_mass)};
}

Outcome rf_phase_flatness() {
    GateSolution sols[2];
    const double qs[2] = {0.01, 0.5};
    for (int i = 0; i < 2; ++i) {
        sols[i] = solve_gate(trap_at(qs[i]), search(1.0, 800.0, 1)).best;
    }
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < 64; ++k) {
        const auto trap = sols[0].trap.with_rf_phase(kPeriod * k / 64.0);
        const double v = evaluate(sols[0].sequence, trap, sols[0].thermal).infidelity;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Ordering: excess infidelity under 0.1 rad phase noise, same draws for both traps.
    double excess[2], se[2];
    for (int i = 0; i < 2; ++i) {
        NoiseChannel ch;
        ch.kind = NoiseKind::RfPhase;
        ch.sigma = 0.1;
        ch.samples = 2000;
        ch.common_random_numbers = true;
        const auto r = mc_parameter_noise(sols[i], ch, sols[i].thermal, default_thread_cap());
        excess[i] = r.mean - sols[i].metrics.infidelity;
        se[i] = r.standard_error;
    }
    const bool flat = hi - lo < 1e-4;
    const bool ordered = excess[1] - excess[0] > 3.0 * std::hypot(se[0], se[1]);
    return {flat && ordered,
            fmt("q=0.01 (N = %d) range over phase = %.2e (flat: %d); excess at 0.1 rad: q=0.5 %.2e vs q=0.01 %.2e "
                "(ordered: %d)",
                sols[0].metrics.n_sdk, hi - lo, flat, excess[1], excess[0], ordered)};
}

Outcome cli_determinism(const GateSolution &secular) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fastgate_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_atomic((dir / "secular.json").string(), solution_to_json(secular));
    const std::string sol = (dir / "solution.json").string();
    const std::vector<std::string> small = {"--multistarts", "3", "--stage1-iters", "200", "--stage2-iters", "200"};
    auto cat = [](std::vector<std::string> a, const std::vector<std::string> &b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    struct Command {
        std::string name;
        std::vector<std::string> args;
    };
    const std::vector<Command> commands = {
        {"calibrate", {"calibrate", "--qx", "0.3"}},
        {"solve", cat({"solve", "--qx", "0.5", "--gate-time", "1", "--rep-rate", "800"}, small)},
        {"eval", {"eval", "--solution", sol, "--rf-phase", "0.3"}},
        {"verify", {"verify", "--solution", sol}},
        {"sweep-time", cat({"sweep-time", "--qx", "0.01,0.5", "--grid", "0.6:1.0:0.2"}, small)},
        {"sweep-reprate", cat({"sweep-reprate", "--qx", "0.5", "--gate-time", "1", "--grid", "400,800"}, small)},
        {"noise-sdk",
         {"noise", "--solution", (dir / "secular.json").string(), "--channel", "sdk_error", "--sigma", "0.007",
          "--samples", "200"}},
        {"noise-timing",
         {"noise", "--solution", sol, "--channel", "timing_jitter", "--sigma", "1e-5,1e-4", "--samples", "100"}},
        {"traj", {"traj", "--solution", sol, "--samples", "50"}},
        {"stability", {"stability", "--na", "5", "--nq", "5"}},
    };
    std::string bad;
    for (const auto &c : commands) {
        std::string first;
        for (const char *threads : {"1", "4", "1"}) {
            const std::string out = (dir / (c.name + "_" + threads + ".out")).string();
            auto args = cat(c.args, {"--seed", "5", "--threads", threads, "--out", out});
            const int code = cli::run(args);
            const std::string text = code == 0 ? read_file(out) : "";
            if (c.name == "solve" && std::string(threads) == "1") {
                fs::copy_file(out, sol, fs::copy_options::overwrite_existing);
            }
            if (code != 0) {
                bad += c.name + "(exit " + std::to_string(code) + ") ";
                break;
            }
            if (first.empty()) {
                first = text;
            } else if (text != first) {
                bad += c.name + " ";
                break;
            }
        }
    }
    fs::remove_all(dir);
    return {bad.empty(), bad.empty() ? fmt("%zu commands byte-identical at 1 and 4 threads, re-run", commands.size())
                                     : "differs: " + bad};
}

}  // namespace

int main() {
    int failures = 0;
    GateSolution secular;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"floquet correctness", floquet_grid},
        {"stability boundary", stability_boundary},
        {"oracle equivalence", oracle_equivalence},
        {"secular reduction", secular_reduction},
        {"excess micromotion insensitivity", excess_micromotion},
        {"solution existence at 1.5 periods", [] { return existence(1.5, std::nullopt); }},
        {"micromotion enhancement at 0.7 periods", micromotion_enhancement},
        {"finite repetition rate at 3 periods", [] { return existence(3.0, 800.0); }},
        {"population bound arithmetic", population_bound_check},
        {"kick-error Monte-Carlo", [&] { return sdk_monte_carlo(secular); }},
        {"RF-phase flatness", rf_phase_flatness},
        {"CLI determinism", [&] { return cli_determinism(secular); }},
    };
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("%-4s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str(),
                    o.detail.c_str(), s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return failures == 0 ? 0 : 1;
}
