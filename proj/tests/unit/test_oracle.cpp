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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fastgate/gatekernel.hpp"
#include "fastgate/oracle.hpp"

using namespace fastgate;

TEST_CASE("secular single kick from rest") {
    auto trap = calibrate({0.0, 40.0, -0.014, 0.15, 0.0});
    KickSequence seq{{{0.5, 1}}, 3.0, std::nullopt};
    OracleOptions opt;
    opt.sample_times = {0.25, 1.0, 2.0, 3.0};
    auto traj = integrate(seq, trap, opt);
    for (int a = 0; a < 2; ++a) {
        const auto &mode = trap.modes[a];
        const auto &plus = traj.modes[a].plus;
        for (size_t i = 0; i < opt.sample_times.size(); ++i) {
            double t = opt.sample_times[i];
            double expect = t < 0.5 ? 0.0
                                    : 2.0 * std::numbers::sqrt2 * mode.eta * plus.s *
                                          std::sin(mode.omega * (t - 0.5));
            CHECK(std::abs(plus.samples[i].x - expect) < 1e-10);
            CHECK(traj.modes[a].free.samples[i].x == 0.0);
        }
    }
}

TEST_CASE("free evolution follows the Floquet mode") {
    auto trap = calibrate({0.5, 40.0, -0.014, 0.15, 0.3});
    KickSequence seq;
    seq.gate_time = 2.0;
    OracleOptions opt;
    opt.initial = {PhasePoint{0.3, -0.2}, PhasePoint{-0.1, 0.4}};
    for (int i = 1; i <= 20; ++i) {
        opt.sample_times.push_back(0.1 * i);
    }
    auto traj = integrate(seq, trap, opt);
    for (int a = 0; a < 2; ++a) {
        const auto &mode = trap.modes[a];
        // X = Re(c u) with c fixed by X(0) and X'(0) = omega Y(0).
        auto v0 = mode_function(mode.floquet, mode.params, 0.0);
        double x0 = opt.initial[a].x, xd0 = mode.omega * opt.initial[a].y;
        double det = v0.u.real() * v0.u_dot.imag() - v0.u.imag() * v0.u_dot.real();
        double cr = (x0 * v0.u_dot.imag() - xd0 * v0.u.imag()) / det;
        double ci = (v0.u.real() * xd0 - v0.u_dot.real() * x0) / det;
        for (size_t i = 0; i < opt.sample_times.size(); ++i) {
            auto v = mode_function(mode.floquet, mode.params, opt.sample_times[i]);
            double x = cr * v.u.real() + ci * v.u.imag();
            CHECK(std::abs(traj.modes[a].free.samples[i].x - x) < 1e-9);
        }
    }
}

TEST_CASE("oracle agrees with the closed forms") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> t(0.0, 4.0);
    std::uniform_int_distribution<int> z(-2, 2);
    for (double q : {0.01, 0.5}) {
        auto trap = calibrate({q, 40.0, -0.014, 0.15, 0.0});
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<double> times(8);
            for (auto &x : times) {
                x = t(rng);
            }
            std::sort(times.begin(), times.end());
            KickSequence seq;
            seq.gate_time = 4.0;
            for (double x : times) {
                seq.kicks.push_back({x, z(rng)});
            }
            auto a = evaluate(seq, trap, {});
            auto b = oracle_metrics(seq, trap, {});
            CHECK(std::abs(a.theta - b.theta) < 1e-6);
            for (int m = 0; m < 2; ++m) {
                CHECK(std::abs(a.displacements[m].dx - b.displacements[m].dx) < 1e-8);
                CHECK(std::abs(a.displacements[m].dy - b.displacements[m].dy) < 1e-8);
            }
        }
    }
}

TEST_CASE("excess micromotion offset does not change the gate") {
    auto trap = calibrate({0.3, 40.0, -0.014, 0.15, 0.0});
    KickSequence seq{{{0.3, 2}, {1.1, -3}, {2.0, 1}, {2.6, 2}}, 3.0, std::nullopt};
    auto base = oracle_metrics(seq, trap, {});
    double kick = 2.0 * std::numbers::sqrt2 * 0.15;
    OracleOptions opt;
    opt.initial = {PhasePoint{10.0 * kick, -5.0 * kick}, PhasePoint{-10.0 * kick, 3.0 * kick}};
    auto shifted = oracle_metrics(seq, trap, {}, opt);
    CHECK(std::abs(base.theta - shifted.theta) < 1e-8);
    CHECK(std::abs(base.infidelity - shifted.infidelity) < 1e-8);
}

TEST_CASE("action routes agree and the running phase ends at theta") {
    auto trap = calibrate({0.1, 40.0, -0.014, 0.15, 0.0});
    KickSequence seq{{{0.2, 1}, {0.9, -2}, {1.7, 2}}, 2.0, std::nullopt};
    OracleOptions opt;
    opt.sample_times = {0.5, 1.0, 2.0};
    auto traj = integrate(seq, trap, opt);
    auto phases = action_phase(traj, trap);
    CHECK(phases.route_gap < 1e-8);
    auto running = running_phase(traj, trap);
    REQUIRE(running.size() == 3);
    CHECK(std::abs(running.back() - phases.theta) < 1e-9);
    CHECK(std::abs(phases.theta - entangling_phase(seq, trap)) < 1e-6);
}
