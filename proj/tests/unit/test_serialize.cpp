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

#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "fastgate/serialize.hpp"

using namespace fastgate;

TEST_CASE("doubles round-trip exactly") {
    for (double v : {0.0, -0.0, 1.0, 0.1, std::numbers::pi, 1e-300, -2.5e17, 0.002449875239030255,
                     std::numeric_limits<double>::denorm_min()}) {
        double back = parse_double(format_double(v), "v");
        CHECK(std::bit_cast<uint64_t>(back) == std::bit_cast<uint64_t>(v));
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("0.5x", "v"), Error);
    CHECK_THROWS_AS(parse_double("", "v"), Error);
}

TEST_CASE("key value parsing") {
    auto kv = parse_key_values("# trap\nq_x = 0.3\n\n  chi=-0.014  # splitting\n");
    CHECK(kv.size() == 2);
    CHECK(kv["q_x"] == "0.3");
    CHECK(kv["chi"] == "-0.014");
    CHECK_THROWS_AS(parse_key_values("q_x = 1\nq_x = 2\n"), Error);
    CHECK_THROWS_AS(parse_key_values("just words\n"), Error);
}

TEST_CASE("trap text round trip") {
    auto trap = calibrate({0.3, 40.0, -0.014, 0.15, 0.25});
    auto back = trap_from_text(trap_to_text(trap));
    CHECK(back.a_cm == trap.a_cm);
    CHECK(back.a_br == trap.a_br);
    CHECK(back.params.rf_phase == 0.25);
    CHECK(back.modes[1].omega == trap.modes[1].omega);

    auto fresh = trap_from_text("q_x = 0.3\n");
    CHECK(fresh.a_cm == trap.a_cm);
    CHECK_THROWS_AS(trap_from_text("q_x = 0.3\nbogus = 1\n"), Error);
    CHECK_THROWS_AS(trap_from_text("q_x = 0.3\na_cm = 0.1\n"), Error);
}

TEST_CASE("solution JSON round trip") {
    GateSolution sol;
    sol.trap = calibrate({0.5, 40.0, -0.014, 0.15, 0.0});
    sol.thermal = {0.05, 0.1};
    sol.sequence = {{{0.1, 3}, {0.35, -2}, {2.2, 1}}, 3.0, 800.0};
    sol.metrics = evaluate(sol.sequence, sol.trap, sol.thermal);
    sol.provenance.seed = 42;
    sol.provenance.wall_time_s = 1.5;
    auto text = solution_to_json(sol);
    CHECK(text.find("wall_time") == std::string::npos);
    CHECK(solution_to_json(sol, true).find("wall_time") != std::string::npos);

    auto back = solution_from_json(text);
    CHECK(back.metrics.theta == sol.metrics.theta);
    CHECK(back.metrics.infidelity == sol.metrics.infidelity);
    CHECK(back.sequence.rep_rate == sol.sequence.rep_rate);
    CHECK(back.thermal.nbar_br == 0.1);
    CHECK(back.provenance.seed == 42);
    CHECK(solution_to_json(back) == text);

    CHECK_THROWS_AS(solution_from_json("{}"), Error);
    CHECK_THROWS_AS(solution_from_json("not json"), Error);
}

TEST_CASE("CSV quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_row({"1", "x,y"}) == "1,\"x,y\"\n");
}

TEST_CASE("atomic write") {
    auto dir = std::filesystem::temp_directory_path() / "fastgate_serialize_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "out.txt").string();
    write_atomic(path, "first");
    write_atomic(path, "second");
    CHECK(read_file(path) == "second");
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_file(path), Error);
}
