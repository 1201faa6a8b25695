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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "fastgate/cli.hpp"
#include "fastgate/serialize.hpp"

using namespace fastgate;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "fastgate_cli_test";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

const std::vector<std::string> kSmallSearch = {"--qx",         "0.5", "--gate-time",    "1",  "--multistarts",
                                               "2",            "--stage1-iters", "100", "--stage2-iters", "100"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string> &tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(cli::exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(cli::exit_code_for(ErrorCode::DomainError) == 2);
    CHECK(cli::exit_code_for(ErrorCode::NoSolution) == 4);
    CHECK(cli::exit_code_for(ErrorCode::IntegratorFailure) == 3);
    CHECK(cli::run(std::vector<std::string>{"frobnicate"}) == 2);
    CHECK(cli::run(std::vector<std::string>{"calibrate", "--qx", "abc"}) == 2);
    CHECK(cli::run(std::vector<std::string>{"calibrate", "--eta", "-1", "--out", "-"}) == 2);
    CHECK(cli::run(std::vector<std::string>{"calibrate", "--rf-ratio", "1.5", "--out", "-"}) == 3);
}

TEST_CASE("calibrate writes a reloadable trap") {
    TempDir dir;
    REQUIRE(cli::run(std::vector<std::string>{"calibrate", "--qx", "0.3", "--out", dir / "trap.txt"}) == 0);
    auto trap = trap_from_text(read_file(dir / "trap.txt"));
    CHECK(trap.a_cm == calibrate({0.3, 40.0, -0.014, 0.15, 0.0}).a_cm);
}

TEST_CASE("config files expand into flags") {
    TempDir dir;
    write_atomic(dir / "cfg.txt", "qx = 0.1\nchi = -0.02\n");
    REQUIRE(cli::run(std::vector<std::string>{"calibrate", "--config", dir / "cfg.txt", "--out", dir / "t.txt"}) == 0);
    auto trap = trap_from_text(read_file(dir / "t.txt"));
    CHECK(trap.params.q_x == 0.1);
    CHECK(trap.params.chi == -0.02);
    write_atomic(dir / "bad.txt", "nonsense = 1\n");
    CHECK(cli::run(std::vector<std::string>{"calibrate", "--config", dir / "bad.txt"}) == 2);
}

TEST_CASE("solve, eval and verify") {
    TempDir dir;
    auto solve = with({"solve"}, kSmallSearch);
    REQUIRE(cli::run(with(solve, {"--out", dir / "a.json", "--threads", "1"})) == 0);
    REQUIRE(cli::run(with(solve, {"--out", dir / "b.json", "--threads", "3"})) == 0);
    CHECK(read_file(dir / "a.json") == read_file(dir / "b.json"));

    REQUIRE(cli::run(std::vector<std::string>{"eval", "--solution", dir / "a.json", "--out", dir / "e.json"}) == 0);
    CHECK(read_file(dir / "e.json").find("infidelity") != std::string::npos);
    CHECK(cli::run(std::vector<std::string>{"verify", "--solution", dir / "a.json", "--out", dir / "v.json"}) == 0);
    CHECK(cli::run(std::vector<std::string>{"traj", "--solution", dir / "a.json", "--samples", "20", "--out",
                                            dir / "t.csv"}) == 0);
    CHECK(read_file(dir / "t.csv").rfind("t,", 0) == 0);

    CHECK(cli::run(with(solve, {"--floor", "1.0", "--out", dir / "c.json"})) == 4);
}

TEST_CASE("noise and stability tables") {
    TempDir dir;
    REQUIRE(cli::run(with(with({"solve"}, kSmallSearch), {"--out", dir / "s.json"})) == 0);
    auto noise = std::vector<std::string>{"noise", "--solution", dir / "s.json", "--channel", "timing_jitter",
                                          "--sigma", "1e-5,1e-4", "--samples", "50"};
    REQUIRE(cli::run(with(noise, {"--out", dir / "n1.json", "--threads", "1"})) == 0);
    REQUIRE(cli::run(with(noise, {"--out", dir / "n2.json", "--threads", "4"})) == 0);
    CHECK(read_file(dir / "n1.json") == read_file(dir / "n2.json"));
    CHECK(cli::run(std::vector<std::string>{"noise", "--solution", dir / "s.json", "--channel", "bogus"}) == 2);

    REQUIRE(cli::run(std::vector<std::string>{"stability", "--na", "3", "--nq", "4", "--out", dir / "st.csv"}) == 0);
    auto csv = read_file(dir / "st.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}
