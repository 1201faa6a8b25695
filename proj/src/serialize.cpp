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

#include "fastgate/serialize.hpp"

#include <unistd.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fastgate {

namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::set<std::string> kTrapKeys = {"q_x", "rf_ratio", "chi", "eta", "rf_phase", "a_cm", "a_br"};

Json trap_json(const TrapConfig &trap) {
    Json j;
    j["q_x"] = trap.params.q_x;
    j["rf_ratio"] = trap.params.rf_ratio;
    j["chi"] = trap.params.chi;
    j["eta"] = trap.params.eta;
    j["rf_phase"] = trap.params.rf_phase;
    j["a_cm"] = trap.a_cm;
    j["a_br"] = trap.a_br;
    return j;
}

Json metrics_json(const GateMetrics &m) {
    Json j;
    j["theta"] = m.theta;
    j["phase_error"] = m.phase_error;
    j["infidelity"] = m.infidelity;
    j["fidelity"] = m.fidelity();
    j["n_sdk"] = m.n_sdk;
    Json d;
    for (int k = 0; k < 2; ++k) {
        d[mode_name(static_cast<ModeLabel>(k))] = {{"dx", m.displacements[k].dx}, {"dy", m.displacements[k].dy}};
    }
    j["displacements"] = d;
    return j;
}

template <class T>
T get(const Json &j, const char *key) {
    if (!j.contains(key)) {
        fail(ErrorCode::ConfigError, std::string("solution file lacks '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::ConfigError, std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string &text, const std::string &what) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
        fail(ErrorCode::ConfigError, "cannot parse '" + text + "' as a number for " + what);
    }
    return v;
}

std::map<std::string, std::string> parse_key_values(const std::string &text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": empty key");
        }
        if (!out.emplace(key, value).second) {
            fail(ErrorCode::ConfigError, "duplicate key '" + key + "'");
        }
    }
    return out;
}

std::string trap_to_text(const TrapConfig &trap) {
    std::ostringstream os;
    os << "# fastgate trap configuration; a_cm and a_br pin the calibration\n";
    os << "q_x = " << format_double(trap.params.q_x) << "\n";
    os << "rf_ratio = " << format_double(trap.params.rf_ratio) << "\n";
    os << "chi = " << format_double(trap.params.chi) << "\n";
    os << "eta = " << format_double(trap.params.eta) << "\n";
    os << "rf_phase = " << format_double(trap.params.rf_phase) << "\n";
    os << "a_cm = " << format_double(trap.a_cm) << "\n";
    os << "a_br = " << format_double(trap.a_br) << "\n";
    return os.str();
}

TrapConfig trap_from_text(const std::string &text) {
    const auto kv = parse_key_values(text);
    for (const auto &[k, v] : kv) {
        if (!kTrapKeys.count(k)) {
            fail(ErrorCode::ConfigError, "unknown trap key '" + k + "'");
        }
    }
    TrapParams p;
    auto read = [&](const char *key, double &dst) {
        if (auto it = kv.find(key); it != kv.end()) {
            dst = parse_double(it->second, key);
        }
    };
    if (!kv.count("q_x")) {
        fail(ErrorCode::ConfigError, "trap configuration needs q_x");
    }
    read("q_x", p.q_x);
    read("rf_ratio", p.rf_ratio);
    read("chi", p.chi);
    read("eta", p.eta);
    read("rf_phase", p.rf_phase);
    const bool has_cm = kv.count("a_cm") > 0, has_br = kv.count("a_br") > 0;
    if (has_cm != has_br) {
        fail(ErrorCode::ConfigError, "a_cm and a_br must be given together");
    }
    if (!has_cm) {
        return calibrate(p);
    }
    double a_cm = 0.0, a_br = 0.0;
    read("a_cm", a_cm);
    read("a_br", a_br);
    return assemble_trap(p, a_cm, a_br);
}

std::string solution_to_json(const GateSolution &sol, bool record_timing, const std::vector<GateSolution> &runners_up) {
    Json j;
    j["format"] = kSolutionFormat;
    j["trap"] = trap_json(sol.trap);
    j["thermal"] = {{"nbar_cm", sol.thermal.nbar_cm}, {"nbar_br", sol.thermal.nbar_br}};
    Json seq;
    seq["gate_time"] = sol.sequence.gate_time;
    seq["rep_rate"] = sol.sequence.rep_rate ? Json(*sol.sequence.rep_rate) : Json(nullptr);
    Json kicks = Json::array();
    for (const auto &k : sol.sequence.kicks) {
        kicks.push_back({{"t", k.t}, {"z", k.z}});
    }
    seq["kicks"] = kicks;
    j["sequence"] = seq;
    j["metrics"] = metrics_json(sol.metrics);
    const auto &p = sol.provenance;
    Json prov;
    prov["seed"] = p.seed;
    prov["start"] = p.start;
    prov["multistarts"] = p.multistarts;
    prov["stage1_iters"] = p.stage1_iters;
    prov["stage2_iters"] = p.stage2_iters;
    prov["n_groups"] = p.n_groups;
    prov["z_bound"] = p.z_bound;
    prov["fidelity_target"] = p.fidelity_target;
    if (record_timing) {
        prov["wall_time_s"] = p.wall_time_s;
    }
    prov["version"] = p.version;
    prov["conventions"] = {{"time_unit", "1/omega_cm"},
                           {"rep_rate", "2 pi f_rep / omega_cm"},
                           {"kick", "dY = 2^(3/2) eta_alpha z s"},
                           {"phase_sum", "every earlier kick"},
                           {"momentum_response", "sin*kappa_s + cos*kappa_c"},
                           {"normalization", "constant wronskian ratio"}};
    j["provenance"] = prov;
    if (!runners_up.empty()) {
        Json r = Json::array();
        for (const auto &s : runners_up) {
            r.push_back({{"start", s.provenance.start},
                         {"n_sdk", s.metrics.n_sdk},
                         {"infidelity", s.metrics.infidelity},
                         {"theta", s.metrics.theta}});
        }
        j["ranked"] = r;
    }
    return j.dump(2) + "\n";
}

GateSolution solution_from_json(const std::string &text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::ConfigError, std::string("malformed solution JSON: ") + e.what());
    }
    if (get<std::string>(j, "format") != kSolutionFormat) {
        fail(ErrorCode::ConfigError, "unsupported solution format");
    }
    GateSolution sol;
    const Json &t = j.at("trap");
    TrapParams p;
    p.q_x = get<double>(t, "q_x");
    p.rf_ratio = get<double>(t, "rf_ratio");
    p.chi = get<double>(t, "chi");
    p.eta = get<double>(t, "eta");
    p.rf_phase = get<double>(t, "rf_phase");
    sol.trap = assemble_trap(p, get<double>(t, "a_cm"), get<double>(t, "a_br"));
    const Json &th = j.at("thermal");
    sol.thermal = {get<double>(th, "nbar_cm"), get<double>(th, "nbar_br")};
    const Json &seq = j.at("sequence");
    sol.sequence.gate_time = get<double>(seq, "gate_time");
    if (seq.contains("rep_rate") && !seq.at("rep_rate").is_null()) {
        sol.sequence.rep_rate = get<double>(seq, "rep_rate");
    }
    for (const auto &k : seq.at("kicks")) {
        sol.sequence.kicks.push_back({get<double>(k, "t"), get<int>(k, "z")});
    }
    sol.sequence.validate();
    if (j.contains("provenance")) {
        const Json &pr = j.at("provenance");
        sol.provenance.seed = pr.value("seed", uint64_t{0});
        sol.provenance.start = pr.value("start", 0);
        sol.provenance.multistarts = pr.value("multistarts", 0);
        sol.provenance.stage1_iters = pr.value("stage1_iters", 0);
        sol.provenance.stage2_iters = pr.value("stage2_iters", 0);
        sol.provenance.n_groups = pr.value("n_groups", 0);
        sol.provenance.z_bound = pr.value("z_bound", 0);
        sol.provenance.fidelity_target = pr.value("fidelity_target", 0.0);
        sol.provenance.wall_time_s = pr.value("wall_time_s", 0.0);
        sol.provenance.version = pr.value("version", std::string());
    }
    sol.metrics = evaluate(sol.sequence, sol.trap, sol.thermal);
    return sol;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string> &fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += csv_field(fields[i]);
    }
    return out + "\n";
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::ConfigError, "cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_atomic(const std::string &path, const std::string &content) {
    if (path == "-" || path.empty()) {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail(ErrorCode::ConfigError, "cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            fail(ErrorCode::ConfigError, "write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::ConfigError, "cannot move output into place at '" + path + "'");
    }
}

}  // namespace fastgate
