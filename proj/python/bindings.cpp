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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fastgate/cli.hpp"
#include "fastgate/floquet.hpp"
#include "fastgate/gpg.hpp"
#include "fastgate/noise.hpp"
#include "fastgate/oracle.hpp"
#include "fastgate/serialize.hpp"

namespace py = pybind11;
using namespace fastgate;

namespace {

py::dict displacement_dict(const std::array<ModeDisplacement, 2> &d) {
    py::dict out;
    out["CM"] = py::make_tuple(d[0].dx, d[0].dy);
    out["BR"] = py::make_tuple(d[1].dx, d[1].dy);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Micromotion-aware fast two-qubit gate design";
    m.attr("__version__") = FASTGATE_VERSION;

    // Messages start with the error code name, e.g. "NotStable: ...".
    py::register_exception<Error>(m, "FastgateError");

    m.def("characteristic_exponent", &characteristic_exponent, py::arg("a"), py::arg("q"), py::arg("tol") = 1e-12);
    m.def("monodromy_exponent", &monodromy_exponent, py::arg("a"), py::arg("q"), py::arg("ode_tol") = 1e-13);
    m.def("is_stable", &is_stable, py::arg("a"), py::arg("q"), py::arg("rf_ratio") = 1.0);
    m.def("stability_edge_q", &stability_edge_q, py::arg("a"), py::arg("q_lo"), py::arg("q_hi"),
          py::arg("tol") = 1e-10);

    py::class_<TrapParams>(m, "TrapParams")
        .def(py::init<>())
        .def(py::init([](double q_x, double rf_ratio, double chi, double eta, double rf_phase) {
                 return TrapParams{q_x, rf_ratio, chi, eta, rf_phase};
             }),
             py::arg("q_x") = 0.0, py::arg("rf_ratio") = 40.0, py::arg("chi") = -0.014, py::arg("eta") = 0.15,
             py::arg("rf_phase") = 0.0)
        .def_readwrite("q_x", &TrapParams::q_x)
        .def_readwrite("rf_ratio", &TrapParams::rf_ratio)
        .def_readwrite("chi", &TrapParams::chi)
        .def_readwrite("eta", &TrapParams::eta)
        .def_readwrite("rf_phase", &TrapParams::rf_phase);

    py::class_<TrapConfig>(m, "TrapConfig")
        .def_readonly("params", &TrapConfig::params)
        .def_readonly("a_cm", &TrapConfig::a_cm)
        .def_readonly("a_br", &TrapConfig::a_br)
        .def_property_readonly("omegas", [](const TrapConfig &t) {
            return py::make_tuple(t.modes[0].omega, t.modes[1].omega);
        })
        .def("with_rf_phase", &TrapConfig::with_rf_phase)
        .def("to_text", &trap_to_text);
    m.def("calibrate", &calibrate, py::arg("params"));
    m.def("trap_from_text", &trap_from_text);

    py::class_<KickGroup>(m, "KickGroup")
        .def(py::init([](double t, int z) { return KickGroup{t, z}; }), py::arg("t"), py::arg("z"))
        .def_readwrite("t", &KickGroup::t)
        .def_readwrite("z", &KickGroup::z);

    py::class_<KickSequence>(m, "KickSequence")
        .def(py::init([](std::vector<std::pair<double, int>> kicks, double gate_time,
                         std::optional<double> rep_rate) {
                 KickSequence s;
                 for (auto [t, z] : kicks) {
                     s.kicks.push_back({t, z});
                 }
                 s.gate_time = gate_time;
                 s.rep_rate = rep_rate;
                 return s;
             }),
             py::arg("kicks"), py::arg("gate_time"), py::arg("rep_rate") = py::none())
        .def_readwrite("kicks", &KickSequence::kicks)
        .def_readwrite("gate_time", &KickSequence::gate_time)
        .def_readwrite("rep_rate", &KickSequence::rep_rate)
        .def_property_readonly("n_sdk", &KickSequence::n_sdk)
        .def("validate", &KickSequence::validate);

    py::class_<ThermalState>(m, "ThermalState")
        .def(py::init([](double cm, double br) { return ThermalState{cm, br}; }), py::arg("nbar_cm") = 0.0,
             py::arg("nbar_br") = 0.0)
        .def_readwrite("nbar_cm", &ThermalState::nbar_cm)
        .def_readwrite("nbar_br", &ThermalState::nbar_br);

    py::class_<GateMetrics>(m, "GateMetrics")
        .def_readonly("theta", &GateMetrics::theta)
        .def_readonly("phase_error", &GateMetrics::phase_error)
        .def_readonly("infidelity", &GateMetrics::infidelity)
        .def_readonly("n_sdk", &GateMetrics::n_sdk)
        .def_property_readonly("fidelity", &GateMetrics::fidelity)
        .def_property_readonly("displacements",
                               [](const GateMetrics &g) { return displacement_dict(g.displacements); });

    m.def("evaluate", &evaluate, py::arg("sequence"), py::arg("trap"), py::arg("thermal") = ThermalState{});
    m.def("oracle_metrics",
          [](const KickSequence &s, const TrapConfig &t, const ThermalState &th) { return oracle_metrics(s, t, th); },
          py::arg("sequence"), py::arg("trap"), py::arg("thermal") = ThermalState{},
          py::call_guard<py::gil_scoped_release>());
    m.def("baseline_infidelity", &baseline_infidelity);

    py::class_<SearchConfig>(m, "SearchConfig")
        .def(py::init<>())
        .def_readwrite("n_groups", &SearchConfig::n_groups)
        .def_readwrite("gate_time", &SearchConfig::gate_time)
        .def_readwrite("rep_rate", &SearchConfig::rep_rate)
        .def_readwrite("multistarts", &SearchConfig::multistarts)
        .def_readwrite("seed", &SearchConfig::seed)
        .def_readwrite("stage1_iters", &SearchConfig::stage1_iters)
        .def_readwrite("stage2_iters", &SearchConfig::stage2_iters)
        .def_readwrite("z_bound", &SearchConfig::z_bound)
        .def_readwrite("fidelity_target", &SearchConfig::fidelity_target)
        .def_readwrite("floor_fidelity", &SearchConfig::floor_fidelity)
        .def_readwrite("thermal", &SearchConfig::thermal)
        .def_readwrite("top_k", &SearchConfig::top_k)
        .def_readwrite("per_start_candidates", &SearchConfig::per_start_candidates)
        .def_readwrite("sparsity_weight", &SearchConfig::sparsity_weight)
        .def_readwrite("threads", &SearchConfig::threads);

    py::class_<GateSolution>(m, "GateSolution")
        .def_readonly("sequence", &GateSolution::sequence)
        .def_readonly("metrics", &GateSolution::metrics)
        .def_readonly("trap", &GateSolution::trap)
        .def_readonly("thermal", &GateSolution::thermal)
        .def("to_json", [](const GateSolution &s) { return solution_to_json(s); });
    m.def("solution_from_json", &solution_from_json);

    // Returns (best, ranked).
    m.def(
        "solve_gate",
        [](const TrapConfig &trap, const SearchConfig &cfg) {
            SolveResult r;
            {
                py::gil_scoped_release release;
                r = solve_gate(trap, cfg);
            }
            return py::make_tuple(r.best, r.ranked);
        },
        py::arg("trap"), py::arg("config"));

    m.def("population_bound", &population_bound, py::arg("f0"), py::arg("n_sdk"), py::arg("eps"));
    m.def("binomial_weights", &binomial_weights, py::arg("n"), py::arg("eps"), py::arg("m_max"));

    py::class_<NoiseChannel>(m, "NoiseChannel")
        .def(py::init([](const std::string &kind, double sigma, int samples, uint64_t seed) {
                 NoiseChannel c;
                 c.kind = parse_noise_kind(kind);
                 c.sigma = sigma;
                 c.samples = samples;
                 c.seed = seed;
                 return c;
             }),
             py::arg("kind"), py::arg("sigma"), py::arg("samples") = 1000, py::arg("seed") = 1)
        .def_property_readonly("kind", [](const NoiseChannel &c) { return noise_kind_name(c.kind); })
        .def_readwrite("sigma", &NoiseChannel::sigma)
        .def_readwrite("samples", &NoiseChannel::samples)
        .def_readwrite("seed", &NoiseChannel::seed)
        .def_readwrite("m_max", &NoiseChannel::m_max)
        .def_readwrite("flip_fraction", &NoiseChannel::flip_fraction)
        .def_readwrite("bins", &NoiseChannel::bins)
        .def_readwrite("common_random_numbers", &NoiseChannel::common_random_numbers);

    py::class_<NoiseReport>(m, "NoiseReport")
        .def_readonly("baseline", &NoiseReport::baseline)
        .def_readonly("mean", &NoiseReport::mean)
        .def_readonly("variance", &NoiseReport::variance)
        .def_readonly("standard_error", &NoiseReport::standard_error)
        .def_readonly("samples", &NoiseReport::samples)
        .def_readonly("failures", &NoiseReport::failures)
        .def_readonly("tail_mass", &NoiseReport::tail_mass)
        .def_readonly("warnings", &NoiseReport::warnings);

    m.def(
        "run_noise",
        [](const GateSolution &sol, const NoiseChannel &ch, bool direct, int threads) {
            py::gil_scoped_release release;
            if (ch.kind != NoiseKind::SdkError) {
                return mc_parameter_noise(sol, ch, sol.thermal, threads);
            }
            return direct ? mc_sdk_errors_direct(sol, ch, sol.thermal, threads)
                          : mc_sdk_errors(sol, ch, sol.thermal, threads);
        },
        py::arg("solution"), py::arg("channel"), py::arg("direct") = false, py::arg("threads") = 1);

    // Same entry point as the command-line tool; returns its exit code.
    m.def("cli", [](const std::vector<std::string> &args) { return cli::run(args); }, py::arg("args"));
}
