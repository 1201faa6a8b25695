# Copyright 2026 The fastgate Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import fastgate


def test_floquet_and_stability():
    assert fastgate.characteristic_exponent(0.01, 0.0) == pytest.approx(0.1, rel=1e-14)
    beta = fastgate.characteristic_exponent(0.0, 0.5)
    assert abs(beta - fastgate.monodromy_exponent(0.0, 0.5)) < 1e-9
    assert fastgate.is_stable(0.0, 0.5)
    assert not fastgate.is_stable(0.0, 1.0)
    assert fastgate.stability_edge_q(0.0, 0.5, 1.0) == pytest.approx(0.908, abs=1e-3)


def test_calibration_and_errors():
    trap = fastgate.calibrate(fastgate.TrapParams(q_x=0.3))
    cm, br = trap.omegas
    assert cm == pytest.approx(1.0, abs=1e-10)
    assert br == pytest.approx(0.986, abs=1e-10)
    assert fastgate.trap_from_text(trap.to_text()).a_cm == trap.a_cm
    with pytest.raises(fastgate.FastgateError):
        fastgate.calibrate(fastgate.TrapParams(q_x=0.01, eta=-1.0))


def test_evaluate_matches_oracle():
    trap = fastgate.calibrate(fastgate.TrapParams(q_x=0.5))
    seq = fastgate.KickSequence([(0.3, 2), (1.4, -3), (4.0, 1)], gate_time=2 * math.pi)
    a = fastgate.evaluate(seq, trap)
    b = fastgate.oracle_metrics(seq, trap)
    assert abs(a.theta - b.theta) < 1e-6
    for mode in ("CM", "BR"):
        for x, y in zip(a.displacements[mode], b.displacements[mode]):
            assert abs(x - y) < 1e-8
    empty = fastgate.KickSequence([], gate_time=1.0)
    assert fastgate.evaluate(empty, trap).infidelity == fastgate.baseline_infidelity()


def test_solve_and_round_trip():
    trap = fastgate.calibrate(fastgate.TrapParams(q_x=0.5))
    cfg = fastgate.SearchConfig()
    cfg.gate_time = 2 * math.pi
    cfg.multistarts = 2
    cfg.stage1_iters = 100
    cfg.stage2_iters = 100
    best, ranked = fastgate.solve_gate(trap, cfg)
    assert ranked and best.metrics.infidelity == ranked[0].metrics.infidelity
    text = best.to_json()
    assert json.loads(text)["format"] == "fastgate-solution/1"
    again = fastgate.solution_from_json(text)
    assert again.metrics.infidelity == best.metrics.infidelity
    assert again.to_json() == text


def test_noise():
    assert fastgate.population_bound(1.0, 40, 0.007) == pytest.approx(0.5184, abs=1e-12)
    assert sum(fastgate.binomial_weights(40, 0.007, 40)) == pytest.approx(1.0, abs=1e-14)
    trap = fastgate.calibrate(fastgate.TrapParams(q_x=0.01))
    sol = fastgate.solution_from_json(
        json.dumps(
            {
                "format": "fastgate-solution/1",
                "trap": {"q_x": 0.01, "rf_ratio": 40.0, "chi": -0.014, "eta": 0.15, "rf_phase": 0.0,
                         "a_cm": trap.a_cm, "a_br": trap.a_br},
                "thermal": {"nbar_cm": 0.0, "nbar_br": 0.0},
                "sequence": {"gate_time": 6.0, "rep_rate": None, "kicks": [{"t": 0.5, "z": 2}, {"t": 3.0, "z": -2}]},
            }
        )
    )
    ch = fastgate.NoiseChannel("sdk_error", 0.01, samples=200)
    report = fastgate.run_noise(sol, ch)
    assert report.samples > 0 and report.mean > 0.0
    with pytest.raises(fastgate.FastgateError):
        fastgate.NoiseChannel("bogus", 0.1)


def test_cli_entry(tmp_path):
    out = tmp_path / "trap.txt"
    assert fastgate.cli(["calibrate", "--qx", "0.1", "--out", str(out)]) == 0
    assert "a_cm" in out.read_text()
    assert fastgate.cli(["nonsense"]) == 2
