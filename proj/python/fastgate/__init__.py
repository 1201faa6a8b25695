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

"""Micromotion-aware fast two-qubit gate design."""

from ._core import (
    FastgateError,
    GateMetrics,
    GateSolution,
    KickGroup,
    KickSequence,
    NoiseChannel,
    NoiseReport,
    SearchConfig,
    ThermalState,
    TrapConfig,
    TrapParams,
    __version__,
    baseline_infidelity,
    binomial_weights,
    calibrate,
    characteristic_exponent,
    cli,
    evaluate,
    is_stable,
    monodromy_exponent,
    oracle_metrics,
    population_bound,
    run_noise,
    solution_from_json,
    solve_gate,
    stability_edge_q,
    trap_from_text,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
