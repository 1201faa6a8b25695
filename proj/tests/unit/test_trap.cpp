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

#include "doctest.h"
#include "fastgate/errors.hpp"
#include "fastgate/trap.hpp"

using namespace fastgate;

TEST_CASE("harmonic calibration") {
    auto t = calibrate({0.0, 40.0, -0.014, 0.15, 0.0});
    CHECK(t.a_cm == (2.0 / 40.0) * (2.0 / 40.0));
    CHECK(t.modes[0].floquet.beta == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(t.modes[1].omega == doctest::Approx(0.986).epsilon(1e-12));
}

TEST_CASE("calibrated a values") {
    // Frozen; each is checked by re-evaluating the exponent.
    struct Row {
        double q, a_cm, a_br;
    };
    const Row rows[] = {
        {0.01, 0.002449875239030255, 0.0023803687315773407},
        {0.1, -0.002507020848858418, -0.0025761830965646015},
        {0.3, -0.04217450554168363, -0.042240990967117031},
        {0.5, -0.11954805610695012, -0.11960969445128104},
    };
    for (const auto &r : rows) {
        auto t = calibrate({r.q, 40.0, -0.014, 0.15, 0.0});
        CHECK(t.a_cm == doctest::Approx(r.a_cm).epsilon(1e-12));
        CHECK(t.a_br == doctest::Approx(r.a_br).epsilon(1e-12));
        CHECK(std::abs(characteristic_exponent(t.a_cm, r.q) - 0.05) < 1e-10);
        CHECK(std::abs(characteristic_exponent(t.a_br, r.q) - 0.05 * 0.986) < 1e-10);
        // Same secular limit for every q.
        CHECK(std::abs(t.modes[0].omega - 1.0) < 1e-10);
        CHECK(std::abs(t.modes[1].omega - 0.986) < 1e-10);
        CHECK(t.modes[0].eta == doctest::Approx(0.15));
    }
}

TEST_CASE("assemble_trap checks stored values") {
    auto t = calibrate({0.3, 40.0, -0.014, 0.15, 0.0});
    auto u = assemble_trap(t.params, t.a_cm, t.a_br);
    CHECK(u.modes[1].omega == t.modes[1].omega);
    CHECK_THROWS_AS(assemble_trap(t.params, t.a_cm + 1e-4, t.a_br), Error);
    auto shifted = t.with_rf_phase(1.2);
    CHECK(shifted.modes[0].params.rf_phase == 1.2);
    CHECK(shifted.a_cm == t.a_cm);
}

TEST_CASE("bad parameters") {
    CHECK_THROWS_AS(calibrate({0.01, 1.0, -0.014, 0.15, 0.0}), Error);  // beta target 2
    CHECK_THROWS_AS(calibrate({0.01, 40.0, -1.5, 0.15, 0.0}), Error);
    CHECK_THROWS_AS(calibrate({0.01, 40.0, -0.014, -0.15, 0.0}), Error);
}

TEST_CASE("Coulomb shift") {
    CHECK(coulomb_mode_shift(0.01, 0.0).a_br == coulomb_mode_shift(0.01, 0.0).a_cm);
    CHECK(coulomb_mode_shift(0.01, 1e-4).a_br < 0.01);

    // The Coulomb construction and the frequency calibration land on the same a_br.
    auto t = calibrate({0.01, 40.0, -0.014, 0.15, 0.0});
    double gamma = t.a_cm - t.a_br;
    CHECK(gamma > 0.0);
    auto s = coulomb_mode_shift(t.a_cm, gamma);
    CHECK(std::abs(s.a_br - t.a_br) < 1e-8);
    double beta_ratio = characteristic_exponent(s.a_br, 0.01) / characteristic_exponent(s.a_cm, 0.01);
    CHECK(beta_ratio == doctest::Approx(0.986).epsilon(1e-9));

    // Spacing that produces this gamma, and its Hessian offset.
    double d = std::cbrt(8.0 / (40.0 * 40.0 * gamma));
    CHECK(coulomb_gamma_norm(40.0, d) == doctest::Approx(gamma).epsilon(1e-12));
    MathieuParams p{t.a_cm, 0.01, 40.0, 0.0};
    auto h = hessian_eigenvalues(d, p);
    CHECK((h.cm.offset - h.br.offset) / 400.0 == doctest::Approx(gamma).epsilon(1e-12));
}

TEST_CASE("Hessian modes") {
    MathieuParams p{0.0025, 0.1, 40.0, 0.0};
    auto near = hessian_eigenvalues(3.0, p);
    auto far = hessian_eigenvalues(6.0, p);
    CHECK((near.cm.offset - near.br.offset) / (far.cm.offset - far.br.offset) == doctest::Approx(8.0));
    CHECK(std::abs(hessian_eigenvalues(1e6, p).br.offset - near.cm.offset) < 1e-15);
    CHECK(near.cm.amplitude == near.br.amplitude);
    const double h = std::sqrt(0.5);
    CHECK(near.vectors[0][0] == doctest::Approx(h));
    CHECK(near.vectors[0][1] == doctest::Approx(h));
    CHECK(near.vectors[1][0] == doctest::Approx(-h));
    CHECK(near.vectors[1][1] == doctest::Approx(h));
    CHECK_THROWS_AS(hessian_eigenvalues(0.0, p), Error);
}

TEST_CASE("mean occupation") {
    CHECK(mean_occupation(1.0, 0.0) == 0.0);
    CHECK(mean_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (double r : {50.0, 200.0}) {
        CHECK(mean_occupation(1.0, r) == doctest::Approx(r - 0.5).epsilon(0.01));
    }
    CHECK_THROWS_AS(mean_occupation(0.0, 1.0), Error);
}
