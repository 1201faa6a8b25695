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

// O(N) evaluation of the gate cost and its gradients, for the optimizer.
//
// With u the Floquet mode and W its Wronskian, Im(u(t) u*(t')) = W omega G(t, t'),
// so the phase double sum collapses onto prefix sums P_n = sum_{m<n} z_m u_m*.
// Kicks must be sorted by time. Agrees with gatekernel::evaluate to rounding.

#ifndef FASTGATE_GATE_MODEL_HPP
#define FASTGATE_GATE_MODEL_HPP

#include <array>
#include <complex>
#include <vector>

#include "fastgate/gatekernel.hpp"

namespace fastgate {

class GateModel {
   public:
    GateModel(const TrapConfig &trap, const ThermalState &thermal, double gate_time);

    // Mode values u and u' at fixed kick times, per mode.
    struct Basis {
        std::array<std::vector<std::complex<double>>, 2> u;
        std::array<std::vector<std::complex<double>>, 2> u_dot;
    };

    struct Parts {
        double theta = 0.0;
        std::array<ModeDisplacement, 2> displacements{};
        double cost = 0.0;
    };

    Basis basis(const std::vector<double> &t) const;

    // Cost at fixed times; grad_z (if non-null) receives dcost/dz.
    Parts evaluate(const Basis &b, const std::vector<double> &z, std::vector<double> *grad_z = nullptr,
                   std::vector<double> *grad_t = nullptr) const;

    Parts evaluate(const std::vector<double> &t, const std::vector<double> &z, std::vector<double> *grad_z = nullptr,
                   std::vector<double> *grad_t = nullptr) const;

    double gate_time() const { return gate_time_; }

   private:
    struct ModeConst {
        const ModeSpec *mode;
        double phase_scale;  // 8 eta^2 b^A b^B / W
        double disp_scale;   // 2^{3/2} eta / W
        double weight;       // (1/2 + nbar) (b_A^2 + b_B^2)
        std::complex<double> u_g;
        std::complex<double> v_g;  // u'(t_g) / omega
    };
    std::array<ModeConst, 2> modes_;
    double gate_time_;
};

}  // namespace fastgate

#endif
