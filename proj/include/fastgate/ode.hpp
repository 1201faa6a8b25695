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

#ifndef FASTGATE_ODE_HPP
#define FASTGATE_ODE_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/controlled_step_result.hpp>
#include <boost/numeric/odeint/stepper/generation.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "fastgate/errors.hpp"

namespace fastgate {

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double max_step = 0.1;
    double initial_step = 1e-3;
    long max_steps = 50'000'000;
};

// Adaptive RKF78 stepper that lands exactly on requested times.
// `dt` persists between calls so consecutive segments reuse the step estimate.
template <class State>
class OdeStepper {
   public:
    explicit OdeStepper(const OdeOptions &options)
        : options_(options),
          stepper_(boost::numeric::odeint::make_controlled(
              options.abs_tol, options.rel_tol, boost::numeric::odeint::runge_kutta_fehlberg78<State>())),
          dt_(options.initial_step) {}

    template <class System>
    void advance(System &&system, State &x, double &t, double t_end) {
        namespace odeint = boost::numeric::odeint;
        long steps = 0;
        while (t < t_end) {
            double h = std::min({dt_, options_.max_step, t_end - t});
            // Snap onto t_end when the remainder is negligible.
            bool last = (t_end - t) <= h * (1.0 + 1e-12);
            if (last) {
                h = t_end - t;
            }
            double t_try = t;
            double h_try = h;
            odeint::controlled_step_result res = stepper_.try_step(system, x, t_try, h_try);
            if (res == odeint::success) {
                t = last ? t_end : t_try;
                if (!last || h_try > dt_) {
                    dt_ = h_try;
                }
            } else {
                dt_ = h_try;
                if (dt_ < 1e-15 * std::max(1.0, std::abs(t))) {
                    fail(ErrorCode::IntegratorFailure, "step size underflow at t=" + std::to_string(t));
                }
            }
            if (++steps > options_.max_steps) {
                fail(ErrorCode::IntegratorFailure, "step budget exhausted at t=" + std::to_string(t));
            }
        }
    }

   private:
    OdeOptions options_;
    decltype(boost::numeric::odeint::make_controlled(
        0.0, 0.0, boost::numeric::odeint::runge_kutta_fehlberg78<State>())) stepper_;
    double dt_;
};

}  // namespace fastgate

#endif
