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

#ifndef FASTGATE_SRC_LBFGS_HPP
#define FASTGATE_SRC_LBFGS_HPP

#include <cmath>
#include <deque>
#include <vector>

namespace fastgate::detail {

struct LbfgsResult {
    double value = 0.0;
    int iterations = 0;
};

// Unconstrained limited-memory BFGS with Armijo backtracking.
// f(x, grad) returns the value and fills grad. x is updated in place.
template <class F>
LbfgsResult lbfgs_minimize(F &&f, std::vector<double> &x, int max_iter, double f_tol = 1e-16, int memory = 10) {
    const size_t n = x.size();
    LbfgsResult res;
    if (n == 0) {
        std::vector<double> g;
        res.value = f(x, g);
        return res;
    }
    std::vector<double> g(n), g_new(n), d(n), x_new(n);
    double fx = f(x, g);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> alpha(memory);
    int stall = 0;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        // Two-loop recursion for d = -H g.
        d = g;
        const size_t k = s_hist.size();
        for (size_t i = k; i-- > 0;) {
            double a = 0.0;
            for (size_t j = 0; j < n; ++j) {
                a += s_hist[i][j] * d[j];
            }
            a *= rho_hist[i];
            alpha[i] = a;
            for (size_t j = 0; j < n; ++j) {
                d[j] -= a * y_hist[i][j];
            }
        }
        double gamma = 1.0;
        if (k > 0) {
            double yy = 0.0, sy = 0.0;
            for (size_t j = 0; j < n; ++j) {
                yy += y_hist[k - 1][j] * y_hist[k - 1][j];
                sy += s_hist[k - 1][j] * y_hist[k - 1][j];
            }
            gamma = sy / yy;
        } else {
            double gn = 0.0;
            for (double v : g) {
                gn += v * v;
            }
            gamma = gn > 0.0 ? 1e-2 / std::sqrt(gn) : 1.0;
        }
        for (size_t j = 0; j < n; ++j) {
            d[j] *= gamma;
        }
        for (size_t i = 0; i < k; ++i) {
            double b = 0.0;
            for (size_t j = 0; j < n; ++j) {
                b += y_hist[i][j] * d[j];
            }
            b *= rho_hist[i];
            for (size_t j = 0; j < n; ++j) {
                d[j] += s_hist[i][j] * (alpha[i] - b);
            }
        }
        double gd = 0.0;
        for (size_t j = 0; j < n; ++j) {
            d[j] = -d[j];
            gd += g[j] * d[j];
        }
        if (!(gd < 0.0)) {
            // Not a descent direction: restart from steepest descent.
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            double gn = 0.0;
            for (size_t j = 0; j < n; ++j) {
                gn += g[j] * g[j];
            }
            if (gn == 0.0) {
                break;
            }
            const double scale = 1e-2 / std::sqrt(gn);
            gd = 0.0;
            for (size_t j = 0; j < n; ++j) {
                d[j] = -scale * g[j];
                gd += g[j] * d[j];
            }
        }
        double step = 1.0, f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (size_t j = 0; j < n; ++j) {
                x_new[j] = x[j] + step * d[j];
            }
            f_new = f(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * gd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            break;
        }
        std::vector<double> s(n), y(n);
        double sy = 0.0;
        for (size_t j = 0; j < n; ++j) {
            s[j] = x_new[j] - x[j];
            y[j] = g_new[j] - g[j];
            sy += s[j] * y[j];
        }
        const double drop = fx - f_new;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (sy > 1e-300) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        stall = drop <= f_tol * std::max(1.0, std::abs(fx)) ? stall + 1 : 0;
        if (stall >= 3) {
            break;
        }
    }
    res.value = fx;
    return res;
}

}  // namespace fastgate::detail

#endif
