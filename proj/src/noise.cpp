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

#include "fastgate/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fastgate/parallel.hpp"

namespace fastgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTailWarning = 1e-4;

struct Sample {
    double value = 0.0;
    bool ok = false;
};

// Explicit unit kicks at their own times; coincident kicks merge.
KickSequence from_units(std::vector<KickGroup> units, double gate_time) {
    std::stable_sort(units.begin(), units.end(), [](const KickGroup &a, const KickGroup &b) { return a.t < b.t; });
    KickSequence seq;
    seq.gate_time = gate_time;
    for (const auto &u : units) {
        if (!seq.kicks.empty() && seq.kicks.back().t == u.t) {
            seq.kicks.back().z += u.z;
        } else {
            seq.kicks.push_back(u);
        }
    }
    std::erase_if(seq.kicks, [](const KickGroup &k) { return k.z == 0; });
    return seq;
}

uint64_t stream_seed(const NoiseChannel &ch) {
    return ch.common_random_numbers ? ch.seed : splitmix64(ch.seed ^ std::bit_cast<uint64_t>(ch.sigma));
}

Histogram histogram(const std::vector<double> &values, const std::vector<double> &weights, int bins) {
    Histogram h;
    h.mass.assign(bins, 0.0);
    if (values.empty()) {
        return h;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    h.lo = *lo;
    h.hi = *hi;
    double total = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        int b = 0;
        if (h.hi > h.lo) {
            b = std::min(bins - 1, static_cast<int>((values[i] - h.lo) / (h.hi - h.lo) * bins));
        }
        h.mass[b] += weights[i];
        total += weights[i];
    }
    for (auto &m : h.mass) {
        m /= total;
    }
    return h;
}

void moments(const std::vector<double> &v, double &mean, double &var) {
    mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    var = 0.0;
    for (double x : v) {
        var += (x - mean) * (x - mean);
    }
    var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
}

NoiseReport summarize(const NoiseChannel &ch, double baseline, const std::vector<Sample> &samples) {
    NoiseReport r;
    r.channel = ch;
    r.baseline = baseline;
    std::vector<double> values;
    for (const auto &s : samples) {
        if (s.ok) {
            values.push_back(s.value);
        } else {
            ++r.failures;
        }
    }
    r.samples = static_cast<int>(values.size());
    if (values.empty()) {
        fail(ErrorCode::CalibrationFailure, "every noise sample failed");
    }
    moments(values, r.mean, r.variance);
    r.standard_error = std::sqrt(r.variance / static_cast<double>(values.size()));
    r.histogram = histogram(values, std::vector<double>(values.size(), 1.0), ch.bins);
    if (r.failures > 0) {
        std::ostringstream os;
        os << r.failures << " samples failed and were excluded";
        r.warnings.push_back(os.str());
    }
    return r;
}

NoiseReport deterministic(const NoiseChannel &ch, double baseline) {
    return summarize(ch, baseline, {Sample{baseline, true}});
}

// m distinct unit kicks, each reversed with probability flip_fraction and dropped otherwise.
double corrupted_infidelity(const std::vector<KickGroup> &units, const std::vector<size_t> &where,
                            std::mt19937_64 &rng, const NoiseChannel &ch, const GateSolution &sol,
                            const ThermalState &thermal) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto corrupted = units;
    for (size_t i : where) {
        corrupted[i].z = u01(rng) < ch.flip_fraction ? -corrupted[i].z : 0;
    }
    return evaluate(from_units(std::move(corrupted), sol.sequence.gate_time), sol.trap, thermal).infidelity;
}

}  // namespace

const char *noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::SdkError:
            return "sdk_error";
        case NoiseKind::TimingJitter:
            return "timing_jitter";
        case NoiseKind::RepPeriod:
            return "rep_period";
        case NoiseKind::ModeSplitting:
            return "mode_splitting";
        case NoiseKind::RfPhase:
            return "rf_phase";
    }
    return "unknown";
}

NoiseKind parse_noise_kind(const std::string &name) {
    for (auto k : {NoiseKind::SdkError, NoiseKind::TimingJitter, NoiseKind::RepPeriod, NoiseKind::ModeSplitting,
                   NoiseKind::RfPhase}) {
        if (name == noise_kind_name(k)) {
            return k;
        }
    }
    fail(ErrorCode::ConfigError, "unknown noise channel '" + name + "'");
}

void NoiseChannel::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        fail(ErrorCode::ConfigError, "sigma must be finite and non-negative");
    }
    if (kind == NoiseKind::SdkError && sigma > 1.0) {
        fail(ErrorCode::ConfigError, "kick error probability must not exceed 1");
    }
    if (samples < 1 || m_max < 0 || bins < 1) {
        fail(ErrorCode::ConfigError, "samples and bins must be at least 1, m_max at least 0");
    }
    if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
        fail(ErrorCode::ConfigError, "flip_fraction must lie in [0, 1]");
    }
}

double population_bound(double f0, int n_sdk, double eps) {
    if (!(eps >= 0.0) || n_sdk < 0 || !(n_sdk * eps < 1.0)) {
        fail(ErrorCode::DomainError, "population bound needs eps >= 0 and n eps < 1");
    }
    const double r = 1.0 - n_sdk * eps;
    return r * r * f0;
}

std::vector<double> binomial_weights(int n, double eps, int m_max) {
    if (n < 0 || m_max < 0 || !(eps >= 0.0 && eps <= 1.0)) {
        fail(ErrorCode::DomainError, "binomial weights need n, m_max >= 0 and eps in [0, 1]");
    }
    const int top = std::min(n, m_max);
    std::vector<double> w(top + 1);
    for (int m = 0; m <= top; ++m) {
        if (eps == 0.0 || eps == 1.0) {
            w[m] = (eps == 0.0 ? m == 0 : m == n) ? 1.0 : 0.0;
            continue;
        }
        const double log_c = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
        w[m] = std::exp(log_c + m * std::log(eps) + (n - m) * std::log1p(-eps));
    }
    return w;
}

std::vector<KickGroup> unit_kicks(const KickSequence &seq) {
    if (seq.rep_rate) {
        return seq.expanded();
    }
    std::vector<KickGroup> out;
    for (const auto &k : seq.kicks) {
        const int sign = k.z > 0 ? 1 : -1;
        for (int i = 0; i < std::abs(k.z); ++i) {
            out.push_back({k.t, sign});
        }
    }
    return out;
}

void enforce_min_gap(std::vector<double> &t, double gap, double t_end) {
    std::sort(t.begin(), t.end());
    if (t.empty()) {
        return;
    }
    const double tol = 1e-15 * std::max(1.0, t_end);
    for (int sweep = 0; sweep < 10000 && gap > 0.0; ++sweep) {
        bool moved = false;
        for (size_t i = 1; i < t.size(); ++i) {
            const double d = t[i] - t[i - 1];
            if (d < gap - tol) {
                const double push = 0.5 * (gap - d);
                t[i - 1] -= push;
                t[i] += push;
                moved = true;
            }
        }
        if (!moved) {
            break;
        }
    }
    // Local passes pin stragglers to the window without moving interior kicks.
    t.front() = std::max(t.front(), 0.0);
    for (size_t i = 1; i < t.size(); ++i) {
        t[i] = std::max(t[i], t[i - 1] + gap);
    }
    t.back() = std::min(t.back(), t_end);
    for (size_t i = t.size() - 1; i-- > 0;) {
        t[i] = std::min(t[i], t[i + 1] - gap);
    }
}

NoiseReport mc_sdk_errors(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                          int threads) {
    ch.validate();
    if (ch.kind != NoiseKind::SdkError) {
        fail(ErrorCode::ConfigError, "mc_sdk_errors needs the sdk_error channel");
    }
    const auto units = unit_kicks(sol.sequence);
    const int n = static_cast<int>(units.size());
    const double baseline = evaluate(sol.sequence, sol.trap, thermal).infidelity;
    const auto weights = binomial_weights(n, ch.sigma, ch.m_max);
    const uint64_t seed = stream_seed(ch);

    NoiseReport r;
    r.channel = ch;
    r.baseline = baseline;
    double retained = 0.0;
    for (double w : weights) {
        retained += w;
    }
    r.tail_mass = std::max(0.0, 1.0 - retained);

    const int strata = ch.sigma == 0.0 ? 1 : static_cast<int>(weights.size());
    std::vector<double> all_values, all_weights;
    double fid = 0.0, second = 0.0, se2 = 0.0;
    for (int m = 0; m < strata; ++m) {
        SdkStratum s;
        s.m = m;
        s.weight = weights[m];
        std::vector<double> values;
        if (m == 0) {
            values = {baseline};
        } else {
            values.resize(ch.samples);
            parallel_for(values.size(), threads, [&](size_t i) {
                auto rng = make_stream(splitmix64(seed + static_cast<uint64_t>(m)), i);
                std::vector<size_t> idx(units.size());
                for (size_t k = 0; k < idx.size(); ++k) {
                    idx[k] = k;
                }
                // Partial Fisher-Yates: the first m entries are a uniform m-subset.
                for (int k = 0; k < m; ++k) {
                    std::uniform_int_distribution<size_t> pick(k, idx.size() - 1);
                    std::swap(idx[k], idx[pick(rng)]);
                }
                idx.resize(m);
                values[i] = corrupted_infidelity(units, idx, rng, ch, sol, thermal);
            });
        }
        s.samples = static_cast<int>(values.size());
        moments(values, s.mean, s.variance);
        s.histogram = histogram(values, std::vector<double>(values.size(), 1.0), ch.bins);
        fid += s.weight * (1.0 - s.mean);
        second += s.weight * (s.variance * (s.samples - 1) / std::max(1, s.samples) + s.mean * s.mean);
        se2 += s.weight * s.weight * s.variance / s.samples;
        for (double v : values) {
            all_values.push_back(v);
            all_weights.push_back(s.weight / s.samples);
        }
        r.strata.push_back(std::move(s));
    }
    // The tail beyond m_max is counted as total failure.
    r.mean = 1.0 - fid;
    second += r.tail_mass;
    r.variance = std::max(0.0, second - r.mean * r.mean);
    r.standard_error = std::sqrt(se2);
    r.samples = static_cast<int>(all_values.size());
    r.histogram = histogram(all_values, all_weights, ch.bins);
    if (r.tail_mass > kTailWarning) {
        std::ostringstream os;
        os.precision(3);
        os << "TruncationWarning: binomial tail mass beyond m_max = " << ch.m_max << " is " << r.tail_mass;
        r.warnings.push_back(os.str());
    }
    return r;
}

NoiseReport mc_sdk_errors_direct(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                                 int threads) {
    ch.validate();
    if (ch.kind != NoiseKind::SdkError) {
        fail(ErrorCode::ConfigError, "mc_sdk_errors_direct needs the sdk_error channel");
    }
    const auto units = unit_kicks(sol.sequence);
    const double baseline = evaluate(sol.sequence, sol.trap, thermal).infidelity;
    if (ch.sigma == 0.0) {
        return deterministic(ch, baseline);
    }
    const uint64_t seed = splitmix64(stream_seed(ch) ^ 0xd1ec7ULL);
    std::vector<Sample> samples(ch.samples);
    parallel_for(samples.size(), threads, [&](size_t i) {
        auto rng = make_stream(seed, i);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::vector<size_t> where;
        for (size_t k = 0; k < units.size(); ++k) {
            if (u01(rng) < ch.sigma) {
                where.push_back(k);
            }
        }
        samples[i] = {corrupted_infidelity(units, where, rng, ch, sol, thermal), true};
    });
    return summarize(ch, baseline, samples);
}

NoiseReport mc_parameter_noise(const GateSolution &sol, const NoiseChannel &ch, const ThermalState &thermal,
                               int threads) {
    ch.validate();
    if (ch.kind == NoiseKind::SdkError) {
        fail(ErrorCode::ConfigError, "use mc_sdk_errors for the sdk_error channel");
    }
    const double baseline = evaluate(sol.sequence, sol.trap, thermal).infidelity;
    if (ch.sigma == 0.0) {
        return deterministic(ch, baseline);
    }
    const uint64_t seed = stream_seed(ch);
    const KickSequence &seq = sol.sequence;
    const double t_g = seq.gate_time;
    std::vector<Sample> samples(ch.samples);
    parallel_for(samples.size(), threads, [&](size_t i) {
        auto rng = make_stream(seed, i);
        std::normal_distribution<double> normal(0.0, 1.0);
        switch (ch.kind) {
            case NoiseKind::TimingJitter: {
                const double width = kTwoPi * ch.sigma;
                auto units = seq.rep_rate ? unit_kicks(seq) : seq.kicks;
                std::vector<double> t(units.size());
                for (size_t k = 0; k < t.size(); ++k) {
                    t[k] = units[k].t + width * normal(rng);
                }
                // Kick order follows the jittered times; signs travel with their kicks.
                std::vector<size_t> order(t.size());
                for (size_t k = 0; k < order.size(); ++k) {
                    order[k] = k;
                }
                std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return t[a] < t[b]; });
                std::vector<double> sorted(t.size());
                for (size_t k = 0; k < order.size(); ++k) {
                    sorted[k] = t[order[k]];
                }
                enforce_min_gap(sorted, seq.min_spacing(), t_g);
                std::vector<KickGroup> moved(units.size());
                for (size_t k = 0; k < order.size(); ++k) {
                    moved[k] = {sorted[k], units[order[k]].z};
                }
                samples[i] = {evaluate(from_units(std::move(moved), t_g), sol.trap, thermal).infidelity, true};
                break;
            }
            case NoiseKind::RepPeriod: {
                // One period per shot; the first kick of each group stays put.
                const double period = seq.min_spacing() + kTwoPi * ch.sigma * normal(rng);
                std::vector<KickGroup> units;
                for (const auto &k : seq.kicks) {
                    const int sign = k.z > 0 ? 1 : -1;
                    for (int u = 0; u < std::abs(k.z); ++u) {
                        units.push_back({k.t + u * period, sign});
                    }
                }
                // A longer period can push the last kick past t_g; the gate then ends at that kick.
                double end = t_g;
                for (const auto &u : units) {
                    end = std::max(end, u.t);
                }
                const auto shot = from_units(std::move(units), end);
                samples[i] = {evaluate(shot, sol.trap, thermal).infidelity, true};
                break;
            }
            case NoiseKind::ModeSplitting: {
                TrapParams p = sol.trap.params;
                p.chi += ch.sigma * normal(rng);
                try {
                    const TrapConfig trap = calibrate(p);
                    samples[i] = {evaluate(seq, trap, thermal).infidelity, true};
                } catch (const Error &) {
                    samples[i] = {0.0, false};
                }
                break;
            }
            case NoiseKind::RfPhase: {
                double phi = std::fmod(sol.trap.params.rf_phase + ch.sigma * normal(rng), kTwoPi);
                if (phi < 0.0) {
                    phi += kTwoPi;
                }
                samples[i] = {evaluate(seq, sol.trap.with_rf_phase(phi), thermal).infidelity, true};
                break;
            }
            case NoiseKind::SdkError:
                break;
        }
    });
    auto report = summarize(ch, baseline, samples);
    if (ch.kind == NoiseKind::TimingJitter && seq.rep_rate) {
        report.projection = "sorted, then symmetric pairwise push-apart to the repetition period";
    }
    return report;
}

}  // namespace fastgate
