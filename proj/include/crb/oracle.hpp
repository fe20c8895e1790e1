// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exhaustive grid search over per-relay weights, for cross-checking the convex
// solvers on small instances. Only secrecy_rate evaluations of cap-feasible
// points are used, so the result is always a lower bound on the optimum.
//
// Grid: w_m = r_m sqrt(p_m) exp(j theta_m) with r_m in {0, 1/K, ..., 1},
// theta_m in {0, 2 pi/K, ..., 2 pi (K-1)/K}, theta_1 = 0. The best grid point
// is optionally polished by a compass search on the same (r, theta)
// coordinates, which stays feasible by construction.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "crb/beamform_individual.hpp"
#include "crb/channel.hpp"

namespace crb {

struct OracleResult {
    double rate = 0.0;      ///< best rate found (after polishing, if enabled)
    double grid_rate = 0.0; ///< best rate on the grid alone
    CVector w;
};

namespace detail {

struct OracleParams {
    std::array<double, 3> r{};
    std::array<double, 3> theta{};
};

inline CVector oracle_weights(const OracleParams& q, const std::vector<double>& p, Eigen::Index m) {
    CVector w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto k = static_cast<std::size_t>(i);
        w(i) = std::polar(q.r[k] * std::sqrt(p[k]), q.theta[k]);
    }
    return w;
}

inline double oracle_ratio(const ChannelRealization& ch, const CVector& w) {
    return (ch.noise_rx + std::norm(ch.h.dot(w))) / (ch.noise_rx + std::norm(ch.z.dot(w)));
}

} // namespace detail

inline OracleResult oracle_grid(const ChannelRealization& ch, const PowerBudget& budget, int resolution,
                                bool polish = true) {
    ch.validate();
    const Eigen::Index m = ch.relays();
    budget.validate(m);
    if (m > 3) {
        throw ValidationError("oracle_grid: supports at most 3 relays");
    }
    if (resolution < 1 || resolution > 4096) {
        throw ValidationError("oracle_grid: resolution must be in [1, 4096]");
    }
    const int k = resolution;
    const double n0 = ch.noise_rx;

    // Per-relay tables of conj(h_m) w_m and conj(z_m) w_m over (r, theta).
    struct Table {
        std::vector<double> hr, hi, zr, zi;
        std::vector<int> ri, ti;
    };
    std::vector<Table> tables(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        Table& tb = tables[static_cast<std::size_t>(i)];
        const double sp = std::sqrt(budget.p[static_cast<std::size_t>(i)]);
        const int n_theta = i == 0 ? 1 : k;
        for (int ri = 0; ri <= k; ++ri) {
            for (int ti = 0; ti < n_theta; ++ti) {
                if (ri == 0 && ti > 0) {
                    continue;
                }
                const Complex w = std::polar(sp * ri / k, 2.0 * std::numbers::pi * ti / k);
                const Complex a = std::conj(ch.h(i)) * w;
                const Complex b = std::conj(ch.z(i)) * w;
                tb.hr.push_back(a.real());
                tb.hi.push_back(a.imag());
                tb.zr.push_back(b.real());
                tb.zi.push_back(b.imag());
                tb.ri.push_back(ri);
                tb.ti.push_back(ti);
            }
        }
    }

    double best = 1.0; // w = 0
    std::array<std::size_t, 3> arg{};
    const Table& last = tables.back();
    const std::size_t n_last = last.hr.size();
    auto scan_last = [&](double ar, double ai, double br, double bi, std::array<std::size_t, 3> prefix,
                         std::size_t slot) {
        for (std::size_t j = 0; j < n_last; ++j) {
            const double nr = ar + last.hr[j];
            const double ni = ai + last.hi[j];
            const double dr = br + last.zr[j];
            const double di = bi + last.zi[j];
            const double ratio = (n0 + nr * nr + ni * ni) / (n0 + dr * dr + di * di);
            if (ratio > best) {
                best = ratio;
                arg = prefix;
                arg[slot] = j;
            }
        }
    };
    if (m == 1) {
        scan_last(0, 0, 0, 0, {}, 0);
    } else if (m == 2) {
        const Table& t0 = tables[0];
        for (std::size_t a = 0; a < t0.hr.size(); ++a) {
            scan_last(t0.hr[a], t0.hi[a], t0.zr[a], t0.zi[a], {a, 0, 0}, 1);
        }
    } else {
        const Table& t0 = tables[0];
        const Table& t1 = tables[1];
        for (std::size_t a = 0; a < t0.hr.size(); ++a) {
            for (std::size_t b = 0; b < t1.hr.size(); ++b) {
                scan_last(t0.hr[a] + t1.hr[b], t0.hi[a] + t1.hi[b], t0.zr[a] + t1.zr[b], t0.zi[a] + t1.zi[b],
                          {a, b, 0}, 2);
            }
        }
    }

    detail::OracleParams q;
    if (best > 1.0) {
        for (Eigen::Index i = 0; i < m; ++i) {
            const Table& tb = tables[static_cast<std::size_t>(i)];
            const std::size_t j = arg[static_cast<std::size_t>(i)];
            q.r[static_cast<std::size_t>(i)] = static_cast<double>(tb.ri[j]) / k;
            q.theta[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * tb.ti[j] / k;
        }
    }
    OracleResult out;
    out.w = detail::oracle_weights(q, budget.p, m);
    out.grid_rate = secrecy_rate(ch, out.w);
    out.rate = out.grid_rate;
    if (!polish || !(best > 1.0)) {
        return out;
    }

    double value = detail::oracle_ratio(ch, out.w);
    double step_r = 1.0 / k;
    double step_t = 2.0 * std::numbers::pi / k;
    for (int sweep = 0; sweep < 200000 && (step_r > 1e-13 || step_t > 1e-13); ++sweep) {
        bool improved = false;
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto u = static_cast<std::size_t>(i);
            for (double dir : {1.0, -1.0}) {
                detail::OracleParams trial = q;
                trial.r[u] = std::clamp(q.r[u] + dir * step_r, 0.0, 1.0);
                double v = detail::oracle_ratio(ch, detail::oracle_weights(trial, budget.p, m));
                if (v > value) {
                    q = trial;
                    value = v;
                    improved = true;
                }
                if (i == 0) {
                    continue;
                }
                trial = q;
                trial.theta[u] = q.theta[u] + dir * step_t;
                v = detail::oracle_ratio(ch, detail::oracle_weights(trial, budget.p, m));
                if (v > value) {
                    q = trial;
                    value = v;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step_r *= 0.5;
            step_t *= 0.5;
        }
    }
    out.w = detail::oracle_weights(q, budget.p, m);
    out.rate = std::max(out.grid_rate, secrecy_rate(ch, out.w));
    return out;
}

} // namespace crb
