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

// Secrecy-rate maximization under per-relay caps |w_m|^2 <= p_m.
//
// The objective (N0 + |h^H w|^2) / (N0 + |z^H w|^2) is quasiconvex in the
// lifted variable, so the optimum ratio t_max is located by bisection over t
// with a convex test at each step. Two tests are provided:
//
//  * sdr:  phi(t) = max { tr((h h^H - t z z^H) X) : X >= 0, diag(X) <= p }
//          compared against N0 (t - 1). The beamformer is then read off the
//          minimum-trace X meeting the ratio constraint.
//  * socp: with h^H w rotated real, the ratio constraint becomes the cone
//          Re(h^H w) / sqrt(t) >= ||(z^H w, sqrt((1 - 1/t) N0))||. The test
//          maximizes the cone margin over the caps; the beamformer is the
//          minimum-norm w meeting the cone at t_max.
//
// Each test returns certified bounds on its value, so a decision is only made
// once the lower bound clears the threshold or the upper bound falls short.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "crb/barrier.hpp"
#include "crb/beamform_total.hpp"
#include "crb/beamformer.hpp"
#include "crb/channel.hpp"
#include "crb/linalg.hpp"

namespace crb {

/// Per-relay power caps p_m.
struct PowerBudget {
    std::vector<double> p;

    static PowerBudget equal_split(double p_total, int relays) {
        return {std::vector<double>(static_cast<std::size_t>(relays), p_total / relays)};
    }

    double total() const {
        double s = 0.0;
        for (double v : p) {
            s += v;
        }
        return s;
    }

    RVector as_vector() const { return Eigen::Map<const RVector>(p.data(), static_cast<Eigen::Index>(p.size())); }

    void validate(Eigen::Index relays) const {
        if (static_cast<Eigen::Index>(p.size()) != relays) {
            throw ValidationError("budget: need one cap per relay (got " + std::to_string(p.size()) + ", M = " +
                                  std::to_string(relays) + ")");
        }
        for (double v : p) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw ValidationError("budget: caps must be positive and finite");
            }
        }
    }
};

struct BisectionConfig {
    double t_lo = 1.0;
    /// NaN selects 1 + (sum_m sqrt(p_m) |h_m|)^2 / N0.
    double t_hi = std::numeric_limits<double>::quiet_NaN();
    double tol_rel = 1e-6;
    int max_iters = 60;
    int max_bracket_doublings = 30;
};

struct SolverConfig {
    BisectionConfig bisection;
    barrier::Settings barrier;
    double rank_tol = 1e-6; ///< allowed lambda_2 / lambda_1 of the extracted X
};

enum class Path { sdr, socp };

inline constexpr std::string_view path_name(Path p) noexcept { return p == Path::sdr ? "sdr" : "socp"; }

struct FeasibilityWitness {
    bool feasible = false;
    std::optional<CMatrix> x; ///< sdr path
    std::optional<CVector> w; ///< socp path
    double slack = 0.0;       ///< |h^H w|^2 - t |z^H w|^2 - N0 (t - 1)  (or tr(A_t X) - N0 (t - 1))
    double lower = 0.0;       ///< certified lower bound on the test value
    double upper = 0.0;       ///< certified upper bound on the test value
    double threshold = 0.0;   ///< value the test compares against
    int newton_steps = 0;
};

struct FeasibilityValue {
    double phi = 0.0;
    CMatrix x;
    double gap = 0.0;
    int newton_steps = 0;
};

struct BisectionStep {
    double t = 0.0;
    bool feasible = false;
    double lower = 0.0;
    double upper = 0.0;
    int newton_steps = 0;
};

struct SolverDiagnostics {
    std::vector<BisectionStep> trace;
    int bracket_doublings = 0;
    int newton_steps = 0;
    double extraction_gap = 0.0;
    double t_extract = 1.0;
    /// lambda_2 / lambda_1 of the extracted X (sdr only; 0 when X = 0 or not applicable).
    double rank_ratio = 0.0;
    bool rank_one = true;
    double cap_rescale = 1.0; ///< factor applied to pull w back inside the caps
};

struct IndividualSolution {
    Beamformer beamformer;
    double rate = 0.0;          ///< log2(t_max)
    double achieved_rate = 0.0; ///< secrecy_rate of the returned w
    double t_max = 1.0;
    SolverDiagnostics diagnostics;
};

namespace detail {

inline double aligned_gain(const ChannelRealization& ch, const PowerBudget& budget) {
    double s = 0.0;
    for (Eigen::Index m = 0; m < ch.relays(); ++m) {
        s += std::sqrt(budget.p[static_cast<std::size_t>(m)]) * std::abs(ch.h(m));
    }
    return s;
}

/// w_m = sqrt(p_m) h_m / |h_m|: every relay at full power, all terms of h^H w in phase.
inline CVector aligned_beamformer(const ChannelRealization& ch, const PowerBudget& budget) {
    CVector w(ch.relays());
    for (Eigen::Index m = 0; m < ch.relays(); ++m) {
        const double a = std::abs(ch.h(m));
        const double sp = std::sqrt(budget.p[static_cast<std::size_t>(m)]);
        w(m) = a > 0.0 ? sp * ch.h(m) / a : Complex(sp, 0.0);
    }
    return w;
}

inline CMatrix ratio_matrix(const ChannelRealization& ch, double t) {
    return ch.h * ch.h.adjoint() - t * (ch.z * ch.z.adjoint());
}

inline void check_t(double t) {
    if (!(t >= 1.0) || !std::isfinite(t)) {
        throw ValidationError("target ratio t must be finite and >= 1");
    }
}

/// Largest feasible scaling of X (or w^2) onto the caps: min(1, min_m p_m / d_m).
inline double cap_scale(const RVector& diag, const RVector& p) {
    double s = 1.0;
    for (Eigen::Index m = 0; m < p.size(); ++m) {
        if (diag(m) > p(m)) {
            s = std::min(s, p(m) / diag(m));
        }
    }
    return s;
}

inline RVector to_real(const CVector& w) {
    RVector x(2 * w.size());
    for (Eigen::Index m = 0; m < w.size(); ++m) {
        x(2 * m) = w(m).real();
        x(2 * m + 1) = w(m).imag();
    }
    return x;
}

inline CVector to_complex(const RVector& x, Eigen::Index m) {
    CVector w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        w(i) = Complex(x(2 * i), x(2 * i + 1));
    }
    return w;
}

/// Real row vectors for Re(c^H w) and Im(c^H w) over the stacked (Re w_m, Im w_m) coordinates.
struct RealForms {
    RVector re;
    RVector im;
};

inline RealForms inner_product_forms(const CVector& c, Eigen::Index dim) {
    const Eigen::Index m = c.size();
    RealForms f{RVector::Zero(dim), RVector::Zero(dim)};
    for (Eigen::Index i = 0; i < m; ++i) {
        f.re(2 * i) = c(i).real();
        f.re(2 * i + 1) = c(i).imag();
        f.im(2 * i) = -c(i).imag();
        f.im(2 * i + 1) = c(i).real();
    }
    return f;
}

/// p_m - |w_m|^2 > 0 over the first 2M coordinates of a `dim`-vector.
inline std::vector<barrier::QuadConstraint> cap_constraints(const RVector& p, Eigen::Index dim) {
    std::vector<barrier::QuadConstraint> out;
    for (Eigen::Index m = 0; m < p.size(); ++m) {
        barrier::QuadConstraint c;
        c.q = RMatrix::Zero(dim, dim);
        c.q(2 * m, 2 * m) = -1.0;
        c.q(2 * m + 1, 2 * m + 1) = -1.0;
        c.g = RVector::Zero(dim);
        c.r = p(m);
        c.nu = 1.0;
        out.push_back(std::move(c));
    }
    return out;
}

inline double algebraic_slack(const ChannelRealization& ch, const CVector& w, double t) {
    return std::norm(ch.h.dot(w)) - t * std::norm(ch.z.dot(w)) - ch.noise_rx * (t - 1.0);
}

} // namespace detail

// ---------------------------------------------------------------------------
// SDR path

/// phi(t) = max tr((h h^H - t z z^H) X) over X >= 0, diag(X) <= p, solved to the barrier gap tolerance.
inline FeasibilityValue feasibility_value(const ChannelRealization& ch, const PowerBudget& budget, double t,
                                          const barrier::Settings& settings = {}) {
    ch.validate();
    budget.validate(ch.relays());
    detail::check_t(t);
    const Eigen::Index m = ch.relays();
    const CMatrix a = detail::ratio_matrix(ch, t);
    const RVector p = budget.as_vector();
    barrier::LmiProblem prob{-a, p, std::nullopt, 0.0};
    barrier::LmiDualSolver solver(prob, settings);
    const RVector y0 = RVector::Constant(m, 2.0 * ch.h.squaredNorm() + 1.0);
    const barrier::LmiIterate it = solver.solve(y0, 0.0);

    // Any cap-feasible X bounds phi from below (X = 0 gives 0); the dual objective bounds it from above.
    CMatrix x = it.x * detail::cap_scale(it.x.diagonal().real(), p);
    double lower = (a * x).trace().real();
    if (lower < 0.0) {
        x.setZero();
        lower = 0.0;
    }
    FeasibilityValue out;
    out.phi = std::max(lower, it.dual_objective);
    out.x = std::move(x);
    out.gap = std::max(0.0, it.dual_objective - lower);
    out.newton_steps = it.newton_steps;
    return out;
}

/// Decides phi(t) >= N0 (t - 1), stopping as soon as the bounds certify the answer.
inline FeasibilityWitness feasibility_sdr(const ChannelRealization& ch, const PowerBudget& budget, double t,
                                          const barrier::Settings& settings = {}) {
    ch.validate();
    budget.validate(ch.relays());
    detail::check_t(t);
    const Eigen::Index m = ch.relays();
    const CMatrix a = detail::ratio_matrix(ch, t);
    const RVector p = budget.as_vector();
    const double threshold = ch.noise_rx * (t - 1.0);

    FeasibilityWitness out;
    out.threshold = threshold;
    if (threshold <= 0.0) {
        out.feasible = true;
        out.x = CMatrix::Zero(m, m);
        out.upper = std::numeric_limits<double>::infinity();
        return out;
    }

    CMatrix best_x = CMatrix::Zero(m, m);
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::optional<bool> decided;
    auto observe = [&](const barrier::LmiIterate& it) {
        const CMatrix x = it.x * detail::cap_scale(it.x.diagonal().real(), p);
        const double val = (a * x).trace().real();
        if (val > lower) {
            lower = val;
            best_x = x;
        }
        upper = std::min(upper, it.dual_objective);
        if (lower >= threshold) {
            decided = true;
        } else if (upper < threshold) {
            decided = false;
        }
        return decided ? barrier::Control::stop : barrier::Control::proceed;
    };

    barrier::LmiDualSolver solver({-a, p, std::nullopt, 0.0}, settings);
    const RVector y0 = RVector::Constant(m, 2.0 * ch.h.squaredNorm() + 1.0);
    const barrier::LmiIterate it = solver.solve(y0, 0.0, observe);
    out.newton_steps = it.newton_steps;
    out.lower = lower;
    out.upper = upper;
    out.feasible = decided ? *decided : (0.5 * (lower + upper) >= threshold);
    out.x = best_x;
    out.slack = (a * best_x).trace().real() - threshold;
    return out;
}

// ---------------------------------------------------------------------------
// SOCP path

/// Decides whether some w within the caps satisfies
/// Re(h^H w) / sqrt(t) >= ||(z^H w, sqrt((1 - 1/t) N0))||  (h^H w rotated real).
inline FeasibilityWitness feasibility_socp(const ChannelRealization& ch, const PowerBudget& budget, double t,
                                           const barrier::Settings& settings = {}) {
    ch.validate();
    budget.validate(ch.relays());
    detail::check_t(t);
    const Eigen::Index m = ch.relays();
    const Eigen::Index n = 2 * m + 1; // (Re w, Im w) pairs, then the cone height s
    const RVector p = budget.as_vector();
    const double kappa = std::sqrt(std::max(0.0, (1.0 - 1.0 / t) * ch.noise_rx));
    const double rt = std::sqrt(t);

    FeasibilityWitness out;
    out.threshold = 0.0;

    // margin(w) = Re(h^H w)/sqrt(t) - ||(z^H w, kappa)||
    auto margin = [&](const CVector& w) {
        const Complex zw = ch.z.dot(w);
        return ch.h.dot(w).real() / rt - std::sqrt(std::norm(zw) + kappa * kappa);
    };
    // min over the unit ball of sum_m sqrt(p_m)|h_m/sqrt(t) - u z_m| - nu kappa, at the
    // (u, nu) that is optimal for w.
    auto dual_bound = [&](const CVector& w) {
        const Complex zw = ch.z.dot(w);
        const double nrm = std::sqrt(std::norm(zw) + kappa * kappa);
        Complex u(0.0, 0.0);
        double nu = 0.0;
        if (nrm > 0.0) {
            u = zw / nrm;
            nu = kappa / nrm;
        }
        double s = -nu * kappa;
        for (Eigen::Index i = 0; i < m; ++i) {
            s += std::sqrt(p(i)) * std::abs(ch.h(i) / rt - u * ch.z(i));
        }
        return s;
    };

    CVector best_w = CVector::Zero(m);
    double lower = margin(best_w);
    double upper = dual_bound(best_w);
    auto finish = [&](bool feasible) {
        out.feasible = feasible;
        normalize_phase(best_w, ch.h);
        out.w = best_w;
        out.lower = lower;
        out.upper = upper;
        out.slack = detail::algebraic_slack(ch, best_w, t);
        return out;
    };
    if (lower >= 0.0) {
        return finish(true);
    }
    if (upper < 0.0) {
        return finish(false);
    }

    const detail::RealForms hf = detail::inner_product_forms(ch.h, n);
    const detail::RealForms zf = detail::inner_product_forms(ch.z, n);
    barrier::QuadProblem prob;
    prob.c = -hf.re / rt;
    prob.c(n - 1) = 1.0;
    prob.constraints = detail::cap_constraints(p, n);
    {
        barrier::QuadConstraint cone;
        cone.q = -(zf.re * zf.re.transpose() + zf.im * zf.im.transpose());
        cone.q(n - 1, n - 1) = 1.0;
        cone.g = RVector::Zero(n);
        cone.r = -kappa * kappa;
        cone.guard = RVector::Unit(n, n - 1);
        cone.nu = 2.0;
        prob.constraints.push_back(std::move(cone));
    }
    const double scale = detail::aligned_gain(ch, budget) / rt + kappa;
    RVector v0 = RVector::Zero(n);
    v0(n - 1) = kappa + std::max(scale, 1e-12);

    std::optional<bool> decided;
    auto observe = [&](const barrier::QuadIterate& it) {
        const CVector w = detail::to_complex(it.v.head(2 * m), m);
        const double lo = margin(w);
        if (lo > lower) {
            lower = lo;
            best_w = w;
        }
        upper = std::min(upper, dual_bound(w));
        if (lower >= 0.0) {
            decided = true;
        } else if (upper < 0.0) {
            decided = false;
        }
        return decided ? barrier::Control::stop : barrier::Control::proceed;
    };
    barrier::QuadBarrierSolver solver(prob, settings);
    const barrier::QuadIterate it = solver.solve(v0, 1.0 / std::max(scale, 1e-12), observe);
    out.newton_steps = it.newton_steps;
    return finish(decided ? *decided : (0.5 * (lower + upper) >= 0.0));
}

// ---------------------------------------------------------------------------
// Bisection and extraction

namespace detail {

struct ExtractResult {
    CVector w;
    double gap = 0.0;
    double rank_ratio = 0.0;
    int newton_steps = 0;
};

/// min tr(X) s.t. tr(A_t X) >= N0 (t - 1), diag(X) <= p, X >= 0; then the principal component.
inline ExtractResult extract_sdr(const ChannelRealization& ch, const RVector& p, double t,
                                 const barrier::Settings& settings) {
    const Eigen::Index m = ch.relays();
    const CMatrix a = ratio_matrix(ch, t);
    const double c = ch.noise_rx * (t - 1.0);
    barrier::LmiProblem prob{CMatrix::Identity(m, m), p, CMatrix(-a), -c};
    barrier::LmiDualSolver solver(prob, settings);
    const RVector y0 = RVector::Ones(m);
    const double mu0 = 0.5 / std::max(ch.h.squaredNorm(), 1e-300);
    const barrier::LmiIterate it = solver.solve(y0, mu0);

    // X = S^{-1}/tau shares eigenvectors with S; invert the spectrum of S for accuracy.
    const linalg::HermitianEigen se = linalg::herm_eig(0.5 * (it.s + it.s.adjoint()));
    const Eigen::Index last = m - 1;
    const double s_min = se.values(last);
    ExtractResult r;
    r.gap = it.gap_bound;
    r.newton_steps = it.newton_steps;
    r.rank_ratio = m > 1 ? s_min / se.values(last - 1) : 0.0;
    // Scale from the active ratio constraint: lambda_1 v^H A_t v = N0 (t - 1).
    const CVector v = se.vectors.col(last);
    const double va = v.dot(a * v).real();
    const double lambda1 = va > 0.0 ? c / va : 1.0 / (it.tau * s_min);
    r.w = std::sqrt(lambda1) * v;
    return r;
}

/// min ||w||^2 s.t. Re(h^H w)/sqrt(t) >= ||(z^H w, kappa)||, |w_m|^2 <= p_m, from a strictly feasible w0.
inline ExtractResult extract_socp(const ChannelRealization& ch, const RVector& p, double t, const CVector& w0,
                                  const barrier::Settings& settings) {
    const Eigen::Index m = ch.relays();
    const Eigen::Index n = 2 * m;
    const double kappa = std::sqrt(std::max(0.0, (1.0 - 1.0 / t) * ch.noise_rx));
    const double rt = std::sqrt(t);
    const RealForms hf = inner_product_forms(ch.h, n);
    const RealForms zf = inner_product_forms(ch.z, n);
    barrier::QuadProblem prob;
    prob.c = RVector::Zero(n);
    prob.p = RMatrix::Identity(n, n);
    prob.constraints = cap_constraints(p, n);
    {
        barrier::QuadConstraint cone;
        const RVector a = hf.re / rt;
        cone.q = a * a.transpose() - zf.re * zf.re.transpose() - zf.im * zf.im.transpose();
        cone.g = RVector::Zero(n);
        cone.r = -kappa * kappa;
        cone.guard = a;
        cone.nu = 2.0;
        prob.constraints.push_back(std::move(cone));
    }
    barrier::QuadBarrierSolver solver(prob, settings);
    const RVector x0 = to_real(w0);
    const barrier::QuadIterate it = solver.solve(x0, 0.0);
    ExtractResult r;
    r.w = to_complex(it.v, m);
    r.gap = it.gap_bound;
    r.newton_steps = it.newton_steps;
    return r;
}

} // namespace detail

/// Bisection for t_max followed by beamformer extraction along the chosen path.
inline IndividualSolution solve_individual(const ChannelRealization& ch, const PowerBudget& budget,
                                           const SolverConfig& cfg = {}, Path path = Path::sdr) {
    ch.validate();
    budget.validate(ch.relays());
    const BisectionConfig& bc = cfg.bisection;
    if (!(bc.t_lo >= 1.0) || !(bc.tol_rel > 0.0) || bc.max_iters < 1) {
        throw ValidationError("bisection: need t_lo >= 1, tol_rel > 0, max_iters >= 1");
    }
    const Eigen::Index m = ch.relays();
    const RVector p = budget.as_vector();
    const Method method = path == Path::sdr ? Method::sdr : Method::socp;

    IndividualSolution sol;
    const double gain = detail::aligned_gain(ch, budget);
    const double t_bound = 1.0 + gain * gain / ch.noise_rx;

    if (!(ch.z.norm() > 0.0)) {
        // No eavesdropper signal: every relay at full power, coherently combined.
        sol.beamformer = make_beamformer(detail::aligned_beamformer(ch, budget), ch.h, method);
        sol.t_max = t_bound;
        sol.rate = std::log2(t_bound);
        sol.achieved_rate = secrecy_rate(ch, sol.beamformer.w);
        sol.diagnostics.t_extract = t_bound;
        return sol;
    }

    auto test = [&](double t) -> FeasibilityWitness {
        FeasibilityWitness fw = path == Path::sdr ? feasibility_sdr(ch, budget, t, cfg.barrier)
                                                  : feasibility_socp(ch, budget, t, cfg.barrier);
        sol.diagnostics.trace.push_back({t, fw.feasible, fw.lower, fw.upper, fw.newton_steps});
        sol.diagnostics.newton_steps += fw.newton_steps;
        return fw;
    };

    double lo = bc.t_lo;
    double hi = std::isnan(bc.t_hi) ? t_bound : bc.t_hi;
    std::optional<CVector> lo_witness;
    if (lo > 1.0) {
        FeasibilityWitness fw = test(lo);
        if (!fw.feasible) {
            throw BracketError("bisection: lower bound t_lo is infeasible");
        }
        lo_witness = fw.w;
    }
    if (hi <= lo * (1.0 + bc.tol_rel)) {
        hi = lo * (1.0 + bc.tol_rel);
    }
    for (;;) {
        FeasibilityWitness fw = test(hi);
        if (!fw.feasible) {
            break;
        }
        lo = hi;
        lo_witness = fw.w;
        if (sol.diagnostics.bracket_doublings >= bc.max_bracket_doublings) {
            throw BracketError("bisection: upper bound still feasible after doubling");
        }
        ++sol.diagnostics.bracket_doublings;
        hi = 1.0 + 2.0 * (hi - 1.0);
    }

    bool raised = lo > 1.0;
    for (int iter = 0; iter < bc.max_iters && (hi - lo) / lo > bc.tol_rel; ++iter) {
        const double t = 0.5 * (lo + hi);
        FeasibilityWitness fw = test(t);
        if (fw.feasible) {
            lo = t;
            lo_witness = fw.w;
            raised = true;
        } else {
            hi = t;
        }
    }

    if (!raised) {
        // Nothing above t = 1 was certified: no positive secrecy rate.
        sol.beamformer = make_beamformer(CVector::Zero(m), ch.h, method);
        sol.t_max = 1.0;
        sol.diagnostics.t_extract = 1.0;
        return sol;
    }
    sol.t_max = 0.5 * (lo + hi);
    sol.rate = std::log2(sol.t_max);
    // Back off from the boundary so the extraction problem has a strict interior.
    const double t_ext = std::max(1.0, std::min(sol.t_max * (1.0 - bc.tol_rel), lo * (1.0 - 0.5 * bc.tol_rel)));
    sol.diagnostics.t_extract = t_ext;

    CVector w = CVector::Zero(m);
    if (t_ext > 1.0) {
        detail::ExtractResult ex = path == Path::sdr ? detail::extract_sdr(ch, p, t_ext, cfg.barrier)
                                                     : detail::extract_socp(ch, p, t_ext, *lo_witness, cfg.barrier);
        w = ex.w;
        sol.diagnostics.extraction_gap = ex.gap;
        sol.diagnostics.rank_ratio = ex.rank_ratio;
        sol.diagnostics.rank_one = ex.rank_ratio <= cfg.rank_tol;
        sol.diagnostics.newton_steps += ex.newton_steps;
    }
    // Pull numerical overshoot back inside the caps.
    const double over = std::sqrt(1.0 / detail::cap_scale(w.cwiseAbs2(), p));
    if (over > 1.0) {
        w /= over;
        sol.diagnostics.cap_rescale = 1.0 / over;
    }
    sol.beamformer = make_beamformer(std::move(w), ch.h, method);
    sol.achieved_rate = secrecy_rate(ch, sol.beamformer.w);
    return sol;
}

// ---------------------------------------------------------------------------
// Suboptimal scaling

/// v = w / max_m(|w_m| / sqrt(p_m)); the relay with the largest |w_m|^2 / p_m (first on ties) lands on its cap.
inline CVector scale_to_caps(const CVector& w, const PowerBudget& budget) {
    budget.validate(w.size());
    Eigen::Index k = 0;
    double worst = -1.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double r = std::norm(w(i)) / budget.p[static_cast<std::size_t>(i)];
        if (r > worst) {
            worst = r;
            k = i;
        }
    }
    if (!(worst > 0.0)) {
        return CVector::Zero(w.size());
    }
    const double theta = std::sqrt(budget.p[static_cast<std::size_t>(k)]) / std::abs(w(k));
    return theta * w;
}

struct SuboptimalSolution {
    Beamformer beamformer;
    double rate = 0.0;
};

/// Total-power optimum at P_T = sum p_m, scaled down until it meets every cap.
inline SuboptimalSolution solve_suboptimal(const ChannelRealization& ch, const PowerBudget& budget) {
    ch.validate();
    budget.validate(ch.relays());
    const TotalSolution total = solve_total(ch, budget.total());
    SuboptimalSolution sol;
    sol.beamformer = make_beamformer(scale_to_caps(total.beamformer.w, budget), ch.h, Method::suboptimal);
    sol.rate = secrecy_rate(ch, sol.beamformer.w);
    return sol;
}

} // namespace crb
