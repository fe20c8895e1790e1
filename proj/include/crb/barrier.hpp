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

// Small dense log-barrier interior-point solvers.
//
// Two problem families are covered, both sized for a few dozen variables:
//
//  * LMI duals of diagonal-capped Hermitian SDPs. The primal
//        max  -tr(S0 X)   s.t. X_mm <= b_m,  [tr(F X) <= b_f],  X >= 0
//    is solved through its dual
//        min  b.y [+ b_f mu]   s.t. S(y, mu) = S0 + diag(y) [+ mu F] >= 0,  y, mu >= 0
//    with the barrier  -ln det S - sum ln y_m [- ln mu].  On the central path
//    X = S^{-1} / tau is primal feasible and the gap is (dim + #multipliers)/tau.
//
//  * Real problems with a linear-plus-quadratic objective and constraints of
//    the form q(v) = v^T Q v + g^T v + r > 0 (optionally with a linear guard
//    l^T v + l0 > 0 selecting one branch of a second-order cone).
//
// Both accept a callback invoked after every centering step; returning
// Control::stop ends the run early, which is how feasibility tests exit once a
// certificate is in hand.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "crb/error.hpp"
#include "crb/linalg.hpp"

namespace crb::barrier {

struct Settings {
    double gap_tol = 1e-9;     ///< stop when gap <= gap_tol * max(1, |objective|)
    double tau_growth = 10.0;
    int max_newton = 200;      ///< per centering step
    int max_outer = 80;
    double newton_tol = 1e-9;  ///< half squared Newton decrement
    /// Accept a stalled line search as converged when the gap bound is below this.
    double stall_gap_tol = 1e-6;
};

enum class Control { proceed, stop };

namespace detail {

/// Solve H d = -g for a symmetric positive (semi)definite H, regularizing if needed.
inline RVector newton_direction(const RMatrix& hess, const RVector& grad) {
    Eigen::LLT<RMatrix> llt(hess);
    if (llt.info() == Eigen::Success) {
        RVector d = -llt.solve(grad);
        if (d.allFinite()) {
            return d;
        }
    }
    const double scale = std::max(1e-300, hess.diagonal().cwiseAbs().maxCoeff());
    for (double reg = 1e-14; reg < 1.0; reg *= 100.0) {
        RMatrix h = hess;
        h.diagonal().array() += reg * scale;
        Eigen::LLT<RMatrix> l2(h);
        if (l2.info() == Eigen::Success) {
            return -l2.solve(grad);
        }
    }
    return -grad / scale;
}

} // namespace detail

// ---------------------------------------------------------------------------
// LMI dual barrier

struct LmiProblem {
    CMatrix s0;                ///< Hermitian
    RVector b;                 ///< bounds on diag(X), one per row
    std::optional<CMatrix> f;  ///< extra Hermitian constraint matrix
    double b_f = 0.0;
};

struct LmiIterate {
    RVector y;
    double mu = 0.0;           ///< meaningful only when the problem has f
    double tau = 0.0;
    CMatrix s;                 ///< dual slack S(y, mu)
    CMatrix x;                 ///< primal estimate S^{-1} / tau
    double dual_objective = 0.0;
    double gap_bound = 0.0;
    int newton_steps = 0;
    int outer_steps = 0;
    bool stalled = false;
};

class LmiDualSolver {
public:
    using Callback = std::function<Control(const LmiIterate&)>;

    LmiDualSolver(LmiProblem problem, Settings settings = {})
        : p_(std::move(problem)), settings_(settings), n_(p_.s0.rows()),
          k_(n_ + (p_.f ? 1 : 0)) {
        if (p_.b.size() != n_) {
            throw ValidationError("LMI problem: bound vector length mismatch");
        }
    }

    /// Runs from a strictly dual-feasible start (S(y0, mu0) > 0, y0 > 0, mu0 > 0).
    LmiIterate solve(const RVector& y0, double mu0, const Callback& callback = {}) const {
        LmiIterate it;
        it.y = y0;
        it.mu = p_.f ? mu0 : 0.0;
        if (!slack_factor(it.y, it.mu)) {
            throw ValidationError("LMI problem: starting point is not strictly feasible");
        }
        const double obj0 = dual_objective(it.y, it.mu);
        it.tau = static_cast<double>(n_ + k_) / std::max(std::abs(obj0), 1e-12);
        for (int outer = 0; outer < settings_.max_outer; ++outer) {
            it.outer_steps = outer + 1;
            it.stalled = center(it);
            finish_iterate(it);
            if (callback && callback(it) == Control::stop) {
                return it;
            }
            const double scale = std::max(1.0, std::abs(it.dual_objective));
            if (it.gap_bound <= settings_.gap_tol * scale) {
                return it;
            }
            if (it.stalled) {
                if (it.gap_bound <= settings_.stall_gap_tol * scale) {
                    return it;
                }
                throw SolverFailure("LMI barrier: line search stalled", it.gap_bound);
            }
            it.tau *= settings_.tau_growth;
        }
        throw SolverFailure("LMI barrier: outer iteration cap reached", it.gap_bound);
    }

private:
    CMatrix slack(const RVector& y, double mu) const {
        CMatrix s = p_.s0;
        s.diagonal() += y.cast<Complex>();
        if (p_.f) {
            s += mu * (*p_.f);
        }
        return s;
    }

    std::optional<Eigen::LLT<CMatrix>> slack_factor(const RVector& y, double mu) const {
        if ((y.array() <= 0.0).any() || (p_.f && !(mu > 0.0))) {
            return std::nullopt;
        }
        Eigen::LLT<CMatrix> llt(slack(y, mu));
        if (llt.info() != Eigen::Success) {
            return std::nullopt;
        }
        const auto d = llt.matrixLLT().diagonal().real();
        if (!(d.array() > 0.0).all() || !d.allFinite()) {
            return std::nullopt;
        }
        return llt;
    }

    double dual_objective(const RVector& y, double mu) const {
        return p_.b.dot(y) + (p_.f ? p_.b_f * mu : 0.0);
    }

    /// Barrier value, or +inf outside the domain.
    double value(const RVector& y, double mu, double tau) const {
        const auto llt = slack_factor(y, mu);
        if (!llt) {
            return std::numeric_limits<double>::infinity();
        }
        const double logdet = 2.0 * llt->matrixLLT().diagonal().real().array().log().sum();
        double v = tau * dual_objective(y, mu) - logdet - y.array().log().sum();
        if (p_.f) {
            v -= std::log(mu);
        }
        return v;
    }

    /// Newton centering at fixed tau. Returns true when the line search stalled.
    bool center(LmiIterate& it) const {
        const Eigen::Index nv = k_;
        for (int step = 0; step < settings_.max_newton; ++step) {
            const auto llt = slack_factor(it.y, it.mu);
            const CMatrix g = llt->solve(CMatrix::Identity(n_, n_));
            RVector grad(nv);
            RMatrix hess(nv, nv);
            for (Eigen::Index i = 0; i < n_; ++i) {
                grad(i) = it.tau * p_.b(i) - g(i, i).real() - 1.0 / it.y(i);
                for (Eigen::Index j = 0; j < n_; ++j) {
                    hess(i, j) = std::norm(g(i, j));
                }
                hess(i, i) += 1.0 / (it.y(i) * it.y(i));
            }
            if (p_.f) {
                const CMatrix gf = g * (*p_.f);
                const CMatrix gfg = gf * g;
                grad(n_) = it.tau * p_.b_f - gf.trace().real() - 1.0 / it.mu;
                for (Eigen::Index i = 0; i < n_; ++i) {
                    hess(i, n_) = hess(n_, i) = gfg(i, i).real();
                }
                hess(n_, n_) = (gf * gf).trace().real() + 1.0 / (it.mu * it.mu);
            }
            const RVector dir = detail::newton_direction(hess, grad);
            const double slope = grad.dot(dir);
            if (!(slope < 0.0) || -0.5 * slope <= settings_.newton_tol) {
                return false;
            }
            const double f0 = value(it.y, it.mu, it.tau);
            double alpha = 1.0;
            bool accepted = false;
            while (alpha > 1e-16) {
                const RVector y1 = it.y + alpha * dir.head(n_);
                const double mu1 = p_.f ? it.mu + alpha * dir(n_) : 0.0;
                const double f1 = value(y1, mu1, it.tau);
                if (f1 <= f0 + 0.25 * alpha * slope) {
                    it.y = y1;
                    it.mu = mu1;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++it.newton_steps;
            if (!accepted) {
                return true;
            }
        }
        return false;
    }

    void finish_iterate(LmiIterate& it) const {
        it.s = slack(it.y, it.mu);
        const auto llt = slack_factor(it.y, it.mu);
        CMatrix x = llt->solve(CMatrix::Identity(n_, n_)) / it.tau;
        it.x = 0.5 * (x + x.adjoint());
        it.dual_objective = dual_objective(it.y, it.mu);
        it.gap_bound = static_cast<double>(n_ + k_) / it.tau;
    }

    LmiProblem p_;
    Settings settings_;
    Eigen::Index n_;
    Eigen::Index k_;
};

// ---------------------------------------------------------------------------
// Real quadratic-constraint barrier

/// q(v) = v^T Q v + g^T v + r > 0, and guard^T v + guard_r > 0 when a guard is set.
struct QuadConstraint {
    RMatrix q;
    RVector g;
    double r = 0.0;
    std::optional<RVector> guard;
    double guard_r = 0.0;
    double nu = 1.0; ///< barrier parameter contribution (2 for a second-order cone)

    double eval(const RVector& v) const { return v.dot(q * v) + g.dot(v) + r; }
    bool inside(const RVector& v) const {
        if (guard && !(guard->dot(v) + guard_r > 0.0)) {
            return false;
        }
        return eval(v) > 0.0;
    }
};

struct QuadProblem {
    RVector c;                      ///< linear objective
    std::optional<RMatrix> p;       ///< quadratic objective v^T P v, P >= 0
    std::vector<QuadConstraint> constraints;

    double objective(const RVector& v) const {
        double o = c.dot(v);
        if (p) {
            o += v.dot(*p * v);
        }
        return o;
    }
};

struct QuadIterate {
    RVector v;
    double tau = 0.0;
    double objective = 0.0;
    double gap_bound = 0.0;
    int newton_steps = 0;
    int outer_steps = 0;
    bool stalled = false;
};

class QuadBarrierSolver {
public:
    using Callback = std::function<Control(const QuadIterate&)>;

    QuadBarrierSolver(QuadProblem problem, Settings settings = {})
        : p_(std::move(problem)), settings_(settings) {
        for (const auto& c : p_.constraints) {
            nu_ += c.nu;
        }
    }

    /// Minimizes the objective from a strictly feasible v0. `tau0` <= 0 picks a default.
    QuadIterate solve(const RVector& v0, double tau0 = 0.0, const Callback& callback = {}) const {
        QuadIterate it;
        it.v = v0;
        if (!inside(it.v)) {
            throw ValidationError("barrier: starting point is not strictly feasible");
        }
        it.tau = tau0 > 0.0 ? tau0 : nu_ / std::max(std::abs(p_.objective(v0)), 1e-12);
        for (int outer = 0; outer < settings_.max_outer; ++outer) {
            it.outer_steps = outer + 1;
            it.stalled = center(it);
            it.objective = p_.objective(it.v);
            it.gap_bound = nu_ / it.tau;
            if (callback && callback(it) == Control::stop) {
                return it;
            }
            const double scale = std::max(1.0, std::abs(it.objective));
            if (it.gap_bound <= settings_.gap_tol * scale) {
                return it;
            }
            if (it.stalled) {
                if (it.gap_bound <= settings_.stall_gap_tol * scale) {
                    return it;
                }
                throw SolverFailure("barrier: line search stalled", it.gap_bound);
            }
            it.tau *= settings_.tau_growth;
        }
        throw SolverFailure("barrier: outer iteration cap reached", it.gap_bound);
    }

private:
    bool inside(const RVector& v) const {
        for (const auto& c : p_.constraints) {
            if (!c.inside(v)) {
                return false;
            }
        }
        return true;
    }

    double value(const RVector& v, double tau) const {
        double f = tau * p_.objective(v);
        for (const auto& c : p_.constraints) {
            if (!c.inside(v)) {
                return std::numeric_limits<double>::infinity();
            }
            f -= std::log(c.eval(v));
        }
        return f;
    }

    bool center(QuadIterate& it) const {
        const Eigen::Index n = it.v.size();
        for (int step = 0; step < settings_.max_newton; ++step) {
            RVector grad = it.tau * p_.c;
            RMatrix hess = RMatrix::Zero(n, n);
            if (p_.p) {
                grad += 2.0 * it.tau * (*p_.p * it.v);
                hess += 2.0 * it.tau * (*p_.p);
            }
            for (const auto& c : p_.constraints) {
                const RVector qv = c.q * it.v;
                const double val = it.v.dot(qv) + c.g.dot(it.v) + c.r;
                const RVector dq = 2.0 * qv + c.g;
                grad -= dq / val;
                hess.noalias() += (dq * dq.transpose()) / (val * val);
                hess -= (2.0 / val) * c.q;
            }
            const RVector dir = detail::newton_direction(hess, grad);
            const double slope = grad.dot(dir);
            if (!(slope < 0.0) || -0.5 * slope <= settings_.newton_tol) {
                return false;
            }
            const double f0 = value(it.v, it.tau);
            double alpha = 1.0;
            bool accepted = false;
            while (alpha > 1e-16) {
                const RVector v1 = it.v + alpha * dir;
                if (value(v1, it.tau) <= f0 + 0.25 * alpha * slope) {
                    it.v = v1;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            ++it.newton_steps;
            if (!accepted) {
                return true;
            }
        }
        return false;
    }

    QuadProblem p_;
    Settings settings_;
    double nu_ = 0.0;
};

} // namespace crb::barrier
