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

// Dense complex linear algebra for relay-count-sized problems (M <= 64).
// Eigen provides the Hermitian eigensolver and the LLT factorization; the
// generalized problem and null-space construction are built on top here.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "crb/error.hpp"

namespace crb {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Eigen::Index kMaxDim = 64;

namespace linalg {

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool all_finite(const CVector& v) {
    return std::all_of(v.data(), v.data() + v.size(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

inline bool is_hermitian(const CMatrix& a, double rel_tol = 1e-12) {
    if (a.rows() != a.cols()) {
        return false;
    }
    const double scale = std::max(1.0, max_abs(a));
    return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

inline void require_hermitian(const CMatrix& a, const char* who) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw ValidationError(std::string(who) + ": matrix must be square and nonempty");
    }
    if (a.rows() > kMaxDim) {
        throw ValidationError(std::string(who) + ": dimension exceeds " + std::to_string(kMaxDim));
    }
    if (!is_hermitian(a)) {
        throw NotHermitianError(std::string(who) + ": matrix is not Hermitian");
    }
}

/// Rotate v so that its largest-magnitude entry (first one on ties) is real and nonnegative.
inline void fix_phase_largest(CVector& v) {
    if (v.size() == 0) {
        return;
    }
    Eigen::Index k = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > best * (1.0 + 1e-12)) {
            best = mag;
            k = i;
        }
    }
    if (best > 0.0) {
        v *= std::conj(v(k)) / best;
        v(k) = Complex(std::abs(v(k)), 0.0);
    }
}

struct HermitianEigen {
    RVector values;  ///< descending
    CMatrix vectors; ///< column i pairs with values(i)
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
inline HermitianEigen herm_eig(const CMatrix& a) {
    require_hermitian(a, "herm_eig");
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw SolverFailure("herm_eig: eigensolver did not converge", 0.0);
    }
    const Eigen::Index n = a.rows();
    HermitianEigen out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

/// Lower-triangular L with L L^H = B. Requires min eig(B) > 1e-12 max eig(B).
inline CMatrix cholesky(const CMatrix& b) {
    require_hermitian(b, "cholesky");
    const CMatrix sym = 0.5 * (b + b.adjoint());
    const RVector ev = Eigen::SelfAdjointEigenSolver<CMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    if (!(ev(ev.size() - 1) > 0.0) || ev(0) <= 1e-12 * ev(ev.size() - 1)) {
        throw NotPositiveDefiniteError("cholesky: matrix is not positive definite");
    }
    Eigen::LLT<CMatrix> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("cholesky: factorization failed");
    }
    return llt.matrixL();
}

struct GenEigMax {
    double lambda_max = 0.0;
    CVector u; ///< unit norm, largest-magnitude entry real nonnegative
};

/// Largest generalized eigenpair of (A, B) by Cholesky reduction:
/// C = L^{-1} A L^{-H}, C y = lambda y, u = L^{-H} y.
inline GenEigMax gen_eig_max(const CMatrix& a, const CMatrix& b) {
    require_hermitian(a, "gen_eig_max");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("gen_eig_max: dimension mismatch");
    }
    const CMatrix l = cholesky(b);
    const auto lower = l.triangularView<Eigen::Lower>();
    // C = L^{-1} A L^{-H}
    CMatrix tmp = lower.solve(a);
    CMatrix c = lower.solve(tmp.adjoint()).adjoint();
    c = 0.5 * (c + c.adjoint()).eval();
    const HermitianEigen eig = herm_eig(c);
    CVector u = lower.adjoint().solve(eig.vectors.col(0));
    u.normalize();
    fix_phase_largest(u);
    return {eig.values(0), u};
}

/// Orthonormal basis (M x (M-1)) of the null space of the row z^H,
/// taken as columns 2..M of the Householder reflector mapping z onto e1.
inline CMatrix null_space_basis(const CVector& z) {
    const Eigen::Index m = z.size();
    if (m < 2) {
        throw NullSpaceEmptyError("null_space_basis: M = 1 has no null space");
    }
    if (m > kMaxDim) {
        throw ValidationError("null_space_basis: dimension exceeds " + std::to_string(kMaxDim));
    }
    const double nz = z.norm();
    if (!(nz > 0.0)) {
        throw DegenerateChannelError("null_space_basis: z = 0");
    }
    const Complex phase = std::abs(z(0)) > 0.0 ? z(0) / std::abs(z(0)) : Complex(1.0, 0.0);
    CVector v = z;
    v(0) += phase * nz;
    const double vv = v.squaredNorm();
    // Q = I - 2 v v^H / (v^H v); Q z = -phase*|z| e1.
    CMatrix q = CMatrix::Identity(m, m) - (2.0 / vv) * v * v.adjoint();
    return q.rightCols(m - 1);
}

} // namespace linalg
} // namespace crb
