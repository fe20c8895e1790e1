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

// Beamforming under a total power budget ||w||^2 <= P_T:
//  - the exact optimum via the largest generalized eigenpair of
//    (N0 I + P_T h h^H, N0 I + P_T z z^H),
//  - null-space beamforming (z^H w = 0), optimal as P_T grows,
//  - the principal eigenvector of h h^H - z z^H, optimal as P_T shrinks.
// Every design transmits at full power unless no positive rate exists, in
// which case w = 0.

#include <cmath>
#include <numbers>

#include "crb/beamformer.hpp"
#include "crb/channel.hpp"
#include "crb/linalg.hpp"

namespace crb {

struct TotalSolution {
    Beamformer beamformer;
    double rate = 0.0;        ///< bits/channel use
    double lambda_max = 1.0;  ///< generalized eigenvalue (ratio of 1 + SNRs)
    double residual = 0.0;    ///< ||A u - lambda B u||
};

struct NullSpaceSolution {
    Beamformer beamformer;
    double rate = 0.0;
};

struct LowSnrSolution {
    Beamformer beamformer;
    double rate = 0.0;            ///< achieved secrecy rate of the returned w
    double eigenvalue = 0.0;      ///< lambda_max(h h^H - z z^H)
    double approx_rate = 0.0;     ///< P_T * eigenvalue / (N0 ln 2), the small-power slope
};

namespace detail {
inline void check_power(double p_total) {
    if (!(p_total > 0.0) || !std::isfinite(p_total)) {
        throw ValidationError("total power P_T must be positive and finite");
    }
}
} // namespace detail

inline TotalSolution solve_total(const ChannelRealization& ch, double p_total) {
    ch.validate();
    detail::check_power(p_total);
    const Eigen::Index m = ch.relays();
    const CMatrix id = CMatrix::Identity(m, m);
    const CMatrix a = ch.noise_rx * id + p_total * ch.h * ch.h.adjoint();
    const CMatrix b = ch.noise_rx * id + p_total * ch.z * ch.z.adjoint();
    const linalg::GenEigMax ge = linalg::gen_eig_max(a, b);

    TotalSolution sol;
    sol.lambda_max = ge.lambda_max;
    sol.residual = (a * ge.u - ge.lambda_max * (b * ge.u)).norm();
    if (ge.lambda_max <= 1.0 + 1e-12) {
        sol.beamformer = make_beamformer(CVector::Zero(m), ch.h, Method::total_eig);
        sol.rate = 0.0;
        return sol;
    }
    sol.beamformer = make_beamformer(std::sqrt(p_total) * ge.u, ch.h, Method::total_eig);
    sol.rate = std::log2(ge.lambda_max);
    return sol;
}

inline NullSpaceSolution solve_null_space(const ChannelRealization& ch, double p_total) {
    ch.validate();
    detail::check_power(p_total);
    const Eigen::Index m = ch.relays();
    NullSpaceSolution sol;
    const double hn = ch.h.norm();
    if (!(ch.z.norm() > 0.0)) {
        // Nothing to null: matched beamforming along h.
        if (hn > 0.0) {
            sol.beamformer = make_beamformer(std::sqrt(p_total) / hn * ch.h, ch.h, Method::null_space);
            sol.rate = std::log2(1.0 + p_total * hn * hn / ch.noise_rx);
        } else {
            sol.beamformer = make_beamformer(CVector::Zero(m), ch.h, Method::null_space);
        }
        return sol;
    }
    const CMatrix basis = linalg::null_space_basis(ch.z);
    const CVector proj = basis * (basis.adjoint() * ch.h);
    const double gain = proj.squaredNorm(); // h^H P h for the projector P = H H^H
    if (!(gain > 1e-24 * std::max(1.0, hn * hn))) {
        sol.beamformer = make_beamformer(CVector::Zero(m), ch.h, Method::null_space);
        return sol;
    }
    sol.beamformer = make_beamformer(std::sqrt(p_total / gain) * proj, ch.h, Method::null_space);
    sol.rate = std::log2(1.0 + p_total * gain / ch.noise_rx);
    return sol;
}

inline LowSnrSolution solve_low_snr(const ChannelRealization& ch, double p_total) {
    ch.validate();
    detail::check_power(p_total);
    const Eigen::Index m = ch.relays();
    const CMatrix d = ch.h * ch.h.adjoint() - ch.z * ch.z.adjoint();
    const linalg::HermitianEigen eig = linalg::herm_eig(d);
    LowSnrSolution sol;
    sol.eigenvalue = eig.values(0);
    sol.approx_rate = std::max(0.0, p_total * sol.eigenvalue / (ch.noise_rx * std::numbers::ln2));
    const double scale = std::max(1.0, linalg::max_abs(d));
    if (sol.eigenvalue <= 1e-14 * scale) {
        sol.beamformer = make_beamformer(CVector::Zero(m), ch.h, Method::low_snr);
        return sol;
    }
    sol.beamformer = make_beamformer(std::sqrt(p_total) * eig.vectors.col(0), ch.h, Method::low_snr);
    sol.rate = secrecy_rate(ch, sol.beamformer.w);
    return sol;
}

} // namespace crb
