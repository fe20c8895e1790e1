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

#include <cmath>
#include <string_view>

#include "crb/channel.hpp"

namespace crb {

enum class Method { total_eig, null_space, low_snr, sdr, socp, suboptimal };

inline constexpr std::string_view method_name(Method m) noexcept {
    switch (m) {
    case Method::total_eig: return "total-eig";
    case Method::null_space: return "null-space";
    case Method::low_snr: return "low-snr";
    case Method::sdr: return "sdr";
    case Method::socp: return "socp";
    case Method::suboptimal: return "suboptimal";
    }
    return "unknown";
}

/// Relay weights; |w_m|^2 is the transmit power of relay m.
struct Beamformer {
    CVector w;
    Method method = Method::total_eig;
    double power_used = 0.0;
};

/// Rotate w so that h^H w is real and nonnegative. Leaves w untouched when h^H w = 0.
inline void normalize_phase(CVector& w, const CVector& h) {
    const Complex hw = h.dot(w);
    const double mag = std::abs(hw);
    if (mag > 0.0) {
        w *= std::conj(hw) / mag;
    }
}

inline Beamformer make_beamformer(CVector w, const CVector& h, Method method) {
    normalize_phase(w, h);
    const double power = w.squaredNorm();
    return {std::move(w), method, power};
}

} // namespace crb
