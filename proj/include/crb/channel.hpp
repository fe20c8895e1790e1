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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "crb/error.hpp"
#include "crb/linalg.hpp"
#include "crb/rng.hpp"

namespace crb {

/// One draw of the two-hop network.
///
/// `h` and `z` are stored conjugated, so the destination and eavesdropper
/// see h^H w and z^H w respectively. `g` holds the source-to-relay gains.
struct ChannelRealization {
    CVector g;
    CVector h;
    CVector z;
    std::vector<double> noise_relays; ///< N_m, linear
    double noise_rx = 1.0;            ///< N0 at destination and eavesdropper

    Eigen::Index relays() const noexcept { return h.size(); }

    void validate() const {
        const Eigen::Index m = h.size();
        if (m < 1) {
            throw ValidationError("channel: at least one relay required");
        }
        if (m > kMaxDim) {
            throw ValidationError("channel: relay count exceeds " + std::to_string(kMaxDim));
        }
        if (z.size() != m || g.size() != m) {
            throw ValidationError("channel: g, h, z must have the same length");
        }
        if (static_cast<Eigen::Index>(noise_relays.size()) != m) {
            throw ValidationError("channel: n_relays must have one entry per relay");
        }
        if (!linalg::all_finite(g) || !linalg::all_finite(h) || !linalg::all_finite(z)) {
            throw ValidationError("channel: coefficients must be finite");
        }
        for (double n : noise_relays) {
            if (!(n > 0.0) || !std::isfinite(n)) {
                throw ValidationError("channel: relay noise powers must be positive");
            }
        }
        if (!(noise_rx > 0.0) || !std::isfinite(noise_rx)) {
            throw ValidationError("channel: n0 must be positive");
        }
    }
};

struct SnrPair {
    double dest = 0.0; ///< Gamma_d
    double eve = 0.0;  ///< Gamma_e
};

struct SecrecyResult {
    double snr_dest = 0.0;
    double snr_eve = 0.0;
    double rate_hop2 = 0.0;
    double rate_hop1 = 0.0;
    double rate_overall = 0.0;
};

struct FadingSpec {
    double sigma_g = 1.0;
    double sigma_h = 1.0;
    double sigma_z = 1.0;
    int relays = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(sigma_g > 0.0) || !(sigma_h > 0.0) || !(sigma_z > 0.0)) {
            throw ValidationError("fading: sigma_g, sigma_h, sigma_z must be positive");
        }
        if (relays < 1 || relays > kMaxDim) {
            throw ValidationError("fading: M must be in [1, 64]");
        }
    }
};

inline constexpr double bits_to_nats(double bits) noexcept { return bits * std::numbers::ln2; }

namespace detail {
inline void check_dims(const ChannelRealization& ch, const CVector& w) {
    if (w.size() != ch.h.size() || w.size() != ch.z.size()) {
        throw ValidationError("beamformer length does not match relay count");
    }
}
} // namespace detail

inline SnrPair snr_pair(const ChannelRealization& ch, const CVector& w) {
    detail::check_dims(ch, w);
    // dot() conjugates its first argument: h.dot(w) = h^H w.
    return {std::norm(ch.h.dot(w)) / ch.noise_rx, std::norm(ch.z.dot(w)) / ch.noise_rx};
}

/// log2((N0 + |h^H w|^2) / (N0 + |z^H w|^2)), clamped at zero.
inline double secrecy_rate(const ChannelRealization& ch, const CVector& w) {
    const SnrPair s = snr_pair(ch, w);
    return std::max(0.0, std::log2((1.0 + s.dest) / (1.0 + s.eve)));
}

/// Rate supported by the weakest source-to-relay link.
inline double first_hop_rate(const ChannelRealization& ch, double source_power) {
    if (!(source_power > 0.0)) {
        throw ValidationError("first_hop_rate: P_s must be positive");
    }
    if (ch.noise_relays.size() != static_cast<std::size_t>(ch.g.size())) {
        throw ValidationError("first_hop_rate: n_relays length mismatch");
    }
    double rate = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < ch.g.size(); ++m) {
        const double snr = std::norm(ch.g(m)) * source_power / ch.noise_relays[static_cast<std::size_t>(m)];
        rate = std::min(rate, std::log2(1.0 + snr));
    }
    return rate;
}

inline SecrecyResult overall_rate(const ChannelRealization& ch, const CVector& w, double source_power) {
    const SnrPair s = snr_pair(ch, w);
    SecrecyResult r;
    r.snr_dest = s.dest;
    r.snr_eve = s.eve;
    r.rate_hop2 = std::max(0.0, std::log2((1.0 + s.dest) / (1.0 + s.eve)));
    r.rate_hop1 = first_hop_rate(ch, source_power);
    r.rate_overall = std::min(r.rate_hop1, r.rate_hop2);
    return r;
}

/// Draws g, h, z (in that order) from `rng`.
inline ChannelRealization sample_channel(const FadingSpec& spec, Rng& rng, const std::vector<double>& noise_relays,
                                         double noise_rx) {
    spec.validate();
    const Eigen::Index m = spec.relays;
    ChannelRealization ch;
    ch.g.resize(m);
    ch.h.resize(m);
    ch.z.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        ch.g(i) = rng.complex_normal(spec.sigma_g * spec.sigma_g);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        ch.h(i) = rng.complex_normal(spec.sigma_h * spec.sigma_h);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        ch.z(i) = rng.complex_normal(spec.sigma_z * spec.sigma_z);
    }
    if (noise_relays.size() == 1) {
        ch.noise_relays.assign(static_cast<std::size_t>(m), noise_relays.front());
    } else {
        ch.noise_relays = noise_relays;
    }
    ch.noise_rx = noise_rx;
    ch.validate();
    return ch;
}

/// Seeded convenience overload: a fresh generator from `spec.seed`.
inline ChannelRealization sample_channel(const FadingSpec& spec, const std::vector<double>& noise_relays,
                                         double noise_rx) {
    Rng rng(spec.seed);
    return sample_channel(spec, rng, noise_relays, noise_rx);
}

} // namespace crb
