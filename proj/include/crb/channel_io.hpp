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

// Text record for one channel realization:
//   {"g": [[re, im], ...], "h": [...], "z": [...], "n_relays": [...], "n0": x}
// "n_relays" may also be a single number, broadcast to every relay.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "crb/channel.hpp"

namespace crb {

namespace io {

using nlohmann::json;

inline json to_json(const CVector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back({v(i).real(), v(i).imag()});
    }
    return arr;
}

inline CVector cvector_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) {
        throw ValidationError("field '" + field + "' must be an array of [re, im] pairs");
    }
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        if (e.is_number()) {
            v(static_cast<Eigen::Index>(i)) = Complex(e.get<double>(), 0.0);
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
        } else {
            throw ValidationError("field '" + field + "' entry " + std::to_string(i) + " is not [re, im]");
        }
    }
    return v;
}

inline json channel_to_json(const ChannelRealization& ch) {
    return json{{"g", to_json(ch.g)},
                {"h", to_json(ch.h)},
                {"z", to_json(ch.z)},
                {"n_relays", ch.noise_relays},
                {"n0", ch.noise_rx}};
}

inline ChannelRealization channel_from_json(const json& j) {
    if (!j.is_object()) {
        throw ValidationError("channel record must be a JSON object");
    }
    for (const char* key : {"h", "z"}) {
        if (!j.contains(key)) {
            throw ValidationError(std::string("channel record is missing field '") + key + "'");
        }
    }
    ChannelRealization ch;
    ch.h = cvector_from_json(j.at("h"), "h");
    ch.z = cvector_from_json(j.at("z"), "z");
    const Eigen::Index m = ch.h.size();
    ch.g = j.contains("g") ? cvector_from_json(j.at("g"), "g") : CVector::Ones(m);
    ch.noise_rx = 1.0;
    if (j.contains("n0")) {
        if (!j.at("n0").is_number()) {
            throw ValidationError("field 'n0' must be a number");
        }
        ch.noise_rx = j.at("n0").get<double>();
    }
    if (!j.contains("n_relays")) {
        ch.noise_relays.assign(static_cast<std::size_t>(m), 1.0);
    } else if (j.at("n_relays").is_number()) {
        ch.noise_relays.assign(static_cast<std::size_t>(m), j.at("n_relays").get<double>());
    } else if (j.at("n_relays").is_array()) {
        for (const json& e : j.at("n_relays")) {
            if (!e.is_number()) {
                throw ValidationError("field 'n_relays' must hold numbers");
            }
            ch.noise_relays.push_back(e.get<double>());
        }
    } else {
        throw ValidationError("field 'n_relays' must be a number or an array");
    }
    ch.validate();
    return ch;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

inline ChannelRealization load_channel(const std::string& path) {
    return channel_from_json(parse_json(read_text_file(path), path));
}

} // namespace io
} // namespace crb
