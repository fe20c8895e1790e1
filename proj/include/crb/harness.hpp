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

// Monte Carlo sweeps over total relay power or relay count.
//
// Channel streams: for a power sweep, trial i uses stream derive_seed(seed, i)
// at every grid point, so curves along P_T share channel draws. For a relay
// sweep, trial i at M uses derive_seed(derive_seed(seed, M), i), so channels
// are redrawn per M. Work is spread over threads by (grid point, trial) and
// reduced in grid-then-trial order, so output does not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "crb/beamform_individual.hpp"
#include "crb/beamform_total.hpp"
#include "crb/channel.hpp"
#include "crb/rng.hpp"

namespace crb {

enum class SweepVariable { total_power, relays };

enum class MethodId { total, individual_sdr, individual_socp, suboptimal, null_space, low_snr };

inline constexpr std::string_view method_id_name(MethodId m) noexcept {
    switch (m) {
    case MethodId::total: return "total";
    case MethodId::individual_sdr: return "individual-sdr";
    case MethodId::individual_socp: return "individual-socp";
    case MethodId::suboptimal: return "suboptimal";
    case MethodId::null_space: return "null-space";
    case MethodId::low_snr: return "low-snr";
    }
    return "unknown";
}

inline std::optional<MethodId> parse_method_id(std::string_view s) {
    for (MethodId m : {MethodId::total, MethodId::individual_sdr, MethodId::individual_socp, MethodId::suboptimal,
                       MethodId::null_space, MethodId::low_snr}) {
        if (method_id_name(m) == s) {
            return m;
        }
    }
    return std::nullopt;
}

inline constexpr std::string_view sweep_variable_name(SweepVariable v) noexcept {
    return v == SweepVariable::total_power ? "P_T" : "M";
}

struct ExperimentSpec {
    FadingSpec fading;                        ///< `relays` is the fixed M of a power sweep
    double n0 = 1.0;
    std::vector<double> n_relays_noise{1.0};  ///< one value broadcasts to every relay
    std::optional<std::vector<double>> budget_weights; ///< unset: equal split
    SweepVariable variable = SweepVariable::total_power;
    std::vector<double> grid{0.5, 1, 2, 4, 8, 16, 32};
    double total_power = 10.0;                ///< fixed P_T of a relay sweep
    std::vector<MethodId> methods{MethodId::total, MethodId::individual_sdr, MethodId::individual_socp,
                                  MethodId::suboptimal};
    int trials = 100;
    std::uint64_t seed = 1;
    std::optional<double> source_power;       ///< P_s; enables overall-rate columns
    int threads = 1;
    SolverConfig solver;
    double max_failure_fraction = 0.01;

    void validate() const {
        auto fail = [](const std::string& field, const std::string& why) {
            throw ValidationError("experiment field '" + field + "': " + why);
        };
        if (!(fading.sigma_g > 0.0)) fail("fading.sigma_g", "must be positive");
        if (!(fading.sigma_h > 0.0)) fail("fading.sigma_h", "must be positive");
        if (!(fading.sigma_z > 0.0)) fail("fading.sigma_z", "must be positive");
        if (!(n0 > 0.0)) fail("n0", "must be positive");
        if (n_relays_noise.empty()) fail("n_relays_noise", "must not be empty");
        for (double v : n_relays_noise) {
            if (!(v > 0.0)) fail("n_relays_noise", "entries must be positive");
        }
        if (trials < 1) fail("trials", "must be at least 1");
        if (threads < 1) fail("threads", "must be at least 1");
        if (grid.empty()) fail("sweep.grid", "must not be empty");
        if (!std::is_sorted(grid.begin(), grid.end()) ||
            std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
            fail("sweep.grid", "must be strictly ascending");
        }
        if (methods.empty()) fail("methods", "must not be empty");
        if (!(solver.bisection.tol_rel > 0.0)) fail("solver.tol_rel", "must be positive");
        if (solver.bisection.max_iters < 1) fail("solver.max_iters", "must be at least 1");
        if (!(solver.barrier.gap_tol > 0.0)) fail("solver.gap_tol", "must be positive");
        if (solver.barrier.max_outer < 1) fail("solver.max_outer", "must be at least 1");
        if (solver.barrier.max_newton < 1) fail("solver.max_newton", "must be at least 1");
        if (source_power && !(*source_power > 0.0)) fail("p_s", "must be positive");
        if (variable == SweepVariable::total_power) {
            if (fading.relays < 1 || fading.relays > kMaxDim) fail("fading.M", "must be in [1, 64]");
            for (double v : grid) {
                if (!(v > 0.0) || !std::isfinite(v)) fail("sweep.grid", "P_T values must be positive");
            }
            if (n_relays_noise.size() != 1 && static_cast<int>(n_relays_noise.size()) != fading.relays) {
                fail("n_relays_noise", "needs one value or one per relay");
            }
        } else {
            if (!(total_power > 0.0)) fail("sweep.p_t", "must be positive");
            for (double v : grid) {
                if (v < 1 || v > kMaxDim || v != std::floor(v)) fail("sweep.grid", "M values must be integers in [1, 64]");
            }
            if (n_relays_noise.size() != 1) fail("n_relays_noise", "relay sweeps need a single broadcast value");
            if (budget_weights) fail("budget_rule", "explicit budgets need a P_T sweep");
        }
        if (budget_weights) {
            if (static_cast<int>(budget_weights->size()) != fading.relays) {
                fail("budget_rule", "explicit list needs one weight per relay");
            }
            for (double v : *budget_weights) {
                if (!(v > 0.0)) fail("budget_rule", "weights must be positive");
            }
        }
    }
};

enum class TrialStatus { ok, failed, not_applicable };

struct MethodOutcome {
    TrialStatus status = TrialStatus::ok;
    double rate = 0.0;         ///< second-hop secrecy rate, bits
    double overall = 0.0;      ///< min(C_1, rate) when P_s is set
    double rank_ratio = 0.0;   ///< individual-sdr only
    std::string reason;
};

struct TrialRecord {
    std::size_t grid_index = 0;
    int trial = 0;
    std::vector<MethodOutcome> outcomes; ///< parallel to ExperimentSpec::methods
};

struct SweepRow {
    double value = 0.0;
    MethodId method = MethodId::total;
    double mean_rate = 0.0;
    double std_error = 0.0;
    int trials_ok = 0;
    int trials_failed = 0;
    int trials_not_applicable = 0;
    double mean_overall = 0.0;
    double overall_std_error = 0.0;
};

struct SweepResult {
    SweepVariable variable = SweepVariable::total_power;
    bool has_overall = false;
    std::vector<SweepRow> rows;          ///< grid-major, then methods in spec order
    std::vector<TrialRecord> trials;     ///< grid-major, then trial index

    const SweepRow& row(std::size_t grid_index, std::size_t method_index, std::size_t n_methods) const {
        return rows.at(grid_index * n_methods + method_index);
    }
};

class ExperimentAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline MethodOutcome run_method(MethodId id, const ChannelRealization& ch, double p_total, const PowerBudget& budget,
                                const ExperimentSpec& spec) {
    MethodOutcome out;
    try {
        CVector w;
        switch (id) {
        case MethodId::total: {
            const TotalSolution s = solve_total(ch, p_total);
            out.rate = s.rate;
            break;
        }
        case MethodId::individual_sdr:
        case MethodId::individual_socp: {
            const IndividualSolution s =
                solve_individual(ch, budget, spec.solver, id == MethodId::individual_sdr ? Path::sdr : Path::socp);
            out.rate = s.rate;
            out.rank_ratio = s.diagnostics.rank_ratio;
            break;
        }
        case MethodId::suboptimal:
            out.rate = solve_suboptimal(ch, budget).rate;
            break;
        case MethodId::null_space:
            if (ch.relays() < 2) {
                out.status = TrialStatus::not_applicable;
                out.reason = "null space is empty for M = 1";
                return out;
            }
            out.rate = solve_null_space(ch, p_total).rate;
            break;
        case MethodId::low_snr:
            out.rate = solve_low_snr(ch, p_total).rate;
            break;
        }
        if (!std::isfinite(out.rate)) {
            throw SolverFailure("non-finite rate", 0.0);
        }
        if (spec.source_power) {
            out.overall = std::min(first_hop_rate(ch, *spec.source_power), out.rate);
        }
    } catch (const std::exception& e) {
        out.status = TrialStatus::failed;
        out.reason = e.what();
    }
    return out;
}

inline TrialRecord run_trial(const ExperimentSpec& spec, std::size_t grid_index, int trial) {
    const double value = spec.grid[grid_index];
    FadingSpec fading = spec.fading;
    double p_total = value;
    std::uint64_t stream_seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
    if (spec.variable == SweepVariable::relays) {
        fading.relays = static_cast<int>(value);
        p_total = spec.total_power;
        stream_seed = derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(fading.relays)),
                                  static_cast<std::uint64_t>(trial));
    }
    Rng rng(stream_seed);
    const ChannelRealization ch = sample_channel(fading, rng, spec.n_relays_noise, spec.n0);

    PowerBudget budget;
    if (spec.budget_weights) {
        double s = 0.0;
        for (double v : *spec.budget_weights) s += v;
        for (double v : *spec.budget_weights) budget.p.push_back(p_total * v / s);
    } else {
        budget = PowerBudget::equal_split(p_total, fading.relays);
    }

    TrialRecord rec;
    rec.grid_index = grid_index;
    rec.trial = trial;
    for (MethodId id : spec.methods) {
        rec.outcomes.push_back(run_method(id, ch, p_total, budget, spec));
    }
    return rec;
}

struct MeanStd {
    double mean = 0.0;
    double std_error = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& v) {
    MeanStd r;
    if (v.empty()) {
        r.mean = r.std_error = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
    }
    return r;
}

} // namespace detail

inline SweepResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_grid = spec.grid.size();
    const auto n_trials = static_cast<std::size_t>(spec.trials);
    const std::size_t n_tasks = n_grid * n_trials;

    SweepResult result;
    result.variable = spec.variable;
    result.has_overall = spec.source_power.has_value();
    result.trials.resize(n_tasks);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < n_tasks; task = next++) {
            result.trials[task] = detail::run_trial(spec, task / n_trials, static_cast<int>(task % n_trials));
        }
    };
    const int n_threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(spec.threads), n_tasks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
            SweepRow row;
            row.value = spec.grid[gi];
            row.method = spec.methods[mi];
            std::vector<double> rates;
            std::vector<double> overall;
            std::string first_reason;
            for (std::size_t ti = 0; ti < n_trials; ++ti) {
                const MethodOutcome& o = result.trials[gi * n_trials + ti].outcomes[mi];
                switch (o.status) {
                case TrialStatus::ok:
                    rates.push_back(o.rate);
                    overall.push_back(o.overall);
                    break;
                case TrialStatus::failed:
                    ++row.trials_failed;
                    if (first_reason.empty()) first_reason = o.reason;
                    break;
                case TrialStatus::not_applicable:
                    ++row.trials_not_applicable;
                    break;
                }
            }
            if (row.trials_failed > spec.max_failure_fraction * spec.trials) {
                std::ostringstream msg;
                msg << method_id_name(row.method) << " failed on " << row.trials_failed << " of " << spec.trials
                    << " trials at " << sweep_variable_name(spec.variable) << " = " << row.value << ": "
                    << first_reason;
                throw ExperimentAborted(msg.str());
            }
            row.trials_ok = static_cast<int>(rates.size());
            const detail::MeanStd r = detail::mean_std(rates);
            row.mean_rate = r.mean;
            row.std_error = r.std_error;
            if (result.has_overall) {
                const detail::MeanStd o = detail::mean_std(overall);
                row.mean_overall = o.mean;
                row.overall_std_error = o.std_error;
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

/// Relay-count sweep at fixed total power: run_experiment with the sweep variable forced to M.
inline SweepResult run_relay_sweep(ExperimentSpec spec) {
    spec.variable = SweepVariable::relays;
    return run_experiment(spec);
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {
inline std::string fmt_num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
} // namespace detail

/// Columns: sweep_var,value,method,mean_rate_bits,stderr,trials_ok,trials_failed
/// (+ mean_overall_bits,overall_stderr when a source power was configured).
inline std::string to_csv(const SweepResult& r) {
    std::string out = "sweep_var,value,method,mean_rate_bits,stderr,trials_ok,trials_failed";
    if (r.has_overall) {
        out += ",mean_overall_bits,overall_stderr";
    }
    out += '\n';
    for (const SweepRow& row : r.rows) {
        out += sweep_variable_name(r.variable);
        out += ',' + detail::fmt_num(row.value);
        out += ',';
        out += method_id_name(row.method);
        out += ',' + detail::fmt_num(row.mean_rate);
        out += ',' + detail::fmt_num(row.std_error);
        out += ',' + std::to_string(row.trials_ok);
        out += ',' + std::to_string(row.trials_failed);
        if (r.has_overall) {
            out += ',' + detail::fmt_num(row.mean_overall);
            out += ',' + detail::fmt_num(row.overall_std_error);
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

using nlohmann::json;

inline double number_field(const json& j, const std::string& key, const std::string& path) {
    if (!j.at(key).is_number()) {
        throw ValidationError("experiment field '" + path + "': must be a number");
    }
    return j.at(key).get<double>();
}

inline std::vector<double> number_list(const json& j, const std::string& path) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
        return out;
    }
    if (!j.is_array()) {
        throw ValidationError("experiment field '" + path + "': must be a number or a list of numbers");
    }
    for (const json& e : j) {
        if (!e.is_number()) {
            throw ValidationError("experiment field '" + path + "': entries must be numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::uint64_t parse_seed(const std::string& s, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos, 0);
        if (pos != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ValidationError(origin + ": seed must be an unsigned 64-bit integer");
    }
}

} // namespace detail

/// Builds an ExperimentSpec from its JSON form. Unknown keys are rejected by name.
/// CRB_SEED in the environment overrides "seed".
inline ExperimentSpec experiment_from_json(const nlohmann::json& j) {
    using detail::json;
    if (!j.is_object()) {
        throw ValidationError("experiment config must be a JSON object");
    }
    static const std::vector<std::string> known{"fading", "n0", "n_relays_noise", "budget_rule", "sweep",
                                                "methods", "trials", "seed", "p_s", "threads", "solver"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError("experiment field '" + key + "': unknown field");
        }
    }
    ExperimentSpec spec;
    if (j.contains("fading")) {
        const json& f = j.at("fading");
        if (!f.is_object()) throw ValidationError("experiment field 'fading': must be an object");
        for (const auto& [key, _] : f.items()) {
            if (key != "sigma_g" && key != "sigma_h" && key != "sigma_z" && key != "M") {
                throw ValidationError("experiment field 'fading." + key + "': unknown field");
            }
        }
        if (f.contains("sigma_g")) spec.fading.sigma_g = detail::number_field(f, "sigma_g", "fading.sigma_g");
        if (f.contains("sigma_h")) spec.fading.sigma_h = detail::number_field(f, "sigma_h", "fading.sigma_h");
        if (f.contains("sigma_z")) spec.fading.sigma_z = detail::number_field(f, "sigma_z", "fading.sigma_z");
        if (f.contains("M")) {
            const double m = detail::number_field(f, "M", "fading.M");
            if (m != std::floor(m)) throw ValidationError("experiment field 'fading.M': must be an integer");
            spec.fading.relays = static_cast<int>(m);
        }
    }
    if (j.contains("n0")) spec.n0 = detail::number_field(j, "n0", "n0");
    if (j.contains("n_relays_noise")) spec.n_relays_noise = detail::number_list(j.at("n_relays_noise"), "n_relays_noise");
    if (j.contains("budget_rule")) {
        const json& b = j.at("budget_rule");
        if (b.is_string()) {
            if (b.get<std::string>() != "equal-split") {
                throw ValidationError("experiment field 'budget_rule': expected \"equal-split\" or a list");
            }
        } else {
            spec.budget_weights = detail::number_list(b, "budget_rule");
        }
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (!s.is_object()) throw ValidationError("experiment field 'sweep': must be an object");
        if (s.contains("variable")) {
            const json& v = s.at("variable");
            const std::string name = v.is_string() ? v.get<std::string>() : "";
            if (name == "P_T") {
                spec.variable = SweepVariable::total_power;
            } else if (name == "M") {
                spec.variable = SweepVariable::relays;
                spec.grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
            } else {
                throw ValidationError("experiment field 'sweep.variable': expected \"P_T\" or \"M\"");
            }
        }
        if (s.contains("grid")) spec.grid = detail::number_list(s.at("grid"), "sweep.grid");
        if (s.contains("p_t")) spec.total_power = detail::number_field(s, "p_t", "sweep.p_t");
    }
    if (j.contains("methods")) {
        const json& ms = j.at("methods");
        if (!ms.is_array()) throw ValidationError("experiment field 'methods': must be a list");
        spec.methods.clear();
        for (const json& m : ms) {
            const auto id = m.is_string() ? parse_method_id(m.get<std::string>()) : std::nullopt;
            if (!id) {
                throw ValidationError("experiment field 'methods': unknown method " + m.dump());
            }
            spec.methods.push_back(*id);
        }
    }
    if (j.contains("trials")) {
        const double t = detail::number_field(j, "trials", "trials");
        if (t != std::floor(t)) throw ValidationError("experiment field 'trials': must be an integer");
        spec.trials = static_cast<int>(t);
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0)) {
            spec.seed = s.get<std::uint64_t>();
        } else if (s.is_string()) {
            spec.seed = detail::parse_seed(s.get<std::string>(), "experiment field 'seed'");
        } else {
            throw ValidationError("experiment field 'seed': must be a nonnegative integer");
        }
    }
    if (j.contains("p_s")) spec.source_power = detail::number_field(j, "p_s", "p_s");
    if (j.contains("threads")) spec.threads = static_cast<int>(detail::number_field(j, "threads", "threads"));
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (!s.is_object()) throw ValidationError("experiment field 'solver': must be an object");
        for (const auto& [key, _] : s.items()) {
            if (key != "tol_rel" && key != "max_iters" && key != "gap_tol" && key != "max_outer" && key != "max_newton") {
                throw ValidationError("experiment field 'solver." + key + "': unknown field");
            }
        }
        if (s.contains("tol_rel")) spec.solver.bisection.tol_rel = detail::number_field(s, "tol_rel", "solver.tol_rel");
        if (s.contains("max_iters")) spec.solver.bisection.max_iters = static_cast<int>(detail::number_field(s, "max_iters", "solver.max_iters"));
        if (s.contains("gap_tol")) spec.solver.barrier.gap_tol = detail::number_field(s, "gap_tol", "solver.gap_tol");
        if (s.contains("max_outer")) spec.solver.barrier.max_outer = static_cast<int>(detail::number_field(s, "max_outer", "solver.max_outer"));
        if (s.contains("max_newton")) spec.solver.barrier.max_newton = static_cast<int>(detail::number_field(s, "max_newton", "solver.max_newton"));
    }
    if (const char* env = std::getenv("CRB_SEED"); env != nullptr && *env != '\0') {
        spec.seed = detail::parse_seed(env, "CRB_SEED");
    }
    spec.validate();
    return spec;
}

} // namespace crb
