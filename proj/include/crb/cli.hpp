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

// Command-line front end: `solve`, `sweep` and `oracle` subcommands.
// Exit codes: 0 success, 1 validation error, 2 solver failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crb/beamform_individual.hpp"
#include "crb/beamform_total.hpp"
#include "crb/channel_io.hpp"
#include "crb/harness.hpp"
#include "crb/oracle.hpp"

namespace crb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;

namespace detail {

inline std::vector<double> parse_budgets(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ValidationError("--budgets: '" + item + "' is not a number");
        }
    }
    if (out.empty()) {
        throw ValidationError("--budgets: empty list");
    }
    return out;
}

struct InstanceArgs {
    std::string channel_path;
    std::optional<double> pt;
    std::optional<std::string> budgets;
    std::optional<double> n0;
};

inline void add_instance_options(CLI::App* app, InstanceArgs& a) {
    app->add_option("--channel", a.channel_path, "channel record (JSON)")->required();
    app->add_option("--pt", a.pt, "total relay power P_T");
    app->add_option("--budgets", a.budgets, "per-relay caps, comma separated");
    app->add_option("--n0", a.n0, "override the receiver noise power N0");
}

struct Instance {
    ChannelRealization ch;
    double p_total = 0.0;
    PowerBudget budget;
};

inline Instance load_instance(const InstanceArgs& a) {
    Instance in;
    in.ch = io::load_channel(a.channel_path);
    if (a.n0) {
        in.ch.noise_rx = *a.n0;
    }
    in.ch.validate();
    const auto m = static_cast<int>(in.ch.relays());
    if (a.budgets) {
        in.budget.p = parse_budgets(*a.budgets);
        in.budget.validate(m);
        in.p_total = a.pt ? *a.pt : in.budget.total();
    } else if (a.pt) {
        in.p_total = *a.pt;
        in.budget = PowerBudget::equal_split(*a.pt, m);
    } else {
        throw ValidationError("one of --pt or --budgets is required");
    }
    if (!(in.p_total > 0.0)) {
        throw ValidationError("--pt must be positive");
    }
    in.budget.validate(m);
    return in;
}

inline nlohmann::json weights_json(const CVector& w) { return io::to_json(w); }

} // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Secrecy-rate relay beamforming"};
    app.require_subcommand(1);

    detail::InstanceArgs solve_args;
    std::string method = "total";
    bool nats = false;
    std::optional<double> ps;
    double tol = 1e-6;
    auto* solve = app.add_subcommand("solve", "optimize the weights for one channel record");
    detail::add_instance_options(solve, solve_args);
    solve->add_option("--method", method, "total | null-space | low-snr | individual-sdr | individual-socp | suboptimal");
    solve->add_option("--ps", ps, "source power P_s (adds first-hop and overall rates)");
    solve->add_option("--tol", tol, "relative bisection tolerance");
    solve->add_flag("--nats", nats, "report rates in nats");

    std::string config_path;
    std::string out_path;
    std::optional<int> threads;
    auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep from an experiment config");
    sweep->add_option("--config", config_path, "experiment config (JSON)")->required();
    sweep->add_option("--out", out_path, "CSV output path (stdout when omitted)");
    sweep->add_option("--threads", threads, "worker threads");

    detail::InstanceArgs oracle_args;
    int resolution = 32;
    bool no_polish = false;
    auto* oracle = app.add_subcommand("oracle", "grid-search reference rate (M <= 3)");
    detail::add_instance_options(oracle, oracle_args);
    oracle->add_option("--resolution", resolution, "grid points per magnitude/phase axis");
    oracle->add_flag("--no-polish", no_polish, "report the raw grid optimum");
    oracle->add_flag("--nats", nats, "report rates in nats");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    const auto unit = [&](double bits) { return nats ? bits_to_nats(bits) : bits; };
    try {
        if (*solve) {
            const detail::Instance in = detail::load_instance(solve_args);
            nlohmann::json j;
            j["method"] = method;
            j["unit"] = nats ? "nats" : "bits";
            Beamformer bf;
            double rate = 0.0;
            SolverConfig cfg;
            cfg.bisection.tol_rel = tol;
            if (method == "total") {
                const TotalSolution s = solve_total(in.ch, in.p_total);
                bf = s.beamformer;
                rate = s.rate;
                j["lambda_max"] = s.lambda_max;
            } else if (method == "null-space") {
                const NullSpaceSolution s = solve_null_space(in.ch, in.p_total);
                bf = s.beamformer;
                rate = s.rate;
            } else if (method == "low-snr") {
                const LowSnrSolution s = solve_low_snr(in.ch, in.p_total);
                bf = s.beamformer;
                rate = s.rate;
                j["approx_rate"] = unit(s.approx_rate);
            } else if (method == "individual-sdr" || method == "individual-socp") {
                const Path path = method == "individual-sdr" ? Path::sdr : Path::socp;
                const IndividualSolution s = solve_individual(in.ch, in.budget, cfg, path);
                bf = s.beamformer;
                rate = s.rate;
                j["t_max"] = s.t_max;
                j["achieved_rate"] = unit(s.achieved_rate);
                j["bisection_steps"] = s.diagnostics.trace.size();
                j["newton_steps"] = s.diagnostics.newton_steps;
                if (path == Path::sdr) {
                    j["rank_ratio"] = s.diagnostics.rank_ratio;
                }
                j["budgets"] = in.budget.p;
            } else if (method == "suboptimal") {
                const SuboptimalSolution s = solve_suboptimal(in.ch, in.budget);
                bf = s.beamformer;
                rate = s.rate;
                j["budgets"] = in.budget.p;
            } else {
                throw ValidationError("--method: unknown method '" + method + "'");
            }
            j["rate"] = unit(rate);
            j["w"] = detail::weights_json(bf.w);
            j["power"] = bf.power_used;
            const SnrPair snr = snr_pair(in.ch, bf.w);
            j["snr_dest"] = snr.dest;
            j["snr_eve"] = snr.eve;
            if (ps) {
                const SecrecyResult r = overall_rate(in.ch, bf.w, *ps);
                j["rate_hop1"] = unit(r.rate_hop1);
                j["rate_overall"] = unit(std::min(r.rate_hop1, rate));
            }
            out << j.dump(2) << "\n";
            return kExitOk;
        }
        if (*sweep) {
            ExperimentSpec spec = experiment_from_json(io::parse_json(io::read_text_file(config_path), config_path));
            if (threads) {
                spec.threads = *threads;
                spec.validate();
            }
            const SweepResult r = run_experiment(spec);
            const std::string csv = to_csv(r);
            if (out_path.empty()) {
                out << csv;
            } else {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) {
                    throw ValidationError("cannot write '" + out_path + "'");
                }
                f << csv;
            }
            return kExitOk;
        }
        if (*oracle) {
            const detail::Instance in = detail::load_instance(oracle_args);
            const OracleResult r = oracle_grid(in.ch, in.budget, resolution, !no_polish);
            nlohmann::json j;
            j["method"] = "oracle";
            j["unit"] = nats ? "nats" : "bits";
            j["resolution"] = resolution;
            j["rate"] = unit(r.rate);
            j["grid_rate"] = unit(r.grid_rate);
            j["w"] = detail::weights_json(r.w);
            j["budgets"] = in.budget.p;
            out << j.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitValidation;
}

} // namespace crb::cli
