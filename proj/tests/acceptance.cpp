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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "crb/crb.hpp"

namespace {

using namespace crb;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CVector draw(std::mt19937_64& gen, Eigen::Index m, double sigma) {
    std::normal_distribution<double> nd(0.0, sigma / std::sqrt(2.0));
    CVector v(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        v(i) = Complex(nd(gen), nd(gen));
    }
    return v;
}

ChannelRealization instance(std::mt19937_64& gen, Eigen::Index m, double sigma_h, double sigma_z) {
    ChannelRealization ch;
    ch.g = CVector::Ones(m);
    ch.h = draw(gen, m, sigma_h);
    ch.z = draw(gen, m, sigma_z);
    ch.noise_relays.assign(static_cast<std::size_t>(m), 1.0);
    ch.noise_rx = 1.0;
    return ch;
}

PowerBudget caps(std::mt19937_64& gen, Eigen::Index m) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    PowerBudget b;
    for (Eigen::Index i = 0; i < m; ++i) {
        b.p.push_back(u(gen));
    }
    return b;
}

// Rank-one monitor shared by every SDR solve below.
struct RankLog {
    double tol = SolverConfig{}.rank_tol;
    int solves = 0;
    double worst = 0.0;
    std::vector<std::string> violations;

    void record(double ratio, const std::string& where) {
        ++solves;
        worst = std::max(worst, ratio);
        if (!(ratio <= tol)) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s: lambda2/lambda1 = %.3e", where.c_str(), ratio);
            violations.emplace_back(buf);
        }
    }
};

RankLog g_rank;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) {
        ++g_failures;
    }
    std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Slack for comparisons against a bisection-reported rate: one bracket width.
double bisection_slack(const SolverConfig& cfg) { return std::log2(1.0 + cfg.bisection.tol_rel) + 1e-9; }

void record_sweep_ranks(const ExperimentSpec& spec, const SweepResult& r, const std::string& label) {
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
        if (spec.methods[mi] != MethodId::individual_sdr) {
            continue;
        }
        for (const TrialRecord& t : r.trials) {
            const MethodOutcome& o = t.outcomes[mi];
            if (o.status == TrialStatus::ok) {
                g_rank.record(o.rank_ratio, label + " value=" + detail::fmt_num(spec.grid[t.grid_index]) +
                                                " trial=" + std::to_string(t.trial) +
                                                " seed=" + std::to_string(spec.seed));
            }
        }
    }
}

ExperimentSpec figure_spec(double sigma_h, double sigma_z) {
    ExperimentSpec s;
    s.fading = {1.0, sigma_h, sigma_z, 5, 0};
    s.n0 = 1.0;
    s.trials = 1000;
    s.seed = 20240601;
    s.methods = {MethodId::total, MethodId::individual_sdr, MethodId::individual_socp, MethodId::suboptimal};
    return s;
}

Outcome oracle_equivalence() {
    std::mt19937_64 gen(101);
    const SolverConfig cfg;
    const double slack = bisection_slack(cfg);
    const auto t0 = Clock::now();
    double worst_gap = 0.0;
    double worst_below = 0.0;
    int bad = 0;
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index m = 2 + i % 2;
        const double sigma_h = 1.0 + i % 3;
        const auto ch = instance(gen, m, sigma_h, 1.0 + (i / 3) % 2);
        const PowerBudget b = caps(gen, m);
        const OracleResult o = oracle_grid(ch, b, 64);
        for (Path path : {Path::sdr, Path::socp}) {
            const IndividualSolution s = solve_individual(ch, b, cfg, path);
            if (path == Path::sdr && s.t_max > 1.0) {
                g_rank.record(s.diagnostics.rank_ratio, "c1 instance " + std::to_string(i));
            }
            const double gap = std::abs(s.rate - o.rate);
            worst_gap = std::max(worst_gap, gap);
            worst_below = std::max(worst_below, o.rate - s.rate);
            if (gap > 1e-3 || s.rate < o.rate - slack) {
                ++bad;
                std::printf("  c1 instance %d path %s: solver %.9f oracle %.9f\n", i,
                            std::string(path_name(path)).c_str(), s.rate, o.rate);
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {bad == 0 && elapsed < 300.0,
            fmt("max |solver - oracle| = %.2e bits, max oracle excess = %.2e bits, runtime %.1f s", worst_gap,
                worst_below, elapsed)};
}

Outcome closed_form_consistency() {
    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> logp(-1.0, 2.0);
    const auto t0 = Clock::now();
    double worst_rate = 0.0;
    double worst_res = 0.0;
    for (int i = 0; i < 500; ++i) {
        const Eigen::Index m = 1 + i % 8;
        const auto ch = instance(gen, m, 1.0 + i % 3, 1.0 + (i / 3) % 2);
        const double pt = std::pow(10.0, logp(gen));
        const TotalSolution s = solve_total(ch, pt);
        worst_rate = std::max(worst_rate, std::abs(s.rate - secrecy_rate(ch, s.beamformer.w)));
        worst_res = std::max(worst_res, s.residual);
    }
    const double elapsed = seconds_since(t0);
    return {worst_rate <= 1e-9 && worst_res <= 1e-8 && elapsed < 30.0,
            fmt("max rate mismatch %.2e bits, max residual %.2e, runtime %.2f s", worst_rate, worst_res, elapsed)};
}

Outcome path_agreement() {
    std::mt19937_64 gen(303);
    const SolverConfig cfg;
    double worst = 0.0;
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index m = 2 + i % 7;
        const auto ch = instance(gen, m, 1.0 + i % 3, 1.0 + (i / 7) % 2);
        const PowerBudget b = caps(gen, m);
        const IndividualSolution a = solve_individual(ch, b, cfg, Path::sdr);
        const IndividualSolution c = solve_individual(ch, b, cfg, Path::socp);
        if (a.t_max > 1.0) {
            g_rank.record(a.diagnostics.rank_ratio, "c3 instance " + std::to_string(i));
        }
        const double rel = std::abs(a.t_max - c.t_max) / std::max(a.t_max, c.t_max);
        worst = std::max(worst, rel);
        if (rel > 2.0 * cfg.bisection.tol_rel) {
            ++bad;
            std::printf("  c3 instance %d: sdr %.9f socp %.9f\n", i, a.t_max, c.t_max);
        }
    }
    return {bad == 0, fmt("max relative t_max difference %.2e (limit %.0e)", worst, 2.0 * SolverConfig{}.bisection.tol_rel)};
}

Outcome ordering_invariant() {
    const ExperimentSpec spec = figure_spec(3.0, 1.0);
    const SweepResult r = run_experiment(spec);
    record_sweep_ranks(spec, r, "c4");
    const double slack = bisection_slack(spec.solver);
    int violations = 0;
    for (const TrialRecord& t : r.trials) {
        const double total = t.outcomes[0].rate;
        const double sub = t.outcomes[3].rate;
        for (std::size_t k : {1u, 2u}) {
            const double ind = t.outcomes[k].rate;
            if (total < ind - slack || ind < sub - slack) {
                ++violations;
                std::printf("  c4 P_T=%g trial %d: total %.9f individual %.9f suboptimal %.9f\n",
                            spec.grid[t.grid_index], t.trial, total, ind, sub);
            }
        }
    }
    bool close = true;
    std::string summary;
    std::string over_limit;
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        const double total = r.row(gi, 0, 4).mean_rate;
        const double sdr = r.row(gi, 1, 4).mean_rate;
        const double socp = r.row(gi, 2, 4).mean_rate;
        const double sub = r.row(gi, 3, 4).mean_rate;
        if (sdr < 0.95 * total || socp < 0.95 * total) {
            close = false;
            over_limit += (over_limit.empty() ? "" : ",") + detail::fmt_num(spec.grid[gi]);
        }
        for (std::size_t mi = 0; mi < 4; ++mi) {
            close = close && r.row(gi, mi, 4).trials_failed == 0;
        }
        std::printf("  c4 P_T=%-5g total %.4f individual %.4f (gap %.2f%%) suboptimal %.4f\n", spec.grid[gi], total,
                    sdr, 100.0 * (total - sdr) / total, sub);
        if (gi + 1 == spec.grid.size()) {
            summary = fmt("mean total-vs-individual gap at P_T=%g: %.4f bits", spec.grid[gi], total - sdr);
        }
    }
    double mean_gap = 0.0;
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        mean_gap += r.row(gi, 0, 4).mean_rate - r.row(gi, 1, 4).mean_rate;
    }
    mean_gap /= static_cast<double>(spec.grid.size());
    return {violations == 0 && close,
            std::to_string(violations) + " ordering violations over " + std::to_string(r.trials.size()) +
                " trials; " + summary + fmt("; grid-average gap %.4f bits", mean_gap) +
                (over_limit.empty() ? "" : "; gap above 5% at P_T = " + over_limit)};
}

Outcome favorable_eavesdropper() {
    const ExperimentSpec spec = figure_spec(1.0, 2.0);
    const SweepResult r = run_experiment(spec);
    record_sweep_ranks(spec, r, "c5");
    double smallest = INFINITY;
    bool ok = true;
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        std::printf("  c5 P_T=%-5g", spec.grid[gi]);
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
            const SweepRow& row = r.row(gi, mi, spec.methods.size());
            std::printf(" %s %.4f", std::string(method_id_name(row.method)).c_str(), row.mean_rate);
            smallest = std::min(smallest, row.mean_rate);
            ok = ok && row.mean_rate > 0.0 && row.trials_failed == 0;
        }
        std::printf("\n");
    }
    return {ok, fmt("smallest mean rate over grid and methods %.4f bits", smallest)};
}

Outcome relay_trend() {
    ExperimentSpec spec = figure_spec(1.0, 2.0);
    spec.variable = SweepVariable::relays;
    spec.total_power = 10.0;
    spec.grid = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    const SweepResult r = run_relay_sweep(spec);
    record_sweep_ranks(spec, r, "c6");
    const std::size_t nm = spec.methods.size();
    bool ok = true;
    for (std::size_t gi = 0; gi < spec.grid.size(); ++gi) {
        std::printf("  c6 M=%-2g", spec.grid[gi]);
        for (std::size_t mi = 0; mi < nm; ++mi) {
            const SweepRow& row = r.row(gi, mi, nm);
            std::printf(" %s %.4f±%.4f", std::string(method_id_name(row.method)).c_str(), row.mean_rate,
                        row.std_error);
            ok = ok && row.trials_failed == 0;
        }
        std::printf("\n");
    }
    for (std::size_t mi = 0; mi < 3; ++mi) {
        for (std::size_t gi = 1; gi < spec.grid.size(); ++gi) {
            const SweepRow& a = r.row(gi - 1, mi, nm);
            const SweepRow& b = r.row(gi, mi, nm);
            if (b.mean_rate < a.mean_rate - 2.0 * std::hypot(a.std_error, b.std_error)) {
                ok = false;
                std::printf("  c6 %s drops from M=%g to M=%g\n", std::string(method_id_name(a.method)).c_str(),
                            a.value, b.value);
            }
        }
    }
    int sub_drops = 0;
    for (std::size_t gi = 1; gi < spec.grid.size(); ++gi) {
        if (r.row(gi, 3, nm).mean_rate < r.row(gi - 1, 3, nm).mean_rate) {
            ++sub_drops;
        }
    }
    const double sub_first = r.row(0, 3, nm).mean_rate;
    const double sub_last = r.row(spec.grid.size() - 1, 3, nm).mean_rate;
    return {ok, "total and individual nondecreasing within 2 SE; suboptimal (reported only): " +
                    std::to_string(sub_drops) + " decreasing steps" + fmt(", %.4f bits at M=2 vs %.4f at M=10", sub_first, sub_last)};
}

Outcome high_snr() {
    std::mt19937_64 gen(707);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index m = 2 + i % 7;
        const auto ch = instance(gen, m, 1.0 + i % 3, 1.0 + (i / 7) % 2);
        const double gap = solve_total(ch, 1e6).rate - solve_null_space(ch, 1e6).rate;
        worst = std::max(worst, gap);
    }
    return {worst < 0.01, fmt("max total-vs-null-space gap at P_T=1e6: %.2e bits", worst)};
}

Outcome rank_one() {
    for (const std::string& v : g_rank.violations) {
        std::printf("  c8 %s\n", v.c_str());
    }
    return {g_rank.violations.empty() && g_rank.solves > 0,
            std::to_string(g_rank.solves) + " SDR extractions, worst ratio " + fmt("%.2e", g_rank.worst) + ", " +
                std::to_string(g_rank.violations.size()) + " violations"};
}

Outcome determinism() {
    ExperimentSpec spec = figure_spec(3.0, 1.0);
    spec.trials = 40;
    spec.methods = {MethodId::total, MethodId::individual_sdr, MethodId::individual_socp,
                    MethodId::suboptimal, MethodId::null_space, MethodId::low_snr};
    spec.source_power = 10.0;
    const std::string a = to_csv(run_experiment(spec));
    const std::string b = to_csv(run_experiment(spec));
    spec.threads = 4;
    const std::string c = to_csv(run_experiment(spec));
    ExperimentSpec relay = spec;
    relay.variable = SweepVariable::relays;
    relay.grid = {1, 2, 3, 4};
    relay.threads = 1;
    relay.budget_weights.reset();
    const std::string d = to_csv(run_relay_sweep(relay));
    relay.threads = 3;
    const std::string e = to_csv(run_relay_sweep(relay));
    return {a == b && a == c && d == e, std::to_string(a.size() + d.size()) +
                                            " CSV bytes compared across reruns and 1/3/4 worker threads"};
}

} // namespace

int main() {
    report(1, "individual-power solvers match the grid oracle", oracle_equivalence);
    report(2, "closed-form total-power rate is self-consistent", closed_form_consistency);
    report(3, "SDR and SOCP paths agree on t_max", path_agreement);
    report(4, "total >= individual >= suboptimal per trial, individual within 5% of total", ordering_invariant);
    report(5, "positive mean secrecy rate with a stronger eavesdropper", favorable_eavesdropper);
    report(6, "mean rate nondecreasing in the relay count", relay_trend);
    report(7, "null-space beamforming optimal at high SNR", high_snr);
    report(8, "extracted SDR solutions are rank one", rank_one);
    report(9, "sweeps are byte-for-byte reproducible", determinism);
    std::printf("%s: %d of 9 criteria failed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", g_failures);
    return g_failures == 0 ? 0 : 1;
}
