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

#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crb/cli.hpp"

namespace crb {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "crb");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    CliRun r;
    r.code = cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("crb_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

const char* kOrthogonal = R"({"h": [[1, 0], [0, 0]], "z": [[0, 0], [1, 0]], "n0": 1})";
const char* kTwoRelay = R"({"h": [[0.9, -0.4], [1.3, 0.2]], "z": [[0.3, 0.5], [-0.6, 0.1]], "n0": 1})";

TEST_F(CliTest, SolveTotal) {
    const auto r = run({"solve", "--channel", write("ch.json", kOrthogonal), "--pt", "4", "--method", "total"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_NEAR(j.at("rate").get<double>(), 2.321928094887362, 1e-9);
    EXPECT_NEAR(j.at("power").get<double>(), 4.0, 1e-12);
    EXPECT_EQ(j.at("w").size(), 2u);
    EXPECT_EQ(j.at("unit"), "bits");
}

TEST_F(CliTest, SolveInNats) {
    const auto r =
        run({"solve", "--channel", write("ch.json", kOrthogonal), "--pt", "4", "--method", "total", "--nats"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(r.json().at("rate").get<double>(), std::log(5.0), 1e-9);
    EXPECT_EQ(r.json().at("unit"), "nats");
}

TEST_F(CliTest, EveryMethodRuns) {
    const std::string ch = write("ch.json", kTwoRelay);
    for (const char* m : {"total", "null-space", "low-snr", "individual-sdr", "individual-socp", "suboptimal"}) {
        const auto r = run({"solve", "--channel", ch, "--pt", "2", "--method", m, "--ps", "3"});
        ASSERT_EQ(r.code, 0) << m << ": " << r.err;
        const auto j = r.json();
        EXPECT_GE(j.at("rate").get<double>(), 0.0);
        EXPECT_LE(j.at("rate_overall").get<double>(), j.at("rate").get<double>() + 1e-12);
    }
}

TEST_F(CliTest, OracleAgreesWithSolver) {
    const std::string ch = write("ch.json", kTwoRelay);
    const auto s = run({"solve", "--channel", ch, "--budgets", "1,0.5", "--method", "individual-sdr"});
    const auto o = run({"oracle", "--channel", ch, "--budgets", "1,0.5", "--resolution", "64"});
    ASSERT_EQ(s.code, 0) << s.err;
    ASSERT_EQ(o.code, 0) << o.err;
    const double rs = s.json().at("rate").get<double>();
    const double ro = o.json().at("rate").get<double>();
    EXPECT_NEAR(rs, ro, 1e-3);
    EXPECT_GE(rs, ro - 1e-6);
    EXPECT_LE(s.json().at("rank_ratio").get<double>(), 1e-6);
}

TEST_F(CliTest, SweepWritesCsv) {
    const std::string cfg = write("cfg.json", R"({
        "fading": {"sigma_h": 3, "sigma_z": 1, "M": 2},
        "sweep": {"variable": "P_T", "grid": [1, 10]},
        "methods": ["total", "suboptimal"],
        "trials": 5, "seed": 3})");
    const std::string csv = (dir_ / "out.csv").string();
    const auto r = run({"sweep", "--config", cfg, "--out", csv, "--threads", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream f(csv);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto stdout_run = run({"sweep", "--config", cfg});
    ASSERT_EQ(stdout_run.code, 0);
    EXPECT_EQ(ss.str(), stdout_run.out);
    EXPECT_EQ(ss.str().rfind("sweep_var,value,method", 0), 0u);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
    const std::string ch = write("ch.json", kOrthogonal);
    EXPECT_EQ(run({"sweep", "--config", write("cfg.json", R"({"trials": 0})")}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", write("bad.json", "{not json")}).code, 1);
    EXPECT_EQ(run({"sweep", "--config", (dir_ / "missing.json").string()}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", ch, "--pt", "-1"}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", ch}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", ch, "--pt", "1", "--method", "magic"}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", ch, "--budgets", "1,x"}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", ch, "--budgets", "1,1,1"}).code, 1);
    EXPECT_EQ(run({"solve", "--channel", write("h.json", R"({"h": [1, 2], "z": [1]})"), "--pt", "1"}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    const auto r = run({"solve", "--channel", ch, "--pt", "1", "--method", "magic"});
    EXPECT_NE(r.err.find("--method"), std::string::npos);
}

TEST_F(CliTest, NullSpaceNeedsTwoRelays) {
    const auto r = run({"solve", "--channel", write("ch.json", R"({"h": [1], "z": [1]})"), "--pt", "1", "--method",
                        "null-space"});
    EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, SolverFailureExitsTwo) {
    const std::string cfg = write("cfg.json", R"({
        "fading": {"sigma_h": 3, "sigma_z": 1, "M": 3},
        "sweep": {"variable": "P_T", "grid": [4]},
        "methods": ["individual-sdr"],
        "trials": 2, "seed": 1,
        "solver": {"gap_tol": 1e-30, "max_outer": 2}})");
    const auto r = run({"sweep", "--config", cfg});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, Help) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("sweep"), std::string::npos);
}

} // namespace
} // namespace crb
