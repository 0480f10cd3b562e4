// Copyright 2026 The bqt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bqt/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bqt/correction_table.hpp"
#include "gtest/gtest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "bqt");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int code = bqt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expected_code = 0) {
    args.push_back("--format");
    args.push_back("json");
    auto r = run(args);
    EXPECT_EQ(r.code, expected_code) << r.err;
    return json::parse(r.out);
}

std::filesystem::path temp_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Cli, enumerate_default_inputs) {
    auto j = run_json({"enumerate", "--alpha", "0.6,0,0.8,0", "--beta", "0.8,0.6"});
    ASSERT_EQ(j["schema"], "bqt.enumerate");
    ASSERT_EQ(j["schema_version"], 1);
    ASSERT_EQ(j["status"], "PASS");
    ASSERT_EQ(j["leaves"].size(), 64u);
    for (const auto &leaf : j["leaves"]) {
        ASSERT_NEAR(leaf["probability"].get<double>(), 1.0 / 64, 1e-12);
    }
    ASSERT_NEAR(j["total_probability"].get<double>(), 1, 1e-12);
    ASSERT_EQ(j["config"]["alice"]["c0"][0], 0.6);
}

TEST(Cli, enumerate_product_inputs) {
    auto j = run_json({"enumerate", "--alpha", "1,0", "--beta", "1,0"});
    ASSERT_EQ(j["status"], "PASS");
}

TEST(Cli, invalid_inputs_are_config_errors) {
    ASSERT_EQ(run({"enumerate", "--alpha", "1,1"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--alpha", "2,0,0,0"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--alpha", "0.6,x"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--alpha", "0.6,0.8,0"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--angles", "0.1"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--angles", "0.1,0.2", "--alpha", "1,0"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"run", "--seed", "-4"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"run", "--trials", "0"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"run", "--cooperation", "maybe"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"enumerate", "--format", "yaml"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"teleport"}).code, bqt::cli::kExitUsage);
    auto r = run({"enumerate", "--alpha", "1,1"});
    ASSERT_NE(r.err.find("--alpha"), std::string::npos);
}

TEST(Cli, nearly_normalized_input_is_accepted) {
    ASSERT_EQ(run({"enumerate", "--alpha", "0.6000000001,0.8"}).code, 0);
}

TEST(Cli, angles_set_both_inputs) {
    auto j = run_json({"enumerate", "--angles", "0.5,1.0,1.2,-0.3"});
    ASSERT_NEAR(j["config"]["alice"]["c0"][0].get<double>(), std::cos(0.5), 1e-15);
    ASSERT_NEAR(j["config"]["bob"]["c1"][1].get<double>(), std::sin(1.2) * std::sin(-0.3), 1e-15);
}

TEST(Cli, swap_canonical_table) {
    auto j = run_json({"swap", "0", "0"});
    ASSERT_EQ(j["schema"], "bqt.swap");
    ASSERT_EQ(j["status"], "PASS");
    std::vector<std::pair<int, int>> pairs;
    for (const auto &o : j["outcomes"]) {
        pairs.emplace_back(o["outcome"], o["matched"]);
        ASSERT_NEAR(o["probability"].get<double>(), 0.25, 1e-12);
    }
    ASSERT_EQ(pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {6, 2}, {7, 3}}));
}

TEST(Cli, swap_every_pair) {
    for (int i = 0; i < 8; i++) {
        for (int j = 0; j < 8; j++) {
            auto report = run_json({"swap", std::to_string(i), std::to_string(j)});
            ASSERT_EQ(report["outcomes"].size(), 4u);
            ASSERT_NEAR(report["total_probability"].get<double>(), 1, 1e-12);
        }
    }
}

TEST(Cli, swap_usage_errors) {
    ASSERT_EQ(run({"swap", "0", "9"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"swap", "0"}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"swap", "-1", "0"}).code, bqt::cli::kExitUsage);
}

TEST(Cli, run_report) {
    auto j = run_json({"run", "--trials", "4096", "--seed", "7"});
    ASSERT_EQ(j["schema"], "bqt.run");
    ASSERT_EQ(j["status"], "PASS");
    ASSERT_EQ(j["trials"].size(), 4096u);
    ASSERT_EQ(j["histogram"].size(), 64u);
    ASSERT_TRUE(j["uniformity"]["within_4_sigma"].get<bool>());
    for (const auto &t : j["trials"]) {
        ASSERT_GE(t["fidelity_alice_to_bob"].get<double>(), 1 - 1e-10);
        ASSERT_GE(t["fidelity_bob_to_alice"].get<double>(), 1 - 1e-10);
    }
    ASSERT_TRUE(j["deprived"].is_null());
    ASSERT_EQ(j["config"]["seed"], 7);
}

TEST(Cli, run_is_deterministic_and_thread_independent) {
    auto a = run_json({"run", "--trials", "50", "--seed", "0x1F", "--transcripts", "--threads", "1"});
    auto b = run_json({"run", "--trials", "50", "--seed", "31", "--transcripts", "--threads", "7"});
    a.erase("generated_at");
    b.erase("generated_at");
    ASSERT_EQ(a.dump(), b.dump());
    ASSERT_EQ(a["trials"][0]["transcript"]["schema"], "bqt.transcript");
}

TEST(Cli, run_with_withholding) {
    auto j = run_json({"run", "--trials", "200", "--cooperation", "withhold-a1"});
    ASSERT_EQ(j["status"], "PASS");
    ASSERT_EQ(j["deprived"]["receiver"], "bob");
    ASSERT_NEAR(j["deprived"]["expected_fidelity"].get<double>(), 0.5392, 1e-12);
    auto k = run_json({"run", "--trials", "20", "--cooperation", "withhold-b1", "--beta", "0.6,0.8"});
    ASSERT_EQ(k["deprived"]["receiver"], "alice");
    ASSERT_NEAR(k["deprived"]["expected_fidelity"].get<double>(), 0.5392, 1e-12);
}

TEST(Cli, verify_passes) {
    auto r = run({"verify"});
    ASSERT_EQ(r.code, 0) << r.out;
    for (int id = 1; id <= 9; id++) {
        ASSERT_NE(r.out.find("[PASS] C" + std::to_string(id) + " "), std::string::npos) << id;
    }
    auto j = run_json({"verify"});
    ASSERT_EQ(j["schema"], "bqt.verify");
    ASSERT_EQ(j["criteria"].size(), 9u);
}

TEST(Cli, verify_with_corrupted_table_fails) {
    auto dir = temp_dir("bqt_cli_corrupt");
    auto table = bqt::protocol::default_correction_table();
    auto key = bqt::protocol::BranchKey::from_index(40);
    auto rule = table.rule(key);
    rule.bob = {bqt::protocol::Pauli::X, bqt::protocol::Pauli::I};
    table.set(key, rule);
    table.save(dir / "table.json");

    auto j = run_json({"verify", "--table", (dir / "table.json").string()}, bqt::cli::kExitFail);
    ASSERT_EQ(j["status"], "FAIL");
    ASSERT_FALSE(j["criteria"][4]["passed"].get<bool>());
    ASSERT_TRUE(j["criteria"][0]["passed"].get<bool>());
    ASSERT_EQ(run({"enumerate", "--table", (dir / "table.json").string()}).code, bqt::cli::kExitFail);

    std::ofstream(dir / "broken.json") << "[1, 2";
    ASSERT_EQ(run({"verify", "--table", (dir / "broken.json").string()}).code, bqt::cli::kExitUsage);
    ASSERT_EQ(run({"verify", "--table", (dir / "missing.json").string()}).code, bqt::cli::kExitUsage);
}

TEST(Cli, table_command_emits_generated_table) {
    auto r = run({"table"});
    ASSERT_EQ(r.code, 0);
    ASSERT_EQ(r.out, bqt::protocol::generate_correction_table().to_json());
}

TEST(Cli, output_path_and_directory) {
    auto dir = temp_dir("bqt_cli_out");
    auto r = run({"swap", "1", "2", "--format", "json", "--out", (dir / "sub" / "swap.json").string()});
    ASSERT_EQ(r.code, 0);
    ASSERT_TRUE(r.out.empty());
    ASSERT_TRUE(std::filesystem::exists(dir / "sub" / "swap.json"));

    setenv("BQT_OUTPUT_DIR", dir.c_str(), 1);
    auto e = run({"enumerate", "--format", "json"});
    unsetenv("BQT_OUTPUT_DIR");
    ASSERT_EQ(e.code, 0);
    std::ifstream in(dir / "enumerate.json");
    ASSERT_EQ(json::parse(in)["schema"], "bqt.enumerate");
}

TEST(Cli, text_format_and_help) {
    auto r = run({"swap", "0", "0"});
    ASSERT_NE(r.out.find("status: PASS"), std::string::npos);
    ASSERT_NE(r.out.find("Psi6"), std::string::npos);
    auto h = run({"--help"});
    ASSERT_EQ(h.code, 0);
    ASSERT_NE(h.out.find("enumerate"), std::string::npos);
}
