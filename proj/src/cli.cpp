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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bqt/correction_table.hpp"
#include "bqt/ghz.hpp"
#include "bqt/json_io.hpp"
#include "bqt/parties.hpp"
#include "bqt/protocol.hpp"
#include "bqt/rng.hpp"
#include "bqt/verify.hpp"
#include "json.hpp"

namespace bqt::cli {

namespace {

using nlohmann::ordered_json;
using protocol::EprInput;

constexpr int kSchemaVersion = 1;
constexpr double kInputTol = 1e-9;
constexpr const char *kOutputDirEnv = "BQT_OUTPUT_DIR";

/// Invalid flag values; reported as usage errors.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string &text, const std::string &flag) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string field = text.substr(start, end - start);
        double v = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
            throw ConfigError(flag + ": '" + field + "' is not a number");
        }
        values.push_back(v);
        start = end + 1;
    }
    return values;
}

EprInput parse_amplitudes(const std::string &text, const std::string &flag) {
    auto v = parse_numbers(text, flag);
    qsim::Amplitude c0;
    qsim::Amplitude c1;
    if (v.size() == 4) {
        c0 = {v[0], v[1]};
        c1 = {v[2], v[3]};
    } else if (v.size() == 2) {
        c0 = v[0];
        c1 = v[1];
    } else {
        throw ConfigError(flag + " expects re,im,re,im or two real amplitudes");
    }
    double norm = std::norm(c0) + std::norm(c1);
    if (std::abs(norm - 1) > kInputTol) {
        std::ostringstream msg;
        msg << flag << ": |c0|^2 + |c1|^2 = " << norm << " is not 1 within " << kInputTol;
        throw ConfigError(msg.str());
    }
    return EprInput::make(c0, c1, kInputTol);
}

std::uint64_t parse_seed(const std::string &text) {
    std::string digits = text;
    int base = 10;
    if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
        digits = digits.substr(2);
        base = 16;
    }
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed, base);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ConfigError("--seed: '" + text + "' is not an unsigned 64-bit integer");
    }
    return seed;
}

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

ordered_json amplitude_json(qsim::Amplitude a) {
    return ordered_json::array({a.real(), a.imag()});
}

ordered_json input_json(const EprInput &input) {
    return ordered_json{{"c0", amplitude_json(input.c0())}, {"c1", amplitude_json(input.c1())}};
}

ordered_json key_json(const protocol::BranchKey &key) {
    using protocol::sign_code;
    return ordered_json{{"a1", key.step3.a1},
                        {"A2", sign_code(key.step3.A2)},
                        {"b3", key.step3.b3},
                        {"B2", sign_code(key.step3.B2)},
                        {"A1", sign_code(key.step4.A1)},
                        {"B1", sign_code(key.step4.B1)}};
}

ordered_json report_header(const std::string &name) {
    return ordered_json{{"schema", "bqt." + name}, {"schema_version", kSchemaVersion}, {"generated_at", timestamp()}};
}

std::string status(bool passed) {
    return passed ? "PASS" : "FAIL";
}

struct Config {
    std::optional<std::string> alpha;
    std::optional<std::string> beta;
    std::optional<std::string> angles;
    std::string seed_text;
    int trials = 4096;
    int threads = 0;
    std::string cooperation = "full";
    std::string out_path;
    std::string format = "text";
    bool transcripts = false;
    std::string table_path;
    int swap_i = 0;
    int swap_j = 0;

    EprInput alice = EprInput::make(0.6, 0.8);
    EprInput bob = EprInput::make(0.8, 0.6);
    std::uint64_t seed = kDefaultSeed;
    protocol::CorrectionTable table = protocol::default_correction_table();

    void resolve() {
        if (alpha) {
            alice = parse_amplitudes(*alpha, "--alpha");
        }
        if (beta) {
            bob = parse_amplitudes(*beta, "--beta");
        }
        if (angles) {
            auto v = parse_numbers(*angles, "--angles");
            if (v.size() != 2 && v.size() != 4) {
                throw ConfigError("--angles expects theta,phi or thetaA,phiA,thetaB,phiB");
            }
            alice = EprInput::from_angles(v[0], v[1]);
            if (v.size() == 4) {
                bob = EprInput::from_angles(v[2], v[3]);
            }
        }
        if (!seed_text.empty()) {
            seed = parse_seed(seed_text);
        }
        if (!table_path.empty()) {
            try {
                table = protocol::CorrectionTable::load(table_path);
            } catch (const protocol::TableFormatError &e) {
                throw ConfigError(std::string("--table: ") + e.what());
            }
        }
    }

    ordered_json echo() const {
        return ordered_json{{"alice", input_json(alice)},
                            {"bob", input_json(bob)},
                            {"seed", seed},
                            {"table", table_path.empty() ? std::string("generated") : table_path}};
    }
};

struct Report {
    ordered_json json;
    std::string text;
    bool passed;
};

Report cmd_enumerate(const Config &config) {
    auto leaves = protocol::enumerate_branches(config.alice, config.bob, config.table);
    double total = 0;
    double worst = 1;
    ordered_json records = ordered_json::array();
    std::ostringstream text;
    text << std::setprecision(15);
    text << "leaf  a1 A2 b3 B2 A1 B1  probability        bob  alice  F(alice->bob)      F(bob->alice)\n";
    for (const auto &leaf : leaves) {
        total += leaf.probability;
        worst = std::min({worst, leaf.fidelity_alice_to_bob, leaf.fidelity_bob_to_alice});
        ordered_json r = {{"index", leaf.key.index()}};
        r["key"] = key_json(leaf.key);
        r["probability"] = leaf.probability;
        r["bob_ops"] = protocol::pauli_code(leaf.rule.bob);
        r["alice_ops"] = protocol::pauli_code(leaf.rule.alice);
        r["fidelity_alice_to_bob"] = leaf.fidelity_alice_to_bob;
        r["fidelity_bob_to_alice"] = leaf.fidelity_bob_to_alice;
        records.push_back(std::move(r));
        text << std::setw(4) << leaf.key.index() << "  " << leaf.key.to_string() << "  " << std::left
             << std::setw(17) << leaf.probability << "  " << protocol::pauli_code(leaf.rule.bob) << "   "
             << protocol::pauli_code(leaf.rule.alice) << "     " << std::setw(17) << leaf.fidelity_alice_to_bob
             << "  " << leaf.fidelity_bob_to_alice << std::right << "\n";
    }
    bool passed = leaves.size() == 64 && std::abs(total - 1) <= 1e-12 && worst >= protocol::kSuccessFidelity;
    text << "leaves: " << leaves.size() << ", total probability: " << total << ", min fidelity: " << worst << "\n"
         << "status: " << status(passed) << "\n";

    ordered_json json = report_header("enumerate");
    json["config"] = config.echo();
    json["leaves"] = std::move(records);
    json["total_probability"] = total;
    json["min_fidelity"] = worst;
    json["status"] = status(passed);
    return {std::move(json), text.str(), passed};
}

Report cmd_run(const Config &config) {
    auto cooperation = parties::parse_cooperation(config.cooperation);
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<parties::SessionResult> results(trials);

    // Each trial owns its seed and result slot, so completion order is irrelevant.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            results[t] = parties::run_session(config.alice, config.bob, mix_seed(config.seed, t), cooperation,
                                              config.table);
        }
    };
    std::size_t workers = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, trials);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; w++) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }

    // Under withholding only the deprived direction may fall short.
    const bool bob_deprived = cooperation == parties::Cooperation::AliceWithholdsA1;
    const bool alice_deprived = cooperation == parties::Cooperation::BobWithholdsB1;
    std::vector<int> histogram(64, 0);
    double worst_promised = 1;
    double deprived_sum = 0;
    ordered_json records = ordered_json::array();
    for (std::size_t t = 0; t < trials; t++) {
        const auto &r = results[t];
        histogram[static_cast<std::size_t>(r.leaf.index())]++;
        if (!bob_deprived) {
            worst_promised = std::min(worst_promised, r.fidelity_alice_to_bob);
        } else {
            deprived_sum += r.fidelity_alice_to_bob;
        }
        if (!alice_deprived) {
            worst_promised = std::min(worst_promised, r.fidelity_bob_to_alice);
        } else {
            deprived_sum += r.fidelity_bob_to_alice;
        }
        ordered_json rec = {{"trial", t},
                            {"seed", mix_seed(config.seed, t)},
                            {"leaf", r.leaf.index()},
                            {"fidelity_alice_to_bob", r.fidelity_alice_to_bob},
                            {"fidelity_bob_to_alice", r.fidelity_bob_to_alice}};
        if (config.transcripts) {
            rec["transcript"] = parties::transcript_to_json(r.transcript);
        }
        records.push_back(std::move(rec));
    }
    auto summary = verify::summarize_histogram(histogram);
    bool passed = worst_promised >= protocol::kSuccessFidelity;

    ordered_json json = report_header("run");
    ordered_json echo = config.echo();
    echo["trials"] = config.trials;
    echo["cooperation"] = config.cooperation;
    json["config"] = std::move(echo);
    json["trials"] = std::move(records);
    json["histogram"] = histogram;
    json["uniformity"] = ordered_json{{"expected_probability", 1.0 / 64},
                                      {"chi_square", summary.chi_square},
                                      {"degrees_of_freedom", summary.degrees_of_freedom},
                                      {"max_abs_z", summary.max_abs_z},
                                      {"within_4_sigma", summary.within_4_sigma}};
    json["min_fidelity"] = worst_promised;
    std::optional<double> expected;
    if (bob_deprived || alice_deprived) {
        expected = results.front().expected_deprived_fidelity;
        json["deprived"] = ordered_json{{"receiver", bob_deprived ? "bob" : "alice"},
                                        {"expected_fidelity", expected.value_or(0)},
                                        {"mean_fidelity", deprived_sum / static_cast<double>(trials)}};
    } else {
        json["deprived"] = nullptr;
    }
    json["status"] = status(passed);

    std::ostringstream text;
    text << std::setprecision(15);
    text << "trials: " << trials << ", cooperation: " << config.cooperation << ", seed: " << config.seed << "\n"
         << "min fidelity (undeprived directions): " << worst_promised << "\n"
         << "leaf histogram (expected " << static_cast<double>(trials) / 64 << " per leaf):\n";
    for (std::size_t k = 0; k < 64; k++) {
        text << std::setw(6) << histogram[k] << ((k % 8 == 7) ? "\n" : " ");
    }
    text << "chi-square: " << summary.chi_square << " (" << summary.degrees_of_freedom
         << " dof), max |z|: " << summary.max_abs_z << ", within 4 sigma: " << (summary.within_4_sigma ? "yes" : "no")
         << "\n";
    if (expected) {
        text << (bob_deprived ? "bob" : "alice") << " is deprived: expected fidelity " << *expected
             << ", mean realized " << deprived_sum / static_cast<double>(trials) << "\n";
    }
    text << "status: " << status(passed) << "\n";
    return {std::move(json), text.str(), passed};
}

Report cmd_swap(const Config &config) {
    auto outcomes = ghz::entanglement_swap(ghz::GhzIndex(config.swap_i), ghz::GhzIndex(config.swap_j));
    double total = 0;
    bool passed = outcomes.size() == 4;
    ordered_json records = ordered_json::array();
    std::ostringstream text;
    text << std::setprecision(15);
    text << "channel: Psi" << config.swap_i << "(1,2,3) x Psi" << config.swap_j
         << "(4,5,6), GHZ measurement on (1,3,5)\n"
         << "outcome  probability        remainder on (2,4,6)\n";
    for (const auto &o : outcomes) {
        total += o.probability;
        passed = passed && o.matched && std::abs(o.probability - 0.25) <= 1e-12;
        records.push_back(ordered_json{{"outcome", o.outcome.value()},
                                       {"probability", o.probability},
                                       {"matched", o.matched ? ordered_json(o.matched->value()) : ordered_json()}});
        text << "Psi" << o.outcome.value() << "     " << std::left << std::setw(17) << o.probability << "  "
             << (o.matched ? "Psi" + std::to_string(o.matched->value()) : std::string("(not a GHZ state)"))
             << std::right << "\n";
    }
    passed = passed && std::abs(total - 1) <= 1e-12;
    text << "total probability: " << total << "\nstatus: " << status(passed) << "\n";

    ordered_json json = report_header("swap");
    json["config"] = ordered_json{{"i", config.swap_i}, {"j", config.swap_j}};
    json["outcomes"] = std::move(records);
    json["total_probability"] = total;
    json["status"] = status(passed);
    return {std::move(json), text.str(), passed};
}

Report cmd_verify(const Config &config) {
    verify::Options options;
    options.seed = config.seed;
    options.table = &config.table;
    auto results = verify::run_all(options);
    bool passed = true;
    ordered_json records = ordered_json::array();
    std::ostringstream text;
    text << std::setprecision(6);
    for (const auto &r : results) {
        passed = passed && r.passed;
        records.push_back(ordered_json{{"id", r.id},
                                       {"title", r.title},
                                       {"passed", r.passed},
                                       {"detail", r.detail},
                                       {"seconds", r.seconds}});
        text << "[" << status(r.passed) << "] C" << r.id << " " << r.title << " (" << r.seconds << " s): " << r.detail
             << "\n";
    }
    text << "status: " << status(passed) << "\n";
    ordered_json json = report_header("verify");
    ordered_json echo{{"seed", config.seed},
                      {"table", config.table_path.empty() ? std::string("generated") : config.table_path}};
    json["config"] = std::move(echo);
    json["criteria"] = std::move(records);
    json["status"] = status(passed);
    return {std::move(json), text.str(), passed};
}

Report cmd_table(const Config &config) {
    std::string body = config.table.to_json();
    return {ordered_json::parse(body), body, true};
}

void emit(const Report &report, const Config &config, const std::string &subcommand, std::ostream &out,
          std::ostream &err) {
    std::string body = config.format == "json" ? report.json.dump(2) + "\n" : report.text;
    if (subcommand == "table") {
        body = report.text;
    }
    std::filesystem::path path = config.out_path;
    if (path.empty()) {
        if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir) {
            std::string ext = (config.format == "json" || subcommand == "table") ? ".json" : ".txt";
            path = std::filesystem::path(dir) / (subcommand + ext);
        }
    }
    if (path.empty()) {
        out << body;
        return;
    }
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
    file << body;
    err << "wrote " << path.string() << "\n";
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bidirectional teleportation of EPR pairs over two shared GHZ states."};
    app.name("bqt");
    app.require_subcommand(1, 1);
    Config config;

    app.add_option("--alpha", config.alpha, "Alice's payload c0,c1 as re,im,re,im (or two reals)");
    app.add_option("--beta", config.beta, "Bob's payload, same form as --alpha");
    app.add_option("--angles", config.angles,
                   "theta,phi for Alice (c0 = cos theta, c1 = e^{i phi} sin theta), or four values for both")
        ->excludes("--alpha")
        ->excludes("--beta");
    app.add_option("--seed", config.seed_text, "RNG seed, decimal or 0x-prefixed hex");
    app.add_option("--trials", config.trials, "Number of sampled sessions")->check(CLI::PositiveNumber);
    app.add_option("--threads", config.threads, "Worker threads for run (0: hardware concurrency)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--cooperation", config.cooperation, "full, withhold-a1 or withhold-b1")
        ->check(CLI::IsMember({"full", "withhold-a1", "withhold-b1"}));
    app.add_option("--out", config.out_path, std::string("Report path (default: stdout, or $") + kOutputDirEnv +
                                                  "/<command>.<ext> when set)");
    app.add_option("--format", config.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--transcripts", config.transcripts, "Embed per-trial transcripts in the run report");
    app.add_option("--table", config.table_path, "Correction table JSON to use instead of the generated one");

    auto *enumerate = app.add_subcommand("enumerate", "Enumerate all 64 measurement branches")->fallthrough();
    auto *run_cmd = app.add_subcommand("run", "Run seeded sampled sessions")->fallthrough();
    auto *swap = app.add_subcommand("swap", "Entanglement swapping of two GHZ states")->fallthrough();
    swap->add_option("i", config.swap_i, "GHZ index of the first triple")->required()->check(CLI::Range(0, 7));
    swap->add_option("j", config.swap_j, "GHZ index of the second triple")->required()->check(CLI::Range(0, 7));
    auto *verify_cmd = app.add_subcommand("verify", "Run the full acceptance suite")->fallthrough();
    auto *table_cmd = app.add_subcommand("table", "Print the correction table in use")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        config.resolve();
    } catch (const std::exception &e) {
        err << "bqt: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        Report report;
        std::string name;
        if (enumerate->parsed()) {
            name = "enumerate";
            report = cmd_enumerate(config);
        } else if (run_cmd->parsed()) {
            name = "run";
            report = cmd_run(config);
        } else if (swap->parsed()) {
            name = "swap";
            report = cmd_swap(config);
        } else if (verify_cmd->parsed()) {
            name = "verify";
            report = cmd_verify(config);
        } else if (table_cmd->parsed()) {
            name = "table";
            report = cmd_table(config);
        }
        emit(report, config, name, out, err);
        return report.passed ? kExitOk : kExitFail;
    } catch (const std::exception &e) {
        err << "bqt: " << e.what() << "\n";
        return kExitFail;
    }
}

}  // namespace bqt::cli
