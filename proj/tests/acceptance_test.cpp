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

// Acceptance suite: one line per criterion, exit status 0 iff all pass.
//
// Library results are checked against the reference computations in
// oracle.hpp wherever a second computation is possible.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bqt/cli.hpp"
#include "bqt/collapse_table.hpp"
#include "bqt/correction_table.hpp"
#include "bqt/ghz.hpp"
#include "bqt/parties.hpp"
#include "bqt/protocol.hpp"
#include "bqt/qsim.hpp"
#include "json.hpp"
#include "oracle.hpp"

using namespace bqt;
using protocol::EprInput;
using protocol::Sign;

namespace {

constexpr double kTol = 1e-12;
constexpr double kSuccess = 1 - 1e-10;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool condition, const std::string &what) {
        if (!condition) {
            if (ok) {
                detail << "first failure: " << what << "; ";
            }
            ok = false;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string &title, double limit_seconds, const std::function<void(Check &)> &body) {
    Check check;
    check.detail.precision(17);
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception &e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0) {
        check.expect(seconds < limit_seconds, "runtime " + std::to_string(seconds) + " s over the limit");
    }
    if (!check.ok) {
        failures++;
    }
    std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " C" << id << " " << title << " (" << seconds
              << " s): " << check.detail.str() << std::endl;
}

std::mt19937_64 rng(20261016);

/// Payload with random magnitudes and random complex phases.
EprInput random_input() {
    std::uniform_real_distribution<double> u(0, 1);
    double p0 = u(rng);
    std::complex<double> c0 = std::polar(std::sqrt(p0), 2 * std::numbers::pi * u(rng));
    std::complex<double> c1 = std::polar(std::sqrt(1 - p0), 2 * std::numbers::pi * u(rng));
    return EprInput::make(c0, c1);
}

std::vector<std::pair<EprInput, EprInput>> random_pairs(int n) {
    std::vector<std::pair<EprInput, EprInput>> pairs{
        {EprInput::make(1, 0), EprInput::make(1, 0)},
        {EprInput::make(0, 1), EprInput::make(std::sqrt(0.5), std::sqrt(0.5))},
        {EprInput::make(0.6, 0.8), EprInput::make(0.8, 0.6)},
    };
    while (static_cast<int>(pairs.size()) < n) {
        auto a = random_input();
        pairs.emplace_back(a, random_input());
    }
    return pairs;
}

// Reference protocol, written against oracle::State.

oracle::State epr(const EprInput &in, const std::string &x, const std::string &y) {
    return oracle::basis_sum({x, y}, {{"00", in.c0()}, {"11", in.c1()}});
}

oracle::State ghz_on(int index, const std::vector<std::string> &names) {
    return oracle::State{names, oracle::ghz(index)};
}

oracle::State encoded(const EprInput &alice, const EprInput &bob) {
    auto s = oracle::kron(ghz_on(0, {"a1", "b1", "b2"}), ghz_on(0, {"a2", "a3", "b3"}));
    s = oracle::kron(oracle::kron(s, epr(alice, "A1", "A2")), epr(bob, "B1", "B2"));
    s = oracle::cnot(s, "A1", "a1");
    return oracle::cnot(s, "B1", "b3");
}

oracle::State after_step3(const oracle::State &s, const protocol::Step3Outcomes &o) {
    auto r = oracle::project(s, {"a1"}, oracle::z_ket(o.a1));
    r = oracle::project(r, {"A2"}, oracle::x_ket(bit(o.A2)));
    r = oracle::project(r, {"b3"}, oracle::z_ket(o.b3));
    return oracle::project(r, {"B2"}, oracle::x_ket(bit(o.B2)));
}

oracle::State after_step4(const oracle::State &s, const protocol::Step4Outcomes &o) {
    auto r = oracle::project(s, {"A1"}, oracle::x_ket(bit(o.A1)));
    return oracle::project(r, {"B1"}, oracle::x_ket(bit(o.B1)));
}

Eigen::Matrix2cd pauli_matrix(protocol::Pauli p) {
    switch (p) {
        case protocol::Pauli::I:
            return Eigen::Matrix2cd::Identity();
        case protocol::Pauli::Z:
            return oracle::pauli_z();
        case protocol::Pauli::X:
            return oracle::pauli_x();
        case protocol::Pauli::XZ:
            return oracle::pauli_x() * oracle::pauli_z();
    }
    return Eigen::Matrix2cd::Identity();
}

oracle::State apply_pair(oracle::State s, const std::string &x, const std::string &y, const protocol::PauliPair &ops) {
    s = oracle::apply(s, x, pauli_matrix(ops[0]));
    return oracle::apply(s, y, pauli_matrix(ops[1]));
}

struct OracleLeaf {
    protocol::BranchKey key;
    double probability;
    oracle::State payload;  // normalized, over (b1, b2, a2, a3)
};

std::vector<OracleLeaf> oracle_leaves(const EprInput &alice, const EprInput &bob) {
    std::vector<OracleLeaf> leaves;
    auto s = encoded(alice, bob);
    for (const auto &o3 : protocol::all_step3_outcomes()) {
        auto r3 = after_step3(s, o3);
        for (const auto &o4 : protocol::all_step4_outcomes()) {
            auto r4 = after_step4(r3, o4);
            leaves.push_back({protocol::BranchKey{o3, o4}, r4.norm2(), r4.normalized()});
        }
    }
    return leaves;
}

std::string label_list(const std::array<qsim::QubitLabel, 6> &order) {
    std::string s = "(";
    for (std::size_t k = 0; k < order.size(); k++) {
        s += (k ? "," : "") + order[k].name();
    }
    return s + ")";
}

// Random states for the engine properties.

qsim::Register random_register(std::size_t n, const std::string &prefix = "q") {
    std::normal_distribution<double> g;
    std::vector<qsim::QubitLabel> labels;
    for (std::size_t k = 0; k < n; k++) {
        labels.emplace_back(prefix + std::to_string(k));
    }
    std::vector<qsim::Amplitude> amps(std::size_t{1} << n);
    for (auto &a : amps) {
        a = {g(rng), g(rng)};
    }
    return qsim::Register(std::move(labels), std::move(amps));
}

oracle::State to_oracle(const qsim::Register &r) {
    oracle::State s;
    for (const auto &l : r.labels()) {
        s.names.push_back(l.name());
    }
    s.v = Eigen::Map<const Eigen::VectorXcd>(r.amps().data(), static_cast<Eigen::Index>(r.dim()));
    return s;
}

double distance(const qsim::Register &r, const oracle::State &s) {
    return (to_oracle(r).v - s.v).cwiseAbs().maxCoeff();
}

std::string strip_timestamp(const std::string &report) {
    auto j = nlohmann::ordered_json::parse(report);
    j.erase("generated_at");
    return j.dump();
}

}  // namespace

int main() {
    std::cout.precision(6);

    criterion(1, "entanglement swapping |Psi0>|Psi0> on (1,3,5)", 1.0, [](Check &c) {
        auto outcomes = ghz::entanglement_swap(ghz::GhzIndex(0), ghz::GhzIndex(0));
        const std::map<int, int> expected{{0, 0}, {1, 1}, {6, 2}, {7, 3}};
        c.expect(outcomes.size() == 4, "four outcomes");
        auto state = oracle::kron(ghz_on(0, {"1", "2", "3"}), ghz_on(0, {"4", "5", "6"}));
        for (const auto &o : outcomes) {
            int k = o.outcome.value();
            c.expect(expected.count(k) == 1, "outcome " + std::to_string(k) + " expected");
            c.expect(std::abs(o.probability - 0.25) <= kTol, "probability 1/4");
            c.expect(o.matched && o.matched->value() == expected.at(k), "remainder pairing");
            auto r = oracle::project(state, {"1", "3", "5"}, oracle::ghz(k));
            c.expect(std::abs(r.norm2() - 0.25) <= kTol, "oracle probability 1/4");
            double overlap = std::norm(oracle::ghz(expected.at(k)).dot(r.normalized().v));
            c.expect(std::abs(overlap - 1) <= kTol, "oracle remainder is the paired GHZ state");
            c.detail << k << "->" << expected.at(k) << " p=" << o.probability << " ";
        }
    });

    criterion(2, "generalized swapping over all 64 GHZ pairs", 5.0, [](Check &c) {
        int good = 0;
        for (int i = 0; i < 8; i++) {
            for (int j = 0; j < 8; j++) {
                auto outcomes = ghz::entanglement_swap(ghz::GhzIndex(i), ghz::GhzIndex(j));
                auto state = oracle::kron(ghz_on(i, {"1", "2", "3"}), ghz_on(j, {"4", "5", "6"}));
                std::map<int, int> oracle_pairs;
                for (int k = 0; k < 8; k++) {
                    auto r = oracle::project(state, {"1", "3", "5"}, oracle::ghz(k));
                    if (r.norm2() < kTol) {
                        continue;
                    }
                    c.expect(std::abs(r.norm2() - 0.25) <= kTol, "oracle probability 1/4");
                    for (int m = 0; m < 8; m++) {
                        if (std::abs(std::norm(oracle::ghz(m).dot(r.normalized().v)) - 1) <= kTol) {
                            oracle_pairs[k] = m;
                        }
                    }
                }
                bool pair_ok = outcomes.size() == 4 && oracle_pairs.size() == 4;
                for (const auto &o : outcomes) {
                    pair_ok = pair_ok && std::abs(o.probability - 0.25) <= kTol && o.matched &&
                              oracle_pairs.count(o.outcome.value()) &&
                              oracle_pairs.at(o.outcome.value()) == o.matched->value();
                }
                c.expect(pair_ok, "pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
                good += pair_ok;
            }
        }
        c.detail << good << " of 64 pairs give 4 outcomes at 1/4 with GHZ remainders";
    });

    criterion(3, "step-3 branch uniformity over 100 random inputs", 10.0, [](Check &c) {
        auto pairs = random_pairs(100);
        double worst = 0;
        for (const auto &[alice, bob] : pairs) {
            auto results = protocol::enumerate_step3(alice, bob);
            c.expect(results.size() == 16, "16 combinations");
            auto s = encoded(alice, bob);
            for (const auto &r : results) {
                worst = std::max(worst, std::abs(r.probability - 1.0 / 16));
                worst = std::max(worst, std::abs(after_step3(s, r.outcomes).norm2() - 1.0 / 16));
            }
        }
        c.expect(worst <= kTol, "probabilities within 1e-12 of 1/16");
        c.detail << pairs.size() << " input pairs, max |p - 1/16| = " << worst << " (library and oracle)";
    });

    criterion(4, "collapsed states vs tabulated rows, worked branch", 0, [](Check &c) {
        auto pairs = random_pairs(8);
        auto reported = protocol::check_collapse_table(pairs.back().first, pairs.back().second);
        c.expect(!reported.matching_orders.empty(), "an order matching every row");
        if (reported.matching_orders.empty()) {
            return;
        }
        const auto order = reported.matching_orders.front();
        std::vector<std::string> names;
        for (const auto &l : order) {
            names.push_back(l.name());
        }
        for (const auto &[alice, bob] : pairs) {
            const std::array<qsim::Amplitude, 2> a{alice.c0(), alice.c1()};
            const std::array<qsim::Amplitude, 2> b{bob.c0(), bob.c1()};
            auto s = encoded(alice, bob);
            for (const auto &row : protocol::tabulated_collapse_rows()) {
                auto remainder = after_step3(s, row.outcomes).normalized();
                std::vector<std::pair<std::string, oracle::cd>> terms;
                for (const auto &t : row.terms) {
                    terms.emplace_back(std::string(t.ket), static_cast<double>(t.sign) * a[t.alpha] * b[t.beta]);
                }
                auto expected = oracle::basis_sum(names, terms);
                // Reorder the oracle remainder to the reported label order.
                oracle::State reordered{names, Eigen::VectorXcd::Zero(64)};
                for (Eigen::Index i = 0; i < 64; i++) {
                    Eigen::Index k = 0;
                    for (const auto &n : names) {
                        k = (k << 1) | ((i >> remainder.bit_of(n)) & 1);
                    }
                    reordered.v(k) = remainder.v(i);
                }
                c.expect((reordered.v - expected.v).cwiseAbs().maxCoeff() <= kTol, "row matches under reported order");
            }
            // Worked branch a1=0, A2=+, b3=0, B2=+: the payload factorizes directly.
            auto worked = after_step3(s, {0, Sign::Plus, 0, Sign::Plus});
            for (const auto &o4 : protocol::all_step4_outcomes()) {
                auto payload = after_step4(worked, o4).normalized();
                double sa = o4.A1 == Sign::Plus ? 1 : -1;
                double sb = o4.B1 == Sign::Plus ? 1 : -1;
                auto expected =
                    oracle::kron(oracle::basis_sum({"b1", "b2"}, {{"00", a[0]}, {"11", sa * a[1]}}),
                                 oracle::basis_sum({"a2", "a3"}, {{"00", b[0]}, {"11", sb * b[1]}}));
                c.expect(payload.names == expected.names, "payload label order");
                c.expect((payload.v - expected.v).cwiseAbs().maxCoeff() <= kTol, "worked-branch factorization");
            }
        }
        c.detail << "reported order " << label_list(order) << " matches all 16 rows for " << pairs.size()
                 << " input pairs; worked branch factorizes in all 4 sub-branches";
    });

    criterion(5, "perfect bidirectional reconstruction, 64 leaves x 100 inputs", 60.0, [](Check &c) {
        const auto &table = protocol::default_correction_table();
        auto asset = protocol::CorrectionTable::load(BQT_ASSET_DIR "/correction_table.json");
        c.expect(asset == table, "shipped correction table equals the generated one");
        auto pairs = random_pairs(100);
        double worst = 1;
        double worst_oracle = 1;
        for (const auto &[alice, bob] : pairs) {
            auto leaves = protocol::enumerate_branches(alice, bob, table);
            auto reference = oracle_leaves(alice, bob);
            c.expect(leaves.size() == 64, "64 leaves");
            for (std::size_t k = 0; k < leaves.size(); k++) {
                const auto &leaf = leaves[k];
                c.expect(leaf.key == reference[k].key, "leaf order");
                worst = std::min({worst, leaf.fidelity_alice_to_bob, leaf.fidelity_bob_to_alice});
                auto fixed = apply_pair(reference[k].payload, "b1", "b2", table.rule(leaf.key).bob);
                fixed = apply_pair(fixed, "a2", "a3", table.rule(leaf.key).alice);
                double f_ab = oracle::fidelity(oracle::pair_density(fixed, "b1", "b2"), alice.c0(), alice.c1());
                double f_ba = oracle::fidelity(oracle::pair_density(fixed, "a2", "a3"), bob.c0(), bob.c1());
                worst_oracle = std::min({worst_oracle, f_ab, f_ba});
            }
        }
        c.expect(worst >= kSuccess, "library fidelities >= 1 - 1e-10");
        c.expect(worst_oracle >= kSuccess, "oracle fidelities >= 1 - 1e-10");
        c.detail << pairs.size() << " input pairs, min fidelity " << worst << " (library), " << worst_oracle
                 << " (oracle)";
    });

    criterion(6, "tabulated (A1,B1) corrections, Z(x)Z on span{|00>,|11>}", 0, [](Check &c) {
        const auto &rules = protocol::tabulated_rules();
        double worst = 1;
        for (const auto &[alice, bob] : random_pairs(50)) {
            auto worked = after_step3(encoded(alice, bob), {0, Sign::Plus, 0, Sign::Plus});
            for (const auto &o4 : protocol::all_step4_outcomes()) {
                const auto &rule = rules[static_cast<std::size_t>(2 * bit(o4.A1) + bit(o4.B1))];
                auto fixed = apply_pair(after_step4(worked, o4).normalized(), "b1", "b2", rule.bob);
                fixed = apply_pair(fixed, "a2", "a3", rule.alice);
                worst = std::min(worst,
                                 oracle::fidelity(oracle::pair_density(fixed, "b1", "b2"), alice.c0(), alice.c1()));
                worst = std::min(worst, oracle::fidelity(oracle::pair_density(fixed, "a2", "a3"), bob.c0(), bob.c1()));
            }
        }
        c.expect(std::abs(1 - worst) <= kTol, "fidelity 1 for all four rules");

        Eigen::Matrix4cd zz;
        zz = Eigen::Matrix4cd::Zero();
        for (int r = 0; r < 2; r++) {
            for (int s = 0; s < 2; s++) {
                for (int u = 0; u < 2; u++) {
                    for (int v = 0; v < 2; v++) {
                        zz(2 * r + s, 2 * u + v) = oracle::pauli_z()(r, u) * oracle::pauli_z()(s, v);
                    }
                }
            }
        }
        Eigen::Matrix4cd span = Eigen::Matrix4cd::Zero();
        span(0, 0) = 1;
        span(3, 3) = 1;
        double zz_err = (zz * span - span).cwiseAbs().maxCoeff();
        double lib_err = 0;
        for (const auto &[alice, bob] : random_pairs(20)) {
            auto pair = alice.on(protocol::q::b1, protocol::q::b2);
            auto applied = protocol::apply_pauli_pair(pair, protocol::q::b1, protocol::q::b2,
                                                      {protocol::Pauli::Z, protocol::Pauli::Z});
            lib_err = std::max(lib_err, distance(applied, to_oracle(pair)));
        }
        c.expect(zz_err <= kTol && lib_err <= kTol, "Z(x)Z is the identity on the span");
        c.detail << "min fidelity " << worst << "; |(Z(x)Z - I) P| = " << zz_err << ", library " << lib_err;
    });

    criterion(7, "non-cooperation fidelity |c0|^4 + |c1|^4", 0, [](Check &c) {
        auto dephased = [](const EprInput &in) {
            Eigen::Vector4cd psi(in.c0(), 0, 0, in.c1());
            Eigen::Vector4cd flipped(in.c0(), 0, 0, -in.c1());  // Z on the first qubit
            Eigen::Matrix4cd rho = 0.5 * psi * psi.adjoint() + 0.5 * flipped * flipped.adjoint();
            return (psi.adjoint() * rho * psi)(0, 0).real();
        };
        auto balanced = EprInput::make(std::sqrt(0.5), std::sqrt(0.5));
        auto skewed = EprInput::make(0.6, 0.8);
        c.expect(std::abs(dephased(balanced) - 0.5) <= kTol, "oracle 0.5 for balanced input");
        c.expect(std::abs(dephased(skewed) - 0.5392) <= kTol, "oracle 0.5392 for (0.6, 0.8)");
        c.expect(std::abs(protocol::noncooperation_fidelity(balanced, protocol::Withheld::A1) - 0.5) <= kTol,
                 "library 0.5 for balanced input");
        c.expect(std::abs(protocol::noncooperation_fidelity(skewed, protocol::Withheld::A1) - 0.5392) <= kTol,
                 "library 0.5392 for (0.6, 0.8)");

        const auto &table = protocol::default_correction_table();
        double worst = 0;
        auto pairs = random_pairs(12);
        for (const auto &[alice, bob] : pairs) {
            double moment = std::pow(std::norm(alice.c0()), 2) + std::pow(std::norm(alice.c1()), 2);
            // Bob's average fidelity when A1 is never announced, from the full branch tree.
            double bob_expected = 0;
            for (const auto &leaf : oracle_leaves(alice, bob)) {
                auto seen = protocol::receiver_view(leaf.key, protocol::Withheld::A1);
                auto fixed = apply_pair(leaf.payload, "b1", "b2", table.rule(seen).bob);
                bob_expected +=
                    leaf.probability * oracle::fidelity(oracle::pair_density(fixed, "b1", "b2"), alice.c0(), alice.c1());
            }
            double lib = protocol::noncooperation_fidelity(alice, protocol::Withheld::A1, bob);
            worst = std::max({worst, std::abs(bob_expected - moment), std::abs(lib - moment),
                              std::abs(dephased(alice) - moment)});
        }
        c.expect(worst <= kTol, "expected fidelity equals |c0|^4 + |c1|^4");
        c.detail << "balanced 0.5, (0.6,0.8) 0.5392; max deviation over " << pairs.size() << " inputs " << worst;
    });

    criterion(8, "4096 seeded sessions, leaf frequencies and reproducibility", 0, [](Check &c) {
        auto alice = random_input();
        auto bob = random_input();
        const int n = 4096;
        std::vector<int> counts(64, 0);
        bool local = true;
        for (int t = 0; t < n; t++) {
            auto r = parties::run_session(alice, bob, mix_seed(99, static_cast<std::uint64_t>(t)),
                                          parties::Cooperation::Full);
            counts[static_cast<std::size_t>(r.leaf.index())]++;
            local = local && parties::ownership_check(r.transcript);
        }
        const double p = 1.0 / 64;
        const double sigma = std::sqrt(p * (1 - p) / n);
        double max_z = 0;
        for (int k : counts) {
            max_z = std::max(max_z, std::abs(static_cast<double>(k) / n - p) / sigma);
        }
        c.expect(max_z <= 4, "all leaf frequencies within 4 sigma");
        c.expect(local, "transcripts respect qubit ownership");

        bool same = true;
        for (std::uint64_t seed : {0ull, 7ull, 0xFFFFFFFFFFFFFFFFull}) {
            auto first = parties::run_session(alice, bob, seed, parties::Cooperation::Full);
            auto second = parties::run_session(alice, bob, seed, parties::Cooperation::Full);
            same = same && first.transcript.to_json() == second.transcript.to_json();
        }
        std::string reports[2];
        for (auto &report : reports) {
            std::ostringstream out;
            std::ostringstream err;
            const char *argv[] = {"bqt", "run", "--trials", "64", "--seed", "7", "--transcripts", "--format", "json"};
            c.expect(cli::run(9, argv, out, err) == 0, "run exits 0");
            report = strip_timestamp(out.str());
        }
        same = same && reports[0] == reports[1];
        c.expect(same, "identical seeds give byte-identical transcripts");
        c.detail << n << " sessions, max |z| = " << max_z << "; transcripts reproducible: " << (same ? "yes" : "no");
    });

    criterion(9, "engine properties, 1000 randomized cases each", 30.0, [](Check &c) {
        const int cases = 1000;
        std::uniform_int_distribution<std::size_t> qubits(2, 7);
        int involution = 0;
        int born = 0;
        int norm = 0;
        int purity = 0;
        for (int k = 0; k < cases; k++) {
            auto r = random_register(qubits(rng));
            std::uniform_int_distribution<std::size_t> pick(0, r.num_qubits() - 1);
            auto a = r.labels()[pick(rng)];
            auto b = a;
            while (b == a) {
                b = r.labels()[pick(rng)];
            }
            auto ref = to_oracle(r);
            // Gates agree with the reference, preserve the norm and square to the identity.
            const std::pair<qsim::Gate1, Eigen::Matrix2cd> gates[] = {
                {qsim::Gate1::X, oracle::pauli_x()}, {qsim::Gate1::Z, oracle::pauli_z()}, {qsim::Gate1::H, oracle::hadamard()}};
            for (const auto &[g, m] : gates) {
                auto once = qsim::apply_gate1(r, a, g);
                involution += distance(once, oracle::apply(ref, a.name(), m)) > kTol;
                involution += !qsim::apply_gate1(once, a, g).same_amplitudes(r, kTol);
                norm += std::abs(once.norm_squared() - 1) > kTol;
            }
            auto cx = qsim::apply_cnot(r, a, b);
            involution += distance(cx, oracle::cnot(ref, a.name(), b.name())) > kTol;
            involution += !qsim::apply_cnot(cx, a, b).same_amplitudes(r, kTol);
            norm += std::abs(cx.norm_squared() - 1) > kTol;

            // Born probabilities sum to one and agree with projector norms.
            auto [z0, z1] = qsim::outcome_probabilities(r, a, qsim::Basis::Z);
            auto [x0, x1] = qsim::outcome_probabilities(r, a, qsim::Basis::X);
            born += std::abs(z0 + z1 - 1) > kTol || std::abs(x0 + x1 - 1) > kTol;
            born += std::abs(z0 - oracle::project(ref, {a.name()}, oracle::z_ket(0)).norm2()) > kTol;
            born += std::abs(x1 - oracle::project(ref, {a.name()}, oracle::x_ket(1)).norm2()) > kTol;
            if (r.num_qubits() >= 3) {
                ghz::Triple triple{r.labels()[0], r.labels()[1], r.labels()[2]};
                double total = 0;
                for (double p : ghz::ghz_outcome_probabilities(r, triple)) {
                    total += p;
                }
                born += std::abs(total - 1) > kTol;
            }

            // Collapse leaves a normalized remainder.
            int forced = z0 > 0.5 ? 0 : 1;
            auto m = qsim::measure(r, a, qsim::Basis::Z, qsim::Force{forced});
            norm += std::abs(m.collapsed.norm_squared() - 1) > kTol;

            // Tracing out one factor of a product state leaves the other, pure.
            auto left = random_register(1 + k % 3, "l");
            auto right = random_register(1 + (k / 3) % 3, "r");
            auto rho = qsim::reduced_density(qsim::tensor(left, right), left.labels());
            purity += std::abs(rho.purity() - 1) > kTol || !rho.is_valid();
            purity += std::abs(qsim::fidelity_pure(rho, left) - 1) > kTol;
        }
        c.expect(involution == 0, "gates");
        c.expect(born == 0, "Born completeness");
        c.expect(norm == 0, "norm preservation");
        c.expect(purity == 0, "partial-trace purity");
        c.detail << cases << " cases; failures: gates " << involution << ", Born " << born << ", norm " << norm
                 << ", purity " << purity;
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
