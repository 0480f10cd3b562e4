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

#include "bqt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "bqt/collapse_table.hpp"
#include "bqt/ghz.hpp"
#include "bqt/parties.hpp"
#include "bqt/random_states.hpp"

namespace bqt::verify {

using protocol::EprInput;
using qsim::Register;
namespace q = protocol::q;

namespace {

constexpr double kTol = 1e-12;

const protocol::CorrectionTable &table_of(const Options &options) {
    return options.table ? *options.table : protocol::default_correction_table();
}

/// Times `body`, which fills in passed/detail, and applies the runtime limit.
CriterionResult timed(int id, std::string title, double limit_seconds,
                      const std::function<void(bool &, std::ostringstream &)> &body) {
    auto start = std::chrono::steady_clock::now();
    bool passed = true;
    std::ostringstream detail;
    detail.precision(17);
    try {
        body(passed, detail);
    } catch (const std::exception &e) {
        passed = false;
        detail << "exception: " << e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_seconds > 0 && seconds >= limit_seconds) {
        passed = false;
        detail << "; runtime " << seconds << " s exceeds " << limit_seconds << " s";
    }
    return CriterionResult{id, std::move(title), passed, detail.str(), seconds};
}

}  // namespace

CriterionResult swap_canonical(const Options &) {
    return timed(1, "entanglement swapping of |Psi0>|Psi0>", 1.0, [](bool &ok, std::ostringstream &d) {
        auto outcomes = ghz::entanglement_swap(ghz::GhzIndex(0), ghz::GhzIndex(0));
        const std::array<std::pair<int, int>, 4> expected{{{0, 0}, {1, 1}, {6, 2}, {7, 3}}};
        ok = outcomes.size() == expected.size();
        for (std::size_t k = 0; ok && k < outcomes.size(); k++) {
            const auto &o = outcomes[k];
            ok = o.outcome.value() == expected[k].first && o.matched && o.matched->value() == expected[k].second &&
                 std::abs(o.probability - 0.25) <= kTol;
        }
        for (const auto &o : outcomes) {
            d << o.outcome.value() << "->" << (o.matched ? std::to_string(o.matched->value()) : "?") << " p="
              << o.probability << " ";
        }
    });
}

CriterionResult swap_all_pairs(const Options &) {
    return timed(2, "generalized swapping over all 64 GHZ pairs", 5.0, [](bool &ok, std::ostringstream &d) {
        int failures = 0;
        for (auto i : ghz::GhzIndex::all()) {
            for (auto j : ghz::GhzIndex::all()) {
                auto outcomes = ghz::entanglement_swap(i, j);
                bool good = outcomes.size() == 4;
                double total = 0;
                for (const auto &o : outcomes) {
                    good = good && o.matched && std::abs(o.probability - 0.25) <= kTol;
                    total += o.probability;
                }
                good = good && std::abs(total - 1) <= kTol;
                if (!good) {
                    failures++;
                    d << "(" << i.value() << "," << j.value() << ") ";
                }
            }
        }
        ok = failures == 0;
        d << failures << " failing pairs of 64";
    });
}

CriterionResult step3_uniformity(const Options &options) {
    return timed(3, "step-3 branch uniformity 1/16", 10.0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 3));
        auto alices = test_inputs(rng, options.random_inputs);
        auto bobs = test_inputs(rng, options.random_inputs);
        std::reverse(bobs.begin(), bobs.end());
        double worst = 0;
        for (std::size_t k = 0; k < alices.size(); k++) {
            for (const auto &s3 : protocol::enumerate_step3(alices[k], bobs[k])) {
                worst = std::max(worst, std::abs(s3.probability - 1.0 / 16));
            }
        }
        ok = worst <= kTol;
        d << alices.size() << " input pairs, max |p - 1/16| = " << worst;
    });
}

CriterionResult collapse_table_content(const Options &options) {
    return timed(4, "collapsed states vs tabulated rows", 0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 4));
        std::vector<std::pair<EprInput, EprInput>> inputs{
            {EprInput::from_angles(0.5, 0.9), EprInput::from_angles(1.1, -0.4)}};
        for (int k = 0; k < 4; k++) {
            inputs.emplace_back(random_epr(rng), random_epr(rng));
        }
        std::optional<std::array<qsim::QubitLabel, 6>> order;
        ok = true;
        for (const auto &[alice, bob] : inputs) {
            auto check = protocol::check_collapse_table(alice, bob);
            if (check.matching_orders.empty()) {
                ok = false;
                break;
            }
            if (!order) {
                order = check.matching_orders.front();
            } else if (std::find(check.matching_orders.begin(), check.matching_orders.end(), *order) ==
                       check.matching_orders.end()) {
                ok = false;
            }
        }
        if (order) {
            d << "label order (";
            for (std::size_t k = 0; k < order->size(); k++) {
                d << (k ? "," : "") << (*order)[k];
            }
            d << ") matches all 16 rows";
        } else {
            d << "no single label order matches all rows";
        }

        // Worked branch: payloads factor exactly as (a0|00> +- a1|11>)(b0|00> +- b1|11>).
        for (const auto &[alice, bob] : inputs) {
            Register encoded = protocol::encode(protocol::initial_state(alice, bob));
            auto s3 = protocol::step3_measure(encoded, protocol::Step3Modes::forced({0, protocol::Sign::Plus, 0,
                                                                                      protocol::Sign::Plus}));
            for (const auto &o4 : protocol::all_step4_outcomes()) {
                auto s4 = protocol::step4_measure(s3.remainder, qsim::Force{bit(o4.A1)}, qsim::Force{bit(o4.B1)});
                double sa = o4.A1 == protocol::Sign::Plus ? 1 : -1;
                double sb = o4.B1 == protocol::Sign::Plus ? 1 : -1;
                Register expected = qsim::tensor(
                    qsim::make_register({{"00", alice.c0()}, {"11", sa * alice.c1()}}, {q::b1, q::b2}),
                    qsim::make_register({{"00", bob.c0()}, {"11", sb * bob.c1()}}, {q::a2, q::a3}));
                if (!s4.payload.same_amplitudes(expected, kTol)) {
                    ok = false;
                    d << "; worked-branch payload mismatch for A1/B1 = " << bit(o4.A1) << bit(o4.B1);
                }
            }
        }
        if (ok) {
            d << "; worked branch factorizes directly in all four sub-branches";
        }
    });
}

CriterionResult reconstruction(const Options &options) {
    return timed(5, "perfect bidirectional reconstruction", 60.0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 5));
        auto alices = test_inputs(rng, options.random_inputs);
        auto bobs = test_inputs(rng, options.random_inputs);
        std::reverse(bobs.begin(), bobs.end());
        const auto &table = table_of(options);
        double worst = 1;
        int failing = 0;
        for (std::size_t k = 0; k < alices.size(); k++) {
            for (const auto &leaf : protocol::enumerate_branches(alices[k], bobs[k], table)) {
                double f = std::min(leaf.fidelity_alice_to_bob, leaf.fidelity_bob_to_alice);
                worst = std::min(worst, f);
                if (f < protocol::kSuccessFidelity) {
                    failing++;
                }
            }
        }
        ok = failing == 0;
        d << alices.size() << " input pairs x 64 leaves, min fidelity " << worst << ", " << failing
          << " leaves below 1-1e-10";
    });
}

CriterionResult tabulated_corrections(const Options &options) {
    return timed(6, "tabulated (A1,B1) corrections and Z(x)Z identity", 0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 6));
        auto alices = test_inputs(rng, options.random_inputs);
        auto bobs = test_inputs(rng, options.random_inputs);
        std::reverse(bobs.begin(), bobs.end());
        double worst = 0;
        bool zz_identity = true;
        for (std::size_t k = 0; k < alices.size(); k++) {
            Register encoded = protocol::encode(protocol::initial_state(alices[k], bobs[k]));
            auto s3 = protocol::step3_measure(encoded, protocol::Step3Modes::forced({0, protocol::Sign::Plus, 0,
                                                                                      protocol::Sign::Plus}));
            for (const auto &o4 : protocol::all_step4_outcomes()) {
                auto s4 = protocol::step4_measure(s3.remainder, qsim::Force{bit(o4.A1)}, qsim::Force{bit(o4.B1)});
                const auto &rule = protocol::tabulated_rules()[static_cast<std::size_t>(2 * bit(o4.A1) + bit(o4.B1))];
                Register fixed = protocol::correct(s4.payload, rule);
                worst = std::max(worst, std::abs(1 - protocol::pair_fidelity(fixed, q::b1, q::b2, alices[k])));
                worst = std::max(worst, std::abs(1 - protocol::pair_fidelity(fixed, q::a2, q::a3, bobs[k])));
            }
            Register pair = alices[k].on(q::b1, q::b2);
            Register zz = protocol::apply_pauli_pair(pair, q::b1, q::b2, {protocol::Pauli::Z, protocol::Pauli::Z});
            zz_identity = zz_identity && zz.same_amplitudes(pair, kTol);
        }
        ok = worst <= kTol && zz_identity;
        d << "max |1 - F| = " << worst << "; Z(x)Z acts as identity on span{|00>,|11>}: "
          << (zz_identity ? "yes" : "no");
    });
}

namespace {

/// <psi| (rho + Z1 rho Z1)/2 |psi> using plain density matrices.
double dephased_fidelity(const EprInput &input) {
    Register psi = input.on(q::b1, q::b2);
    Register flipped = qsim::apply_gate1(psi, q::b1, qsim::Gate1::Z);
    std::array<std::pair<double, qsim::DensityMatrix>, 2> parts{
        std::pair{0.5, qsim::DensityMatrix::pure(psi)}, std::pair{0.5, qsim::DensityMatrix::pure(flipped)}};
    return qsim::fidelity_pure(qsim::DensityMatrix::mixture(parts), psi);
}

}  // namespace

CriterionResult noncooperation(const Options &options) {
    return timed(7, "non-cooperation fidelity |c0|^4 + |c1|^4", 0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 7));
        auto inputs = test_inputs(rng, std::min(options.random_inputs, 20));
        double worst = 0;
        for (const auto &input : inputs) {
            for (auto w : {protocol::Withheld::A1, protocol::Withheld::B1}) {
                double f = protocol::noncooperation_fidelity(input, w);
                worst = std::max({worst, std::abs(f - input.fourth_moment()), std::abs(f - dephased_fidelity(input))});
            }
        }
        auto balanced = EprInput::from_angles(std::numbers::pi / 4, 0);
        auto skewed = EprInput::make(0.6, 0.8);
        double f_balanced = protocol::noncooperation_fidelity(balanced, protocol::Withheld::A1);
        double f_skewed = protocol::noncooperation_fidelity(skewed, protocol::Withheld::A1);
        ok = worst <= kTol && std::abs(f_balanced - 0.5) <= kTol && std::abs(f_skewed - 0.5392) <= kTol &&
             std::abs(dephased_fidelity(balanced) - 0.5) <= kTol && std::abs(dephased_fidelity(skewed) - 0.5392) <= kTol;
        d << "balanced " << f_balanced << ", (0.6,0.8) " << f_skewed << ", max deviation over " << inputs.size()
          << " inputs " << worst;
    });
}

HistogramSummary summarize_histogram(const std::vector<int> &counts) {
    int trials = 0;
    for (int c : counts) {
        trials += c;
    }
    const double p = 1.0 / 64;
    const double expected = trials * p;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    HistogramSummary s{trials, 0, static_cast<int>(counts.size()) - 1, 0, true};
    for (int c : counts) {
        s.chi_square += (c - expected) * (c - expected) / expected;
        double z = (static_cast<double>(c) / trials - p) / sigma;
        s.max_abs_z = std::max(s.max_abs_z, std::abs(z));
    }
    s.within_4_sigma = s.max_abs_z <= 4.0;
    return s;
}

CriterionResult sampling_consistency(const Options &options) {
    return timed(8, "sampled sessions vs uniform leaves", 0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 8));
        auto alice = random_epr(rng);
        auto bob = random_epr(rng);
        const auto &table = table_of(options);
        std::vector<int> counts(64, 0);
        double worst = 1;
        bool local = true;
        for (int t = 0; t < options.sessions; t++) {
            auto r = parties::run_session(alice, bob, mix_seed(options.seed, static_cast<std::uint64_t>(t)),
                                          parties::Cooperation::Full, table);
            counts[static_cast<std::size_t>(r.leaf.index())]++;
            worst = std::min({worst, r.fidelity_alice_to_bob, r.fidelity_bob_to_alice});
            local = local && parties::ownership_check(r.transcript) && parties::step_order_check(r.transcript);
        }
        auto summary = summarize_histogram(counts);
        bool reproducible = true;
        for (std::uint64_t s : {options.seed, options.seed + 1, std::uint64_t{42}}) {
            auto first = parties::run_session(alice, bob, s, parties::Cooperation::Full, table);
            auto second = parties::run_session(alice, bob, s, parties::Cooperation::Full, table);
            reproducible = reproducible && first.transcript.to_json() == second.transcript.to_json();
        }
        ok = summary.within_4_sigma && reproducible && local && worst >= protocol::kSuccessFidelity;
        d << summary.trials << " sessions, max |z| = " << summary.max_abs_z << ", chi2 = " << summary.chi_square
          << " (" << summary.degrees_of_freedom << " dof), min fidelity " << worst
          << ", transcripts reproducible: " << (reproducible ? "yes" : "no")
          << ", locality: " << (local ? "yes" : "no");
    });
}

CriterionResult engine_properties(const Options &options) {
    return timed(9, "engine property suite", 30.0, [&](bool &ok, std::ostringstream &d) {
        Rng rng(mix_seed(options.seed, 9));
        const auto all_labels = qsim::labels_of({"q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7"});
        auto random_state = [&](std::size_t min_qubits) {
            std::size_t n = min_qubits + static_cast<std::size_t>(rng.uniform() * (7 - min_qubits));
            return random_register(rng, std::vector<qsim::QubitLabel>(all_labels.begin(),
                                                                       all_labels.begin() + static_cast<long>(n)));
        };
        auto pick = [&](const Register &r) {
            return r.labels()[static_cast<std::size_t>(rng.uniform() * static_cast<double>(r.num_qubits()))];
        };
        int involution = 0;
        int born = 0;
        int norm = 0;
        int purity = 0;
        for (int c = 0; c < options.property_cases; c++) {
            Register r = random_state(2);
            auto a = pick(r);
            auto b = pick(r);
            while (b == a) {
                b = pick(r);
            }
            for (auto g : {qsim::Gate1::X, qsim::Gate1::Z, qsim::Gate1::H}) {
                Register once = qsim::apply_gate1(r, a, g);
                if (std::abs(once.norm_squared() - 1) > kTol) {
                    norm++;
                }
                if (!qsim::apply_gate1(once, a, g).same_amplitudes(r, kTol)) {
                    involution++;
                }
            }
            Register cx = qsim::apply_cnot(r, a, b);
            if (std::abs(cx.norm_squared() - 1) > kTol) {
                norm++;
            }
            if (!qsim::apply_cnot(cx, a, b).same_amplitudes(r, kTol)) {
                involution++;
            }
            for (auto basis : {qsim::Basis::Z, qsim::Basis::X}) {
                auto [p0, p1] = qsim::outcome_probabilities(r, a, basis);
                if (std::abs(p0 + p1 - 1) > kTol) {
                    born++;
                }
            }
            Register left = random_state(1);
            std::vector<qsim::QubitLabel> other_labels;
            for (std::size_t k = 0; k < 3; k++) {
                other_labels.emplace_back("r" + std::to_string(k));
            }
            Register product = qsim::tensor(left, random_register(rng, other_labels));
            auto rho = qsim::reduced_density(product, left.labels());
            if (std::abs(rho.purity() - 1) > 1e-10 || !rho.is_valid()) {
                purity++;
            }
        }
        ok = involution == 0 && born == 0 && norm == 0 && purity == 0;
        d << options.property_cases << " cases each; failures: involution " << involution << ", Born " << born
          << ", norm " << norm << ", purity " << purity;
    });
}

std::vector<CriterionResult> run_all(const Options &options) {
    return {
        swap_canonical(options),  swap_all_pairs(options),        step3_uniformity(options),
        collapse_table_content(options), reconstruction(options), tabulated_corrections(options),
        noncooperation(options),  sampling_consistency(options),  engine_properties(options),
    };
}

}  // namespace bqt::verify
