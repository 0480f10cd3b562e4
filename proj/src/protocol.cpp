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

#include "bqt/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "bqt/correction_table.hpp"
#include "bqt/ghz.hpp"

namespace bqt::protocol {

using qsim::Basis;
using qsim::Force;
using qsim::MeasureMode;

EprInput EprInput::make(Amplitude c0, Amplitude c1, double tol) {
    for (double v : {c0.real(), c0.imag(), c1.real(), c1.imag()}) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("EPR input must be finite");
        }
    }
    double norm = std::norm(c0) + std::norm(c1);
    if (std::abs(norm - 1) > tol) {
        throw std::invalid_argument("EPR input must satisfy |c0|^2 + |c1|^2 = 1 (got " + std::to_string(norm) + ")");
    }
    double scale = 1 / std::sqrt(norm);
    return EprInput(c0 * scale, c1 * scale);
}

EprInput EprInput::from_angles(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("angles must be finite");
    }
    return EprInput(std::cos(theta), std::sin(theta) * std::polar(1.0, phi));
}

Register EprInput::on(const QubitLabel &first, const QubitLabel &second) const {
    return qsim::make_register({{"00", c0_}, {"11", c1_}}, {first, second});
}

EprInput EprInput::with_global_phase(double phase) const {
    Amplitude u = std::polar(1.0, phase);
    return EprInput(c0_ * u, c1_ * u);
}

double EprInput::fourth_moment() const {
    double p0 = std::norm(c0_);
    double p1 = std::norm(c1_);
    return p0 * p0 + p1 * p1;
}

std::string sign_code(Sign s) {
    return s == Sign::Plus ? "p" : "m";
}

Sign parse_sign_code(const std::string &code) {
    if (code == "p") {
        return Sign::Plus;
    }
    if (code == "m") {
        return Sign::Minus;
    }
    throw std::invalid_argument("sign code must be \"p\" or \"m\", got \"" + code + "\"");
}

int BranchKey::index() const {
    return (step3.a1 << 5) | (bit(step3.A2) << 4) | (step3.b3 << 3) | (bit(step3.B2) << 2) | (bit(step4.A1) << 1) |
           bit(step4.B1);
}

BranchKey BranchKey::from_index(int index) {
    if (index < 0 || index > 63) {
        throw std::out_of_range("branch index must be in 0..63");
    }
    return BranchKey{
        Step3Outcomes{(index >> 5) & 1, sign_of((index >> 4) & 1), (index >> 3) & 1, sign_of((index >> 2) & 1)},
        Step4Outcomes{sign_of((index >> 1) & 1), sign_of(index & 1)},
    };
}

std::string BranchKey::to_string() const {
    auto pm = [](Sign s) {
        return s == Sign::Plus ? "+" : "-";
    };
    return "a1=" + std::to_string(step3.a1) + " A2=" + pm(step3.A2) + " b3=" + std::to_string(step3.b3) +
           " B2=" + pm(step3.B2) + " A1=" + pm(step4.A1) + " B1=" + pm(step4.B1);
}

std::array<Step3Outcomes, 16> all_step3_outcomes() {
    std::array<Step3Outcomes, 16> result{};
    for (int i = 0; i < 16; i++) {
        result[static_cast<std::size_t>(i)] = BranchKey::from_index(i << 2).step3;
    }
    return result;
}

std::array<Step4Outcomes, 4> all_step4_outcomes() {
    return {Step4Outcomes{Sign::Plus, Sign::Plus}, Step4Outcomes{Sign::Plus, Sign::Minus},
            Step4Outcomes{Sign::Minus, Sign::Plus}, Step4Outcomes{Sign::Minus, Sign::Minus}};
}

Register prepare_channel() {
    ghz::GhzIndex psi0(0);
    return qsim::tensor(ghz::ghz_state(psi0, {q::a1, q::b1, q::b2}), ghz::ghz_state(psi0, {q::a2, q::a3, q::b3}));
}

Register initial_state(const EprInput &alice, const EprInput &bob) {
    return qsim::tensor(qsim::tensor(prepare_channel(), alice.on(q::A1, q::A2)), bob.on(q::B1, q::B2));
}

Register encode(Register full) {
    for (const auto &label : {q::a1, q::b1, q::b2, q::a2, q::a3, q::b3, q::A1, q::A2, q::B1, q::B2}) {
        full.position(label);
    }
    full = qsim::apply_cnot(std::move(full), q::A1, q::a1);
    return qsim::apply_cnot(std::move(full), q::B1, q::b3);
}

Step3Modes Step3Modes::forced(const Step3Outcomes &o) {
    return Step3Modes{Force{o.a1}, Force{bit(o.A2)}, Force{o.b3}, Force{bit(o.B2)}};
}

Step3Modes Step3Modes::sampled(Rng &rng) {
    qsim::Sample s{rng};
    return Step3Modes{s, s, s, s};
}

Step3Result step3_measure(const Register &encoded, const Step3Modes &modes) {
    auto m_a1 = qsim::measure(encoded, q::a1, Basis::Z, modes.a1);
    auto m_A2 = qsim::measure(m_a1.collapsed, q::A2, Basis::X, modes.A2);
    auto m_b3 = qsim::measure(m_A2.collapsed, q::b3, Basis::Z, modes.b3);
    auto m_B2 = qsim::measure(m_b3.collapsed, q::B2, Basis::X, modes.B2);
    return Step3Result{
        Step3Outcomes{m_a1.outcome, sign_of(m_A2.outcome), m_b3.outcome, sign_of(m_B2.outcome)},
        m_a1.probability * m_A2.probability * m_b3.probability * m_B2.probability,
        std::move(m_B2.collapsed),
    };
}

Step4Result step4_measure(const Register &remainder, MeasureMode A1, MeasureMode B1) {
    auto m_A1 = qsim::measure(remainder, q::A1, Basis::X, A1);
    auto m_B1 = qsim::measure(m_A1.collapsed, q::B1, Basis::X, B1);
    return Step4Result{
        Step4Outcomes{sign_of(m_A1.outcome), sign_of(m_B1.outcome)},
        m_A1.probability * m_B1.probability,
        qsim::permute(m_B1.collapsed, {q::b1, q::b2, q::a2, q::a3}),
    };
}

std::string pauli_code(const PauliPair &ops) {
    std::string code;
    for (Pauli p : ops) {
        switch (p) {
            case Pauli::I:
                code += 'I';
                break;
            case Pauli::Z:
                code += 'Z';
                break;
            case Pauli::X:
                code += 'X';
                break;
            case Pauli::XZ:
                code += 'Y';
                break;
        }
    }
    return code;
}

PauliPair parse_pauli_code(const std::string &code) {
    if (code.size() != 2) {
        throw std::invalid_argument("Pauli code must have two letters, got \"" + code + "\"");
    }
    PauliPair ops{};
    for (std::size_t k = 0; k < 2; k++) {
        switch (code[k]) {
            case 'I':
                ops[k] = Pauli::I;
                break;
            case 'Z':
                ops[k] = Pauli::Z;
                break;
            case 'X':
                ops[k] = Pauli::X;
                break;
            case 'Y':
                ops[k] = Pauli::XZ;
                break;
            default:
                throw std::invalid_argument("Pauli code letters must be I, Z, X or Y, got \"" + code + "\"");
        }
    }
    return ops;
}

Register apply_pauli(Register reg, const QubitLabel &label, Pauli op) {
    switch (op) {
        case Pauli::I:
            return qsim::apply_gate1(std::move(reg), label, qsim::Gate1::I);
        case Pauli::Z:
            return qsim::apply_gate1(std::move(reg), label, qsim::Gate1::Z);
        case Pauli::X:
            return qsim::apply_gate1(std::move(reg), label, qsim::Gate1::X);
        case Pauli::XZ:
            reg = qsim::apply_gate1(std::move(reg), label, qsim::Gate1::Z);
            return qsim::apply_gate1(std::move(reg), label, qsim::Gate1::X);
    }
    return reg;
}

Register apply_pauli_pair(Register reg, const QubitLabel &first, const QubitLabel &second, const PauliPair &ops) {
    reg = apply_pauli(std::move(reg), first, ops[0]);
    return apply_pauli(std::move(reg), second, ops[1]);
}

Register correct(Register payload, const CorrectionRule &rule) {
    payload = apply_pauli_pair(std::move(payload), q::b1, q::b2, rule.bob);
    return apply_pauli_pair(std::move(payload), q::a2, q::a3, rule.alice);
}

Register correct(Register payload, const BranchKey &key, const CorrectionTable &table) {
    return correct(std::move(payload), table.rule(key));
}

const std::array<CorrectionRule, 4> &tabulated_rules() {
    using P = Pauli;
    static const std::array<CorrectionRule, 4> rules{{
        {{P::I, P::I}, {P::I, P::I}},  // A1=+, B1=+
        {{P::Z, P::Z}, {P::I, P::Z}},  // A1=+, B1=-
        {{P::I, P::Z}, {P::Z, P::Z}},  // A1=-, B1=+
        {{P::Z, P::I}, {P::Z, P::I}},  // A1=-, B1=-
    }};
    return rules;
}

std::vector<Step3Result> enumerate_step3(const EprInput &alice, const EprInput &bob) {
    Register encoded = encode(initial_state(alice, bob));
    std::vector<Step3Result> results;
    results.reserve(16);
    for (const auto &o : all_step3_outcomes()) {
        results.push_back(step3_measure(encoded, Step3Modes::forced(o)));
    }
    return results;
}

double pair_fidelity(const Register &state, const QubitLabel &first, const QubitLabel &second,
                     const EprInput &target) {
    auto rho = qsim::reduced_density(state, {first, second});
    return qsim::fidelity_pure(rho, target.on(first, second));
}

std::vector<BranchLeaf> enumerate_branches(const EprInput &alice, const EprInput &bob, const CorrectionTable &table) {
    std::vector<BranchLeaf> leaves;
    leaves.reserve(64);
    for (auto &s3 : enumerate_step3(alice, bob)) {
        for (const auto &o4 : all_step4_outcomes()) {
            auto s4 = step4_measure(s3.remainder, Force{bit(o4.A1)}, Force{bit(o4.B1)});
            BranchKey key{s3.outcomes, s4.outcomes};
            const CorrectionRule &rule = table.rule(key);
            Register corrected = correct(s4.payload, rule);
            double f_ab = pair_fidelity(corrected, q::b1, q::b2, alice);
            double f_ba = pair_fidelity(corrected, q::a2, q::a3, bob);
            leaves.push_back(BranchLeaf{key, s3.probability * s4.probability, std::move(s4.payload), rule,
                                        std::move(corrected), f_ab, f_ba});
        }
    }
    return leaves;
}

BranchKey receiver_view(const BranchKey &key, Withheld withheld) {
    BranchKey view = key;
    if (withheld == Withheld::A1) {
        view.step4.A1 = Sign::Plus;
    } else {
        view.step4.B1 = Sign::Plus;
    }
    return view;
}

double noncooperation_fidelity(const EprInput &undelivered, Withheld withheld, const EprInput &other) {
    const EprInput &alice = withheld == Withheld::A1 ? undelivered : other;
    const EprInput &bob = withheld == Withheld::A1 ? other : undelivered;
    const QubitLabel &r0 = withheld == Withheld::A1 ? q::b1 : q::a2;
    const QubitLabel &r1 = withheld == Withheld::A1 ? q::b2 : q::a3;
    const CorrectionTable &table = default_correction_table();
    Register target = undelivered.on(r0, r1);
    std::array<QubitLabel, 2> receiver{r0, r1};

    double weighted = 0;
    double total = 0;
    for (auto &s3 : enumerate_step3(alice, bob)) {
        // The receiver knows its own step-4 bit; only the other one is averaged out.
        for (Sign known : {Sign::Plus, Sign::Minus}) {
            std::vector<std::pair<double, qsim::DensityMatrix>> parts;
            double history_probability = 0;
            for (Sign hidden : {Sign::Plus, Sign::Minus}) {
                Step4Outcomes o4 = withheld == Withheld::A1 ? Step4Outcomes{hidden, known} : Step4Outcomes{known, hidden};
                auto s4 = step4_measure(s3.remainder, Force{bit(o4.A1)}, Force{bit(o4.B1)});
                BranchKey view = receiver_view(BranchKey{s3.outcomes, o4}, withheld);
                Register corrected = correct(s4.payload, table.rule(view));
                parts.emplace_back(s4.probability, qsim::reduced_density(corrected, receiver));
                history_probability += s4.probability;
            }
            for (auto &part : parts) {
                part.first /= history_probability;
            }
            auto rho = qsim::DensityMatrix::mixture(parts);
            double p = s3.probability * history_probability;
            weighted += p * qsim::fidelity_pure(rho, target);
            total += p;
        }
    }
    return weighted / total;
}

bool is_product_across_payload_cut(const Register &payload, double tol) {
    Register aligned = qsim::permute(payload, {q::b1, q::b2, q::a2, q::a3});
    // Row = (b1, b2), column = (a2, a3).
    auto m = [&](std::size_t r, std::size_t c) {
        return aligned.amps()[r * 4 + c];
    };
    for (std::size_t r0 = 0; r0 < 4; r0++) {
        for (std::size_t r1 = r0 + 1; r1 < 4; r1++) {
            for (std::size_t c0 = 0; c0 < 4; c0++) {
                for (std::size_t c1 = c0 + 1; c1 < 4; c1++) {
                    if (std::abs(m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)) > tol) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

}  // namespace bqt::protocol
