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

// Bidirectional teleportation of two-qubit states a0|00> + a1|11> over a
// channel made of two GHZ triples.
//
// Qubit roles:
//   channel  (a1, b1, b2) and (a2, a3, b3), each in |000> + |111>
//   Alice    owns a1, a2, a3 and her payload pair A1, A2
//   Bob      owns b1, b2, b3 and his payload pair B1, B2
//
// Alice's payload ends up on Bob's (b1, b2); Bob's ends up on Alice's (a2, a3).

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bqt/qsim.hpp"

namespace bqt::protocol {

using qsim::Amplitude;
using qsim::QubitLabel;
using qsim::Register;

namespace q {
inline const QubitLabel a1{"a1"};
inline const QubitLabel a2{"a2"};
inline const QubitLabel a3{"a3"};
inline const QubitLabel b1{"b1"};
inline const QubitLabel b2{"b2"};
inline const QubitLabel b3{"b3"};
inline const QubitLabel A1{"A1"};
inline const QubitLabel A2{"A2"};
inline const QubitLabel B1{"B1"};
inline const QubitLabel B2{"B2"};
}  // namespace q

/// Reconstruction counts as successful at or above this fidelity.
inline constexpr double kSuccessFidelity = 1 - 1e-10;

/// A payload state c0|00> + c1|11>.
class EprInput {
   public:
    /// Requires |c0|^2 + |c1|^2 = 1 within `tol`; the stored pair is rescaled
    /// to unit norm. Throws std::invalid_argument otherwise.
    static EprInput make(Amplitude c0, Amplitude c1, double tol = qsim::kTol);
    /// c0 = cos(theta), c1 = e^{i phi} sin(theta).
    static EprInput from_angles(double theta, double phi);

    Amplitude c0() const noexcept {
        return c0_;
    }
    Amplitude c1() const noexcept {
        return c1_;
    }

    Register on(const QubitLabel &first, const QubitLabel &second) const;
    EprInput with_global_phase(double phase) const;

    /// |c0|^4 + |c1|^4.
    double fourth_moment() const;

   private:
    EprInput(Amplitude c0, Amplitude c1) : c0_(c0), c1_(c1) {
    }
    Amplitude c0_;
    Amplitude c1_;
};

enum class Sign { Plus = 0, Minus = 1 };

inline int bit(Sign s) {
    return static_cast<int>(s);
}
inline Sign sign_of(int b) {
    return b ? Sign::Minus : Sign::Plus;
}
/// "p" or "m".
std::string sign_code(Sign s);
Sign parse_sign_code(const std::string &code);

struct Step3Outcomes {
    int a1;   // Z
    Sign A2;  // X
    int b3;   // Z
    Sign B2;  // X

    bool operator==(const Step3Outcomes &) const = default;
};

struct Step4Outcomes {
    Sign A1;
    Sign B1;

    bool operator==(const Step4Outcomes &) const = default;
};

/// Full assignment of the six measurement results. index() packs
/// (a1, A2, b3, B2, A1, B1) most-significant-first into 0..63.
struct BranchKey {
    Step3Outcomes step3;
    Step4Outcomes step4;

    int index() const;
    static BranchKey from_index(int index);
    std::string to_string() const;

    bool operator==(const BranchKey &) const = default;
};

std::array<Step3Outcomes, 16> all_step3_outcomes();
std::array<Step4Outcomes, 4> all_step4_outcomes();

/// Channel over (a1, b1, b2, a2, a3, b3).
Register prepare_channel();

/// Channel (x) Alice's payload on (A1, A2) (x) Bob's payload on (B1, B2).
Register initial_state(const EprInput &alice, const EprInput &bob);

/// CNOT(A1 -> a1) then CNOT(B1 -> b3).
Register encode(Register full);

struct Step3Modes {
    qsim::MeasureMode a1;
    qsim::MeasureMode A2;
    qsim::MeasureMode b3;
    qsim::MeasureMode B2;

    static Step3Modes forced(const Step3Outcomes &outcomes);
    static Step3Modes sampled(Rng &rng);
};

struct Step3Result {
    Step3Outcomes outcomes;
    double probability;  // joint
    Register remainder;  // (b1, b2, a2, a3, A1, B1)
};

/// Measures a1 (Z), A2 (X), b3 (Z), B2 (X) in that order.
Step3Result step3_measure(const Register &encoded, const Step3Modes &modes);

struct Step4Result {
    Step4Outcomes outcomes;
    double probability;  // joint, conditional on step 3
    Register payload;    // (b1, b2, a2, a3)
};

/// X measurements of A1 then B1.
Step4Result step4_measure(const Register &remainder, qsim::MeasureMode A1, qsim::MeasureMode B1);

/// Single-qubit correction. XZ is the matrix product X*Z (Z acts first).
enum class Pauli { I, Z, X, XZ };
using PauliPair = std::array<Pauli, 2>;

/// Two-character encoding, one letter per qubit from {I, Z, X, Y}; Y stands
/// for the XZ product, which equals the Pauli Y up to a global phase.
std::string pauli_code(const PauliPair &ops);
PauliPair parse_pauli_code(const std::string &code);

Register apply_pauli(Register reg, const QubitLabel &q, Pauli op);
Register apply_pauli_pair(Register reg, const QubitLabel &first, const QubitLabel &second, const PauliPair &ops);

struct CorrectionRule {
    PauliPair bob;    // on (b1, b2)
    PauliPair alice;  // on (a2, a3)

    bool operator==(const CorrectionRule &) const = default;
};

class CorrectionTable;

/// Bob's ops on (b1, b2) and Alice's on (a2, a3), looked up for `key`.
Register correct(Register payload, const BranchKey &key, const CorrectionTable &table);
Register correct(Register payload, const CorrectionRule &rule);

/// Rules keyed by the step-4 outcomes (A1, B1), valid for the branch where
/// every step-3 result is 0 or +. Index is 2*bit(A1) + bit(B1).
const std::array<CorrectionRule, 4> &tabulated_rules();

struct BranchLeaf {
    BranchKey key;
    double probability;
    Register payload;  // before correction, (b1, b2, a2, a3)
    CorrectionRule rule;
    Register corrected;
    double fidelity_alice_to_bob;  // Bob's (b1, b2) vs Alice's input
    double fidelity_bob_to_alice;  // Alice's (a2, a3) vs Bob's input
};

std::vector<Step3Result> enumerate_step3(const EprInput &alice, const EprInput &bob);

/// All 64 measurement branches with exact probabilities, corrected with `table`.
std::vector<BranchLeaf> enumerate_branches(const EprInput &alice, const EprInput &bob, const CorrectionTable &table);

/// Fidelity of the payload pair `on` after correction against `target`.
double pair_fidelity(const Register &state, const QubitLabel &first, const QubitLabel &second,
                     const EprInput &target);

enum class Withheld { A1, B1 };

/// The withheld outcome is replaced by + when the deprived receiver looks up
/// its correction, so the withheld-bit-dependent part of the correction is the
/// identity.
BranchKey receiver_view(const BranchKey &key, Withheld withheld);

/// Expected fidelity of the deprived receiver when one step-4 announcement is
/// withheld. `undelivered` is the state the receiver should have obtained (
/// Alice's for Withheld::A1, Bob's for Withheld::B1); `other` is the opposite
/// payload, which does not affect the result. For each announced history the
/// receiver's state is averaged over the withheld bit as a density matrix, and
/// the resulting fidelities are averaged with their Born weights.
double noncooperation_fidelity(const EprInput &undelivered, Withheld withheld,
                               const EprInput &other = EprInput::from_angles(0.3, 0.7));

/// Whether a 4-qubit payload over (b1, b2, a2, a3) is a product across the
/// (b1, b2) | (a2, a3) cut: all 2x2 minors of its 4x4 coefficient matrix vanish.
bool is_product_across_payload_cut(const Register &payload, double tol = 1e-10);

}  // namespace bqt::protocol
