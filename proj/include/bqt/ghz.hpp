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

#pragma once

#include <array>
#include <compare>
#include <optional>
#include <vector>

#include "bqt/qsim.hpp"

namespace bqt::ghz {

/// Index into the eight-state GHZ basis.
///
///   0: |000> + |111>    4: |010> + |101>
///   1: |000> - |111>    5: |010> - |101>
///   2: |100> + |011>    6: |110> + |001>
///   3: |100> - |011>    7: |110> - |001>
///
/// all scaled by 1/sqrt(2).
class GhzIndex {
   public:
    explicit GhzIndex(int value);

    int value() const noexcept {
        return value_;
    }

    auto operator<=>(const GhzIndex &) const = default;

    static std::array<GhzIndex, 8> all();

   private:
    int value_;
};

using Triple = std::array<qsim::QubitLabel, 3>;

/// Amplitudes of the i-th basis state over |000>..|111>.
std::array<qsim::Amplitude, 8> ghz_amplitudes(GhzIndex i);

qsim::Register ghz_state(GhzIndex i, const Triple &labels);

/// Born probabilities of the eight GHZ outcomes on `triple`.
std::array<double, 8> ghz_outcome_probabilities(const qsim::Register &reg, const Triple &triple);

struct GhzMeasurement {
    GhzIndex outcome;
    double probability;
    qsim::Register collapsed;  // triple removed
};

/// Projective measurement of `triple` in the GHZ basis. Force{k} selects
/// outcome k in 0..7; Sample consumes one draw.
GhzMeasurement ghz_basis_measure(const qsim::Register &reg, const Triple &triple, qsim::MeasureMode mode);

/// Returns the GHZ basis index that `reg` equals up to global phase, if any.
std::optional<GhzIndex> classify(const qsim::Register &reg, const Triple &labels, double tol = 1e-10);

struct SwapOutcome {
    GhzIndex outcome;
    double probability;
    qsim::Register remainder;  // over qubits (2, 4, 6)
    std::optional<GhzIndex> matched;
};

/// Entanglement swapping between |Psi_i>_{123} and |Psi_j>_{456}: qubits
/// 1, 3, 5 are measured in the GHZ basis and the remainder on 2, 4, 6 is
/// classified. Returns every outcome with nonzero probability, in index order.
std::vector<SwapOutcome> entanglement_swap(GhzIndex i, GhzIndex j);

Triple swap_measured_triple();
Triple swap_remainder_triple();

}  // namespace bqt::ghz
