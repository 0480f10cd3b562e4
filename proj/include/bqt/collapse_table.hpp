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
#include <string_view>
#include <vector>

#include "bqt/protocol.hpp"

namespace bqt::protocol {

/// One term s * alpha_i * beta_j |ket> of a tabulated collapsed state.
struct TabulatedTerm {
    int alpha;  // index into (c0, c1) of Alice's input
    int beta;   // index into (c0, c1) of Bob's input
    int sign;   // +1 or -1
    std::string_view ket;
};

struct TabulatedRow {
    Step3Outcomes outcomes;
    std::array<TabulatedTerm, 4> terms;
};

/// Collapsed six-qubit states after the four step-3 measurements, as
/// tabulated by hand. The qubit order behind the ket strings is not the one
/// the table declares (b1, b2, a2, a3, A1, B1); check_collapse_table() recovers
/// the orders under which the rows agree with simulation.
const std::array<TabulatedRow, 16> &tabulated_collapse_rows();

/// Declared order of the tabulated kets.
std::array<QubitLabel, 6> declared_collapse_order();

struct CollapseTableCheck {
    /// Label orders under which every row matches its simulated remainder.
    std::vector<std::array<QubitLabel, 6>> matching_orders;
    /// Per row, how many of the 720 orders match that row alone.
    std::array<int, 16> per_row_matches{};
    /// Whether the declared order matches all rows.
    bool declared_order_matches = false;
};

/// Compares each simulated step-3 remainder with its tabulated row as a set of
/// (coefficient, basis assignment) pairs, for every ordering of the six
/// remaining labels. Orders are enumerated lexicographically over positions
/// in the declared order, so matching_orders is deterministic.
CollapseTableCheck check_collapse_table(const EprInput &alice, const EprInput &bob, double tol = qsim::kTol);

/// Whether `remainder` equals the row under `order`, term by term.
bool row_matches(const TabulatedRow &row, const Register &remainder, const std::array<QubitLabel, 6> &order,
                 const EprInput &alice, const EprInput &bob, double tol = qsim::kTol);

}  // namespace bqt::protocol
