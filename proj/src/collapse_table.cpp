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

#include "bqt/collapse_table.hpp"

#include <algorithm>
#include <numeric>

namespace bqt::protocol {

namespace {

constexpr Sign P = Sign::Plus;
constexpr Sign M = Sign::Minus;

}  // namespace

const std::array<TabulatedRow, 16> &tabulated_collapse_rows() {
    // clang-format off
    static const std::array<TabulatedRow, 16> rows{{
        {{0, P, 0, P}, {{{0, 0, +1, "000000"}, {0, 1, +1, "010011"}, {1, 0, +1, "101100"}, {1, 1, +1, "111111"}}}},
        {{0, P, 0, M}, {{{0, 0, +1, "000000"}, {0, 1, -1, "010011"}, {1, 0, +1, "101100"}, {1, 1, -1, "111111"}}}},
        {{0, M, 0, P}, {{{0, 0, +1, "000000"}, {0, 1, +1, "010011"}, {1, 0, -1, "101100"}, {1, 1, -1, "111111"}}}},
        {{0, M, 0, M}, {{{0, 0, +1, "000000"}, {0, 1, -1, "010011"}, {1, 0, -1, "101100"}, {1, 1, +1, "111111"}}}},
        {{0, P, 1, P}, {{{0, 0, +1, "000011"}, {0, 1, +1, "010000"}, {1, 0, +1, "101111"}, {1, 1, +1, "111100"}}}},
        {{0, P, 1, M}, {{{0, 0, +1, "000011"}, {0, 1, -1, "010000"}, {1, 0, +1, "101111"}, {1, 1, -1, "111100"}}}},
        {{0, M, 1, P}, {{{0, 0, +1, "000011"}, {0, 1, +1, "010000"}, {1, 0, -1, "101111"}, {1, 1, -1, "111100"}}}},
        {{0, M, 1, M}, {{{0, 0, +1, "000011"}, {0, 1, -1, "010000"}, {1, 0, -1, "101111"}, {1, 1, +1, "111100"}}}},
        {{1, P, 0, P}, {{{0, 0, +1, "001100"}, {0, 1, +1, "011111"}, {1, 0, +1, "100000"}, {1, 1, +1, "110011"}}}},
        {{1, P, 0, M}, {{{0, 0, +1, "001100"}, {0, 1, -1, "011111"}, {1, 0, +1, "100000"}, {1, 1, -1, "110011"}}}},
        {{1, M, 0, P}, {{{0, 0, +1, "001100"}, {0, 1, +1, "011111"}, {1, 0, -1, "100000"}, {1, 1, -1, "110011"}}}},
        {{1, M, 0, M}, {{{0, 0, +1, "001100"}, {0, 1, -1, "011111"}, {1, 0, -1, "100000"}, {1, 1, +1, "110011"}}}},
        {{1, P, 1, P}, {{{0, 0, +1, "001111"}, {0, 1, +1, "011100"}, {1, 0, +1, "100011"}, {1, 1, +1, "110000"}}}},
        {{1, P, 1, M}, {{{0, 0, +1, "001111"}, {0, 1, -1, "011100"}, {1, 0, +1, "100011"}, {1, 1, -1, "110000"}}}},
        {{1, M, 1, P}, {{{0, 0, +1, "001111"}, {0, 1, +1, "011100"}, {1, 0, -1, "100011"}, {1, 1, -1, "110000"}}}},
        {{1, M, 1, M}, {{{0, 0, +1, "001111"}, {0, 1, -1, "011100"}, {1, 0, -1, "100011"}, {1, 1, +1, "110000"}}}},
    }};
    // clang-format on
    return rows;
}

std::array<QubitLabel, 6> declared_collapse_order() {
    return {q::b1, q::b2, q::a2, q::a3, q::A1, q::B1};
}

bool row_matches(const TabulatedRow &row, const Register &remainder, const std::array<QubitLabel, 6> &order,
                 const EprInput &alice, const EprInput &bob, double tol) {
    Register aligned = qsim::permute(remainder, order);
    std::vector<Amplitude> expected(aligned.dim());
    const std::array<Amplitude, 2> a{alice.c0(), alice.c1()};
    const std::array<Amplitude, 2> b{bob.c0(), bob.c1()};
    for (const auto &term : row.terms) {
        std::size_t index = 0;
        for (char c : term.ket) {
            index = (index << 1) | static_cast<std::size_t>(c == '1');
        }
        expected[index] += static_cast<double>(term.sign) * a[static_cast<std::size_t>(term.alpha)] *
                           b[static_cast<std::size_t>(term.beta)];
    }
    for (std::size_t i = 0; i < expected.size(); i++) {
        if (std::abs(aligned.amps()[i] - expected[i]) > tol) {
            return false;
        }
    }
    return true;
}

CollapseTableCheck check_collapse_table(const EprInput &alice, const EprInput &bob, double tol) {
    const auto declared = declared_collapse_order();
    const auto &rows = tabulated_collapse_rows();
    std::vector<Register> remainders;
    remainders.reserve(rows.size());
    Register encoded = encode(initial_state(alice, bob));
    for (const auto &row : rows) {
        remainders.push_back(step3_measure(encoded, Step3Modes::forced(row.outcomes)).remainder);
    }

    CollapseTableCheck check;
    std::array<int, 6> perm{};
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::array<QubitLabel, 6> order = declared;
        for (std::size_t k = 0; k < 6; k++) {
            order[k] = declared[static_cast<std::size_t>(perm[k])];
        }
        bool all = true;
        for (std::size_t r = 0; r < rows.size(); r++) {
            if (row_matches(rows[r], remainders[r], order, alice, bob, tol)) {
                check.per_row_matches[r]++;
            } else {
                all = false;
            }
        }
        if (all) {
            if (order == declared) {
                check.declared_order_matches = true;
            }
            check.matching_orders.push_back(order);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return check;
}

}  // namespace bqt::protocol
