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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bqt/protocol.hpp"

namespace bqt::protocol {

struct TableFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pauli corrections for all 64 measurement branches.
///
/// Serialized as a JSON array of 64 records ordered by BranchKey::index():
///
///   {"a1": 0, "A2": "p", "b3": 0, "B2": "p", "A1": "p", "B1": "m",
///    "bob_ops": "II", "alice_ops": "IZ"}
///
/// a1 and b3 are the Z results (0 or 1); A2, B2, A1, B1 are X results with
/// "p" for + and "m" for -; op strings use pauli_code().
class CorrectionTable {
   public:
    CorrectionTable() = default;
    explicit CorrectionTable(std::array<CorrectionRule, 64> rules) : rules_(rules) {
    }

    const CorrectionRule &rule(const BranchKey &key) const {
        return rules_[static_cast<std::size_t>(key.index())];
    }
    void set(const BranchKey &key, const CorrectionRule &rule) {
        rules_[static_cast<std::size_t>(key.index())] = rule;
    }
    const std::array<CorrectionRule, 64> &rules() const noexcept {
        return rules_;
    }

    std::string to_json() const;
    /// Throws TableFormatError on schema violations (wrong count, missing or
    /// duplicated keys, bad codes).
    static CorrectionTable from_json(std::string_view text);

    static CorrectionTable load(const std::filesystem::path &path);
    void save(const std::filesystem::path &path) const;

    bool operator==(const CorrectionTable &) const = default;

   private:
    std::array<CorrectionRule, 64> rules_{};
};

/// Searches, for every branch and each side independently, the 16 per-qubit
/// products of {I, Z, X, XZ} for the cheapest string that restores the
/// payload. Candidates are ranked by number of non-identity factors, then by
/// total cost with I < Z < X < XZ, then by putting the costlier factor on the
/// first qubit of the pair. Success is checked on fixed generic complex
/// probe inputs.
CorrectionTable generate_correction_table();

/// Shared instance of generate_correction_table().
const CorrectionTable &default_correction_table();

/// Candidate pairs in search order.
std::array<PauliPair, 16> correction_search_order();

}  // namespace bqt::protocol
