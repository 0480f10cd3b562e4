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

#include "bqt/correction_table.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace bqt::protocol {

using json = nlohmann::ordered_json;

namespace {

int cost(Pauli p) {
    switch (p) {
        case Pauli::I:
            return 0;
        case Pauli::Z:
            return 1;
        case Pauli::X:
            return 2;
        case Pauli::XZ:
            return 3;
    }
    return 0;
}

json rule_record(const BranchKey &key, const CorrectionRule &rule) {
    json record = json::object();
    record["a1"] = key.step3.a1;
    record["A2"] = sign_code(key.step3.A2);
    record["b3"] = key.step3.b3;
    record["B2"] = sign_code(key.step3.B2);
    record["A1"] = sign_code(key.step4.A1);
    record["B1"] = sign_code(key.step4.B1);
    record["bob_ops"] = pauli_code(rule.bob);
    record["alice_ops"] = pauli_code(rule.alice);
    return record;
}

int z_bit(const json &record, const char *field) {
    const auto &v = record.at(field);
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) {
        throw TableFormatError(std::string("field \"") + field + "\" must be 0 or 1");
    }
    return v.get<int>();
}

Sign x_sign(const json &record, const char *field) {
    const auto &v = record.at(field);
    if (!v.is_string()) {
        throw TableFormatError(std::string("field \"") + field + "\" must be \"p\" or \"m\"");
    }
    try {
        return parse_sign_code(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw TableFormatError(e.what());
    }
}

PauliPair ops(const json &record, const char *field) {
    const auto &v = record.at(field);
    if (!v.is_string()) {
        throw TableFormatError(std::string("field \"") + field + "\" must be a string");
    }
    try {
        return parse_pauli_code(v.get<std::string>());
    } catch (const std::invalid_argument &e) {
        throw TableFormatError(e.what());
    }
}

}  // namespace

std::string CorrectionTable::to_json() const {
    json records = json::array();
    for (int i = 0; i < 64; i++) {
        auto key = BranchKey::from_index(i);
        records.push_back(rule_record(key, rule(key)));
    }
    return records.dump(2) + "\n";
}

CorrectionTable CorrectionTable::from_json(std::string_view text) {
    json records;
    try {
        records = json::parse(text);
    } catch (const json::parse_error &e) {
        throw TableFormatError(std::string("correction table is not valid JSON: ") + e.what());
    }
    if (!records.is_array() || records.size() != 64) {
        throw TableFormatError("correction table must be an array of 64 records");
    }
    CorrectionTable table;
    std::set<int> seen;
    for (const auto &record : records) {
        if (!record.is_object()) {
            throw TableFormatError("correction table records must be objects");
        }
        try {
            BranchKey key{
                Step3Outcomes{z_bit(record, "a1"), x_sign(record, "A2"), z_bit(record, "b3"), x_sign(record, "B2")},
                Step4Outcomes{x_sign(record, "A1"), x_sign(record, "B1")},
            };
            if (!seen.insert(key.index()).second) {
                throw TableFormatError("duplicate record for branch " + key.to_string());
            }
            table.set(key, CorrectionRule{ops(record, "bob_ops"), ops(record, "alice_ops")});
        } catch (const json::out_of_range &e) {
            throw TableFormatError(std::string("correction table record is missing a field: ") + e.what());
        }
    }
    return table;
}

CorrectionTable CorrectionTable::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw TableFormatError("cannot open correction table " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

void CorrectionTable::save(const std::filesystem::path &path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write correction table " + path.string());
    }
    out << to_json();
}

std::array<PauliPair, 16> correction_search_order() {
    std::array<PauliPair, 16> candidates{};
    std::size_t k = 0;
    for (Pauli first : {Pauli::I, Pauli::Z, Pauli::X, Pauli::XZ}) {
        for (Pauli second : {Pauli::I, Pauli::Z, Pauli::X, Pauli::XZ}) {
            candidates[k++] = {first, second};
        }
    }
    auto rank = [](const PauliPair &p) {
        int nontrivial = (p[0] != Pauli::I) + (p[1] != Pauli::I);
        return std::make_tuple(nontrivial, cost(p[0]) + cost(p[1]), cost(p[1]));
    };
    std::stable_sort(candidates.begin(), candidates.end(), [&](const PauliPair &a, const PauliPair &b) {
        return rank(a) < rank(b);
    });
    return candidates;
}

CorrectionTable generate_correction_table() {
    // Generic complex probes: unequal moduli and nontrivial relative phases, so
    // that no wrong correction can pass by accident.
    const std::array<std::pair<EprInput, EprInput>, 2> probes{{
        {EprInput::from_angles(0.41, 1.13), EprInput::from_angles(1.07, -2.29)},
        {EprInput::from_angles(1.23, 0.37), EprInput::from_angles(0.19, 2.71)},
    }};
    const auto order = correction_search_order();

    CorrectionTable table;
    for (int i = 0; i < 64; i++) {
        auto key = BranchKey::from_index(i);
        std::vector<Register> payloads;
        for (const auto &[alice, bob] : probes) {
            Register encoded = encode(initial_state(alice, bob));
            auto s3 = step3_measure(encoded, Step3Modes::forced(key.step3));
            auto s4 = step4_measure(s3.remainder, qsim::Force{bit(key.step4.A1)}, qsim::Force{bit(key.step4.B1)});
            payloads.push_back(std::move(s4.payload));
        }
        auto search = [&](const QubitLabel &first, const QubitLabel &second, bool alice_payload) -> PauliPair {
            for (const auto &candidate : order) {
                bool ok = true;
                for (std::size_t p = 0; p < probes.size() && ok; p++) {
                    const EprInput &target = alice_payload ? probes[p].first : probes[p].second;
                    Register fixed = apply_pauli_pair(payloads[p], first, second, candidate);
                    ok = pair_fidelity(fixed, first, second, target) >= kSuccessFidelity;
                }
                if (ok) {
                    return candidate;
                }
            }
            throw std::logic_error("no Pauli correction restores branch " + key.to_string());
        };
        table.set(key, CorrectionRule{search(q::b1, q::b2, true), search(q::a2, q::a3, false)});
    }
    return table;
}

const CorrectionTable &default_correction_table() {
    static const CorrectionTable table = generate_correction_table();
    return table;
}

}  // namespace bqt::protocol
