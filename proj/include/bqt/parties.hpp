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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bqt/correction_table.hpp"
#include "bqt/protocol.hpp"
#include "bqt/qsim.hpp"

namespace bqt::parties {

using protocol::EprInput;
using qsim::QubitLabel;

enum class PartyName { Alice, Bob };

std::string_view actor_name(PartyName p);

enum class Cooperation { Full, AliceWithholdsA1, BobWithholdsB1 };

std::string_view cooperation_code(Cooperation c);  // "full", "withhold-a1", "withhold-b1"
Cooperation parse_cooperation(std::string_view code);

/// One announced measurement result. Outcome codes: "0"/"1" for Z, "p"/"m" for X.
struct Announcement {
    std::string qubit;
    std::string basis;
    std::string outcome;

    bool operator==(const Announcement &) const = default;
};

struct Message {
    PartyName sender;
    int round;
    std::vector<Announcement> payload;
};

std::set<QubitLabel> owned_qubits(PartyName p);

/// A logical protocol participant. Physical state is global; a party can only
/// touch qubits in `owned`.
struct Party {
    PartyName name;
    std::set<QubitLabel> owned;
    EprInput input;
    std::vector<Message> received;
    std::map<std::string, std::string> own_results;  // qubit -> outcome code

    bool owns(const QubitLabel &q) const {
        return owned.count(q) == 1;
    }
};

/// Transcript event. Optional fields are serialized as null when absent.
///
/// kind is one of: share_channel, prepare_input, cnot, measure, message,
/// correct, fidelity. Steps: 1 setup, 2 encoding, 3 first measurements and
/// their announcement (round 1), 4 second measurements and announcement
/// (round 2), 5 corrections, 6 final fidelities.
struct Event {
    int step = 0;
    std::string actor;  // "alice", "bob" or "source"
    std::string kind;
    std::vector<std::string> qubits;
    std::optional<std::string> basis;
    std::optional<std::string> outcome;
    std::optional<double> probability;
    std::optional<int> message_round;
    std::vector<Announcement> payload;     // message: announced results
    std::optional<std::string> ops;        // correct: Pauli code on `qubits`
    std::vector<Announcement> depends_on;  // correct: results used for the lookup
    std::vector<std::string> assumed_plus; // correct: unannounced results taken as +
    std::optional<double> value;           // fidelity: realized value
    std::optional<double> expected;        // fidelity: expected value when deprived

    bool operator==(const Event &) const = default;
};

struct Transcript {
    static constexpr int kSchemaVersion = 1;
    std::vector<Event> events;

    std::string to_json() const;
    static Transcript from_json(std::string_view text);

    bool operator==(const Transcript &) const = default;
};

struct SessionResult {
    Transcript transcript;
    protocol::BranchKey leaf;
    double fidelity_alice_to_bob;  // realized, Bob's (b1, b2) vs Alice's input
    double fidelity_bob_to_alice;  // realized, Alice's (a2, a3) vs Bob's input
    /// Expected fidelity of the deprived receiver under withholding.
    std::optional<double> expected_deprived_fidelity;
};

/// Samples one protocol run. Measurements consume one draw each from an Rng
/// seeded with `seed`, in the order a1, A2, b3, B2, A1, B1.
SessionResult run_session(const EprInput &alice, const EprInput &bob, std::uint64_t seed, Cooperation cooperation,
                          const protocol::CorrectionTable &table = protocol::default_correction_table());

/// True iff no party acts on a foreign qubit, messages only announce the
/// sender's own results (with strictly increasing rounds), and every
/// correction depends only on the actor's own results and results announced
/// to it earlier.
bool ownership_check(const Transcript &transcript);

/// True iff events follow setup < encode < measure < announce < measure <
/// announce < correct < fidelity.
bool step_order_check(const Transcript &transcript);

/// Recomputes the correction a party applied from nothing but its own
/// measurement events and the messages it received.
std::optional<protocol::PauliPair> replay_correction(const Transcript &transcript, PartyName party,
                                                     const protocol::CorrectionTable &table);

/// Counts of event kinds, for structural checks.
std::map<std::string, int> event_counts(const Transcript &transcript);

}  // namespace bqt::parties
