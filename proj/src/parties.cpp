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

#include "bqt/parties.hpp"

#include <stdexcept>

namespace bqt::parties {

using protocol::BranchKey;
using protocol::Sign;
using qsim::Basis;
using qsim::Register;
namespace q = protocol::q;

std::string_view actor_name(PartyName p) {
    return p == PartyName::Alice ? "alice" : "bob";
}

std::string_view cooperation_code(Cooperation c) {
    switch (c) {
        case Cooperation::Full:
            return "full";
        case Cooperation::AliceWithholdsA1:
            return "withhold-a1";
        case Cooperation::BobWithholdsB1:
            return "withhold-b1";
    }
    return "full";
}

Cooperation parse_cooperation(std::string_view code) {
    if (code == "full") {
        return Cooperation::Full;
    }
    if (code == "withhold-a1") {
        return Cooperation::AliceWithholdsA1;
    }
    if (code == "withhold-b1") {
        return Cooperation::BobWithholdsB1;
    }
    throw std::invalid_argument("cooperation must be full, withhold-a1 or withhold-b1");
}

std::set<QubitLabel> owned_qubits(PartyName p) {
    if (p == PartyName::Alice) {
        return {q::a1, q::a2, q::a3, q::A1, q::A2};
    }
    return {q::b1, q::b2, q::b3, q::B1, q::B2};
}

namespace {

std::string outcome_code(Basis basis, int outcome) {
    if (basis == Basis::Z) {
        return outcome ? "1" : "0";
    }
    return outcome ? "m" : "p";
}

std::optional<PartyName> party_of(std::string_view actor) {
    if (actor == "alice") {
        return PartyName::Alice;
    }
    if (actor == "bob") {
        return PartyName::Bob;
    }
    return std::nullopt;
}

bool owns(PartyName p, const std::string &qubit) {
    return owned_qubits(p).count(QubitLabel(qubit)) == 1;
}

/// Branch key a party can assemble from the results it knows. Missing step-4
/// results of the other party are taken as +.
struct Decision {
    BranchKey key;
    std::vector<Announcement> used;
    std::vector<std::string> assumed_plus;
};

Decision decide(const std::map<std::string, std::string> &known) {
    Decision d{};
    auto z = [&](const char *qubit) -> int {
        auto it = known.find(qubit);
        if (it == known.end()) {
            throw std::logic_error(std::string("step-3 result for ") + qubit + " is unknown");
        }
        d.used.push_back({qubit, "Z", it->second});
        return it->second == "1" ? 1 : 0;
    };
    auto x = [&](const char *qubit, bool optional) -> Sign {
        auto it = known.find(qubit);
        if (it == known.end()) {
            if (!optional) {
                throw std::logic_error(std::string("step-3 result for ") + qubit + " is unknown");
            }
            d.assumed_plus.emplace_back(qubit);
            return Sign::Plus;
        }
        d.used.push_back({qubit, "X", it->second});
        return protocol::parse_sign_code(it->second);
    };
    d.key.step3.a1 = z("a1");
    d.key.step3.A2 = x("A2", false);
    d.key.step3.b3 = z("b3");
    d.key.step3.B2 = x("B2", false);
    d.key.step4.A1 = x("A1", true);
    d.key.step4.B1 = x("B1", true);
    return d;
}

class Session {
   public:
    Session(const EprInput &alice, const EprInput &bob, std::uint64_t seed)
        : rng_(seed),
          alice_{PartyName::Alice, owned_qubits(PartyName::Alice), alice, {}, {}},
          bob_{PartyName::Bob, owned_qubits(PartyName::Bob), bob, {}, {}},
          state_(Register::scalar()) {
    }

    Party &alice() {
        return alice_;
    }
    Party &bob() {
        return bob_;
    }
    Party &other(const Party &p) {
        return p.name == PartyName::Alice ? bob_ : alice_;
    }
    const Register &state() const {
        return state_;
    }
    Transcript take_transcript() {
        return std::move(transcript_);
    }

    void share_channel() {
        state_ = protocol::prepare_channel();
        Event e;
        e.step = 1;
        e.actor = "source";
        e.kind = "share_channel";
        for (const auto &l : state_.labels()) {
            e.qubits.push_back(l.name());
        }
        transcript_.events.push_back(std::move(e));
    }

    void prepare_input(Party &p) {
        const QubitLabel &first = p.name == PartyName::Alice ? q::A1 : q::B1;
        const QubitLabel &second = p.name == PartyName::Alice ? q::A2 : q::B2;
        require_owned(p, first);
        require_owned(p, second);
        state_ = qsim::tensor(state_, p.input.on(first, second));
        Event e;
        e.step = 1;
        e.actor = std::string(actor_name(p.name));
        e.kind = "prepare_input";
        e.qubits = {first.name(), second.name()};
        transcript_.events.push_back(std::move(e));
    }

    void cnot(Party &p, const QubitLabel &control, const QubitLabel &target) {
        require_owned(p, control);
        require_owned(p, target);
        state_ = qsim::apply_cnot(std::move(state_), control, target);
        Event e;
        e.step = 2;
        e.actor = std::string(actor_name(p.name));
        e.kind = "cnot";
        e.qubits = {control.name(), target.name()};
        transcript_.events.push_back(std::move(e));
    }

    int measure(Party &p, const QubitLabel &qubit, Basis basis, int step) {
        require_owned(p, qubit);
        auto m = qsim::measure(state_, qubit, basis, qsim::Sample{rng_});
        state_ = std::move(m.collapsed);
        std::string code = outcome_code(basis, m.outcome);
        p.own_results[qubit.name()] = code;
        Event e;
        e.step = step;
        e.actor = std::string(actor_name(p.name));
        e.kind = "measure";
        e.qubits = {qubit.name()};
        e.basis = basis == Basis::Z ? "Z" : "X";
        e.outcome = code;
        e.probability = m.probability;
        transcript_.events.push_back(std::move(e));
        return m.outcome;
    }

    void announce(Party &p, int round, int step, std::initializer_list<QubitLabel> qubits) {
        Message message{p.name, round, {}};
        for (const auto &qubit : qubits) {
            require_owned(p, qubit);
            auto basis = (qubit == q::a1 || qubit == q::b3) ? "Z" : "X";
            message.payload.push_back({qubit.name(), basis, p.own_results.at(qubit.name())});
        }
        Event e;
        e.step = step;
        e.actor = std::string(actor_name(p.name));
        e.kind = "message";
        for (const auto &a : message.payload) {
            e.qubits.push_back(a.qubit);
        }
        e.message_round = round;
        e.payload = message.payload;
        transcript_.events.push_back(std::move(e));
        other(p).received.push_back(std::move(message));
    }

    void correct(Party &p, const protocol::CorrectionTable &table) {
        std::map<std::string, std::string> known = p.own_results;
        for (const auto &message : p.received) {
            for (const auto &a : message.payload) {
                known[a.qubit] = a.outcome;
            }
        }
        Decision d = decide(known);
        const auto &rule = table.rule(d.key);
        const bool is_bob = p.name == PartyName::Bob;
        const QubitLabel &first = is_bob ? q::b1 : q::a2;
        const QubitLabel &second = is_bob ? q::b2 : q::a3;
        require_owned(p, first);
        require_owned(p, second);
        const auto &ops = is_bob ? rule.bob : rule.alice;
        state_ = protocol::apply_pauli_pair(std::move(state_), first, second, ops);
        Event e;
        e.step = 5;
        e.actor = std::string(actor_name(p.name));
        e.kind = "correct";
        e.qubits = {first.name(), second.name()};
        e.ops = protocol::pauli_code(ops);
        e.depends_on = std::move(d.used);
        e.assumed_plus = std::move(d.assumed_plus);
        transcript_.events.push_back(std::move(e));
    }

    double record_fidelity(Party &receiver, const EprInput &intended, std::optional<double> expected) {
        const bool is_bob = receiver.name == PartyName::Bob;
        const QubitLabel &first = is_bob ? q::b1 : q::a2;
        const QubitLabel &second = is_bob ? q::b2 : q::a3;
        double f = protocol::pair_fidelity(state_, first, second, intended);
        Event e;
        e.step = 6;
        e.actor = std::string(actor_name(receiver.name));
        e.kind = "fidelity";
        e.qubits = {first.name(), second.name()};
        e.value = f;
        e.expected = expected;
        transcript_.events.push_back(std::move(e));
        return f;
    }

   private:
    static void require_owned(const Party &p, const QubitLabel &qubit) {
        if (!p.owns(qubit)) {
            throw std::logic_error(std::string(actor_name(p.name)) + " cannot act on " + qubit.name());
        }
    }

    Rng rng_;
    Party alice_;
    Party bob_;
    Register state_;
    Transcript transcript_;
};

}  // namespace

SessionResult run_session(const EprInput &alice_input, const EprInput &bob_input, std::uint64_t seed,
                          Cooperation cooperation, const protocol::CorrectionTable &table) {
    Session s(alice_input, bob_input, seed);
    Party &alice = s.alice();
    Party &bob = s.bob();

    s.share_channel();
    s.prepare_input(alice);
    s.prepare_input(bob);

    s.cnot(alice, q::A1, q::a1);
    s.cnot(bob, q::B1, q::b3);

    int a1 = s.measure(alice, q::a1, Basis::Z, 3);
    int A2 = s.measure(alice, q::A2, Basis::X, 3);
    int b3 = s.measure(bob, q::b3, Basis::Z, 3);
    int B2 = s.measure(bob, q::B2, Basis::X, 3);
    s.announce(alice, 1, 3, {q::a1, q::A2});
    s.announce(bob, 1, 3, {q::b3, q::B2});

    int A1 = s.measure(alice, q::A1, Basis::X, 4);
    int B1 = s.measure(bob, q::B1, Basis::X, 4);
    if (cooperation != Cooperation::AliceWithholdsA1) {
        s.announce(alice, 2, 4, {q::A1});
    }
    if (cooperation != Cooperation::BobWithholdsB1) {
        s.announce(bob, 2, 4, {q::B1});
    }

    s.correct(bob, table);
    s.correct(alice, table);

    std::optional<double> bob_expected;
    std::optional<double> alice_expected;
    if (cooperation == Cooperation::AliceWithholdsA1) {
        bob_expected = protocol::noncooperation_fidelity(alice_input, protocol::Withheld::A1, bob_input);
    } else if (cooperation == Cooperation::BobWithholdsB1) {
        alice_expected = protocol::noncooperation_fidelity(bob_input, protocol::Withheld::B1, alice_input);
    }
    double f_ab = s.record_fidelity(bob, alice_input, bob_expected);
    double f_ba = s.record_fidelity(alice, bob_input, alice_expected);

    BranchKey leaf{
        protocol::Step3Outcomes{a1, protocol::sign_of(A2), b3, protocol::sign_of(B2)},
        protocol::Step4Outcomes{protocol::sign_of(A1), protocol::sign_of(B1)},
    };
    return SessionResult{s.take_transcript(), leaf, f_ab, f_ba, bob_expected ? bob_expected : alice_expected};
}

bool ownership_check(const Transcript &transcript) {
    std::map<PartyName, std::map<std::string, std::string>> measured;
    std::map<PartyName, std::map<std::string, std::string>> heard;
    std::map<PartyName, int> last_round;
    for (const auto &e : transcript.events) {
        if (e.actor == "source") {
            if (e.kind != "share_channel" || e.step != 1) {
                return false;
            }
            continue;
        }
        auto actor = party_of(e.actor);
        if (!actor) {
            return false;
        }
        for (const auto &qubit : e.qubits) {
            if (!owns(*actor, qubit)) {
                return false;
            }
        }
        PartyName peer = *actor == PartyName::Alice ? PartyName::Bob : PartyName::Alice;
        if (e.kind == "measure") {
            if (e.qubits.size() != 1 || !e.outcome) {
                return false;
            }
            measured[*actor][e.qubits[0]] = *e.outcome;
        } else if (e.kind == "message") {
            if (!e.message_round) {
                return false;
            }
            auto it = last_round.find(*actor);
            if (it != last_round.end() && *e.message_round <= it->second) {
                return false;
            }
            last_round[*actor] = *e.message_round;
            for (const auto &a : e.payload) {
                auto own = measured[*actor].find(a.qubit);
                if (!owns(*actor, a.qubit) || own == measured[*actor].end() || own->second != a.outcome) {
                    return false;
                }
                heard[peer][a.qubit] = a.outcome;
            }
        } else if (e.kind == "correct") {
            for (const auto &a : e.depends_on) {
                const auto &source = owns(*actor, a.qubit) ? measured[*actor] : heard[*actor];
                auto it = source.find(a.qubit);
                if (it == source.end() || it->second != a.outcome) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool step_order_check(const Transcript &transcript) {
    auto phase = [](const Event &e) -> int {
        if (e.kind == "message") {
            return e.step == 3 ? 4 : e.step == 4 ? 6 : -1;
        }
        switch (e.step) {
            case 1:
            case 2:
            case 3:
                return e.step;
            case 4:
                return 5;
            case 5:
                return 7;
            case 6:
                return 8;
            default:
                return -1;
        }
    };
    int last = 0;
    for (const auto &e : transcript.events) {
        int p = phase(e);
        if (p < 0 || p < last) {
            return false;
        }
        last = p;
    }
    return true;
}

std::optional<protocol::PauliPair> replay_correction(const Transcript &transcript, PartyName party,
                                                     const protocol::CorrectionTable &table) {
    std::map<std::string, std::string> known;
    std::string me(actor_name(party));
    bool corrected = false;
    for (const auto &e : transcript.events) {
        if (e.kind == "measure" && e.actor == me && e.outcome) {
            known[e.qubits.at(0)] = *e.outcome;
        } else if (e.kind == "message" && e.actor != me) {
            for (const auto &a : e.payload) {
                known[a.qubit] = a.outcome;
            }
        } else if (e.kind == "correct" && e.actor == me) {
            corrected = true;
            break;
        }
    }
    if (!corrected) {
        return std::nullopt;
    }
    const auto &rule = table.rule(decide(known).key);
    return party == PartyName::Bob ? rule.bob : rule.alice;
}

std::map<std::string, int> event_counts(const Transcript &transcript) {
    std::map<std::string, int> counts;
    for (const auto &e : transcript.events) {
        counts[e.kind]++;
        if (e.kind == "message") {
            counts["message:" + e.actor]++;
        }
    }
    return counts;
}

}  // namespace bqt::parties
