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

#include "bqt/json_io.hpp"
#include "bqt/parties.hpp"

namespace bqt::parties {

using nlohmann::ordered_json;

namespace {

template <typename T>
ordered_json optional_field(const std::optional<T> &v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> read_optional(const ordered_json &j, const char *field) {
    if (!j.contains(field) || j.at(field).is_null()) {
        return std::nullopt;
    }
    return j.at(field).get<T>();
}

ordered_json announcements(const std::vector<Announcement> &list) {
    ordered_json out = ordered_json::array();
    for (const auto &a : list) {
        out.push_back(ordered_json{{"qubit", a.qubit}, {"basis", a.basis}, {"outcome", a.outcome}});
    }
    return out;
}

std::vector<Announcement> read_announcements(const ordered_json &j, const char *field) {
    std::vector<Announcement> out;
    if (!j.contains(field)) {
        return out;
    }
    for (const auto &a : j.at(field)) {
        out.push_back({a.at("qubit").get<std::string>(), a.at("basis").get<std::string>(),
                       a.at("outcome").get<std::string>()});
    }
    return out;
}

}  // namespace

ordered_json transcript_to_json(const Transcript &transcript) {
    ordered_json events = ordered_json::array();
    for (const auto &e : transcript.events) {
        ordered_json j;
        j["step"] = e.step;
        j["actor"] = e.actor;
        j["kind"] = e.kind;
        j["qubits"] = e.qubits;
        j["basis"] = optional_field(e.basis);
        j["outcome"] = optional_field(e.outcome);
        j["probability"] = optional_field(e.probability);
        j["message_round"] = optional_field(e.message_round);
        if (!e.payload.empty()) {
            j["payload"] = announcements(e.payload);
        }
        if (e.ops) {
            j["ops"] = *e.ops;
            j["depends_on"] = announcements(e.depends_on);
            j["assumed_plus"] = e.assumed_plus;
        }
        if (e.value) {
            j["value"] = *e.value;
            j["expected"] = optional_field(e.expected);
        }
        events.push_back(std::move(j));
    }
    return ordered_json{{"schema", "bqt.transcript"}, {"schema_version", Transcript::kSchemaVersion},
                        {"events", std::move(events)}};
}

std::string Transcript::to_json() const {
    return transcript_to_json(*this).dump(2);
}

Transcript Transcript::from_json(std::string_view text) {
    auto j = ordered_json::parse(text);
    if (j.at("schema") != "bqt.transcript" || j.at("schema_version") != kSchemaVersion) {
        throw std::invalid_argument("not a bqt.transcript/1 document");
    }
    Transcript t;
    for (const auto &ej : j.at("events")) {
        Event e;
        e.step = ej.at("step").get<int>();
        e.actor = ej.at("actor").get<std::string>();
        e.kind = ej.at("kind").get<std::string>();
        e.qubits = ej.at("qubits").get<std::vector<std::string>>();
        e.basis = read_optional<std::string>(ej, "basis");
        e.outcome = read_optional<std::string>(ej, "outcome");
        e.probability = read_optional<double>(ej, "probability");
        e.message_round = read_optional<int>(ej, "message_round");
        e.payload = read_announcements(ej, "payload");
        e.ops = read_optional<std::string>(ej, "ops");
        e.depends_on = read_announcements(ej, "depends_on");
        if (ej.contains("assumed_plus")) {
            e.assumed_plus = ej.at("assumed_plus").get<std::vector<std::string>>();
        }
        e.value = read_optional<double>(ej, "value");
        e.expected = read_optional<double>(ej, "expected");
        t.events.push_back(std::move(e));
    }
    return t;
}

}  // namespace bqt::parties
