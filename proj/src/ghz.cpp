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

#include "bqt/ghz.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bqt::ghz {

using qsim::Amplitude;
using qsim::QubitLabel;
using qsim::Register;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// (first ket, second ket) as 3-bit indices; odd indices take the minus sign.
constexpr std::array<std::array<int, 2>, 4> kPairs{{
    {0b000, 0b111},
    {0b100, 0b011},
    {0b010, 0b101},
    {0b110, 0b001},
}};

}  // namespace

GhzIndex::GhzIndex(int value) : value_(value) {
    if (value < 0 || value > 7) {
        throw std::out_of_range("GHZ index must be in 0..7, got " + std::to_string(value));
    }
}

std::array<GhzIndex, 8> GhzIndex::all() {
    return {GhzIndex(0), GhzIndex(1), GhzIndex(2), GhzIndex(3),
            GhzIndex(4), GhzIndex(5), GhzIndex(6), GhzIndex(7)};
}

std::array<Amplitude, 8> ghz_amplitudes(GhzIndex i) {
    std::array<Amplitude, 8> amps{};
    const auto &pair = kPairs[static_cast<std::size_t>(i.value() / 2)];
    double sign = (i.value() % 2 == 0) ? 1.0 : -1.0;
    amps[static_cast<std::size_t>(pair[0])] = kInvSqrt2;
    amps[static_cast<std::size_t>(pair[1])] = sign * kInvSqrt2;
    return amps;
}

Register ghz_state(GhzIndex i, const Triple &labels) {
    auto amps = ghz_amplitudes(i);
    return Register(std::vector<QubitLabel>(labels.begin(), labels.end()),
                    std::vector<Amplitude>(amps.begin(), amps.end()));
}

std::array<double, 8> ghz_outcome_probabilities(const Register &reg, const Triple &triple) {
    std::array<double, 8> probs{};
    for (auto k : GhzIndex::all()) {
        auto amps = ghz_amplitudes(k);
        probs[static_cast<std::size_t>(k.value())] = qsim::project_onto(reg, triple, amps).probability;
    }
    return probs;
}

GhzMeasurement ghz_basis_measure(const Register &reg, const Triple &triple, qsim::MeasureMode mode) {
    for (const auto &q : triple) {
        reg.position(q);
    }
    int outcome = 0;
    if (auto *forced = std::get_if<qsim::Force>(&mode)) {
        outcome = GhzIndex(forced->outcome).value();
    } else {
        auto probs = ghz_outcome_probabilities(reg, triple);
        double total = 0;
        for (double p : probs) {
            total += p;
        }
        double u = std::get<qsim::Sample>(mode).rng.get().uniform() * total;
        double cumulative = 0;
        for (int k = 0; k < 8; k++) {
            double p = probs[static_cast<std::size_t>(k)];
            if (p < qsim::kTol) {
                continue;
            }
            outcome = k;
            cumulative += p;
            if (u < cumulative) {
                break;
            }
        }
    }
    auto amps = ghz_amplitudes(GhzIndex(outcome));
    auto projection = qsim::project_onto(reg, triple, amps);
    double probability = projection.probability;
    return GhzMeasurement{GhzIndex(outcome), probability, qsim::collapse(std::move(projection))};
}

std::optional<GhzIndex> classify(const Register &reg, const Triple &labels, double tol) {
    for (auto k : GhzIndex::all()) {
        if (qsim::equal_up_to_global_phase(reg, ghz_state(k, labels), tol)) {
            return k;
        }
    }
    return std::nullopt;
}

Triple swap_measured_triple() {
    return {QubitLabel("1"), QubitLabel("3"), QubitLabel("5")};
}

Triple swap_remainder_triple() {
    return {QubitLabel("2"), QubitLabel("4"), QubitLabel("6")};
}

std::vector<SwapOutcome> entanglement_swap(GhzIndex i, GhzIndex j) {
    Register channel = qsim::tensor(ghz_state(i, {QubitLabel("1"), QubitLabel("2"), QubitLabel("3")}),
                                    ghz_state(j, {QubitLabel("4"), QubitLabel("5"), QubitLabel("6")}));
    auto measured = swap_measured_triple();
    auto remainder_labels = swap_remainder_triple();
    std::vector<SwapOutcome> outcomes;
    for (auto k : GhzIndex::all()) {
        auto amps = ghz_amplitudes(k);
        auto projection = qsim::project_onto(channel, measured, amps);
        if (projection.probability < qsim::kTol) {
            continue;
        }
        double probability = projection.probability;
        Register remainder = qsim::permute(qsim::collapse(std::move(projection)), remainder_labels);
        auto matched = classify(remainder, remainder_labels);
        outcomes.push_back(SwapOutcome{k, probability, std::move(remainder), matched});
    }
    return outcomes;
}

}  // namespace bqt::ghz
