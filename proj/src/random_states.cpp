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

#include "bqt/random_states.hpp"

#include <cmath>
#include <numbers>

namespace bqt {

double normal(Rng &rng) {
    double u1 = 1.0 - rng.uniform();  // (0, 1]
    double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

qsim::Register random_register(Rng &rng, std::vector<qsim::QubitLabel> labels) {
    std::vector<qsim::Amplitude> amps(std::size_t{1} << labels.size());
    for (auto &a : amps) {
        a = {normal(rng), normal(rng)};
    }
    return qsim::Register(std::move(labels), std::move(amps));
}

protocol::EprInput random_epr(Rng &rng) {
    double theta = std::acos(std::sqrt(rng.uniform()));  // |c0|^2 uniform on [0, 1]
    double phi = 2 * std::numbers::pi * rng.uniform();
    double global = 2 * std::numbers::pi * rng.uniform();
    return protocol::EprInput::from_angles(theta, phi).with_global_phase(global);
}

std::vector<protocol::EprInput> test_inputs(Rng &rng, int count) {
    std::vector<protocol::EprInput> inputs{
        protocol::EprInput::make(1, 0),
        protocol::EprInput::make(0, 1),
        protocol::EprInput::from_angles(std::numbers::pi / 4, 0),
        protocol::EprInput::make(0.6, 0.8),
    };
    while (static_cast<int>(inputs.size()) < count) {
        inputs.push_back(random_epr(rng));
    }
    inputs.resize(static_cast<std::size_t>(count), inputs.front());
    return inputs;
}

}  // namespace bqt
