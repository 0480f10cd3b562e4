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

#include <vector>

#include "bqt/protocol.hpp"
#include "bqt/qsim.hpp"
#include "bqt/rng.hpp"

namespace bqt {

/// Standard normal via Box-Muller on Rng::uniform(), so values are
/// reproducible across standard libraries.
double normal(Rng &rng);

/// Haar-random pure state over the given labels.
qsim::Register random_register(Rng &rng, std::vector<qsim::QubitLabel> labels);

/// Random payload with complex phases on both coefficients.
protocol::EprInput random_epr(Rng &rng);

/// `count` payloads: the product and balanced edge cases first, then random.
std::vector<protocol::EprInput> test_inputs(Rng &rng, int count);

}  // namespace bqt
