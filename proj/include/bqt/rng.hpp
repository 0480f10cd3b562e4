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
#include <random>

namespace bqt {

/// Default seed for sampled runs and the verification suite.
inline constexpr std::uint64_t kDefaultSeed = 0xB0B7A11CEULL;

/// Deterministic measurement randomness.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard,
/// so runs reproduce across standard library implementations. uniform() maps
/// one 64-bit engine output to [0, 1) using its top 53 bits; each sampled
/// measurement consumes exactly one uniform().
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {
    }

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() {
        return engine_();
    }

   private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace bqt
