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
#include <string>
#include <vector>

#include "bqt/correction_table.hpp"
#include "bqt/rng.hpp"

namespace bqt::verify {

struct CriterionResult {
    int id;
    std::string title;
    bool passed;
    std::string detail;
    double seconds;
};

struct Options {
    std::uint64_t seed = kDefaultSeed;
    int random_inputs = 100;
    int sessions = 4096;
    int property_cases = 1000;
    /// Corrections under test; the generated table when null.
    const protocol::CorrectionTable *table = nullptr;
};

CriterionResult swap_canonical(const Options &options);
CriterionResult swap_all_pairs(const Options &options);
CriterionResult step3_uniformity(const Options &options);
CriterionResult collapse_table_content(const Options &options);
CriterionResult reconstruction(const Options &options);
CriterionResult tabulated_corrections(const Options &options);
CriterionResult noncooperation(const Options &options);
CriterionResult sampling_consistency(const Options &options);
CriterionResult engine_properties(const Options &options);

/// Runs every criterion in order.
std::vector<CriterionResult> run_all(const Options &options);

/// Leaf-frequency statistics of a sampled histogram against uniform 1/64.
struct HistogramSummary {
    int trials;
    double chi_square;
    int degrees_of_freedom;
    double max_abs_z;
    bool within_4_sigma;
};
HistogramSummary summarize_histogram(const std::vector<int> &counts);

}  // namespace bqt::verify
