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

// JSON views of library types, shared by the transcript writer and the CLI
// reports.

#pragma once

#include "bqt/parties.hpp"
#include "json.hpp"

namespace bqt {

namespace parties {
nlohmann::ordered_json transcript_to_json(const Transcript &transcript);
}  // namespace parties

}  // namespace bqt
