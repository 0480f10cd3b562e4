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

#include <ostream>

namespace bqt::cli {

/// Exit codes: 0 when every reported check passed, 1 on a failed check, 2 on
/// usage or configuration errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the bqt command-line tool. Reports go to `out` unless an
/// output path is configured; diagnostics go to `err`.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace bqt::cli
