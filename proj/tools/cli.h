// Copyright 2026 The qlsim Authors
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

#ifndef QLSIM_TOOLS_CLI_H
#define QLSIM_TOOLS_CLI_H

#include <iosfwd>

namespace qlsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitNumeric = 4;

/// Entry point of the `qlsim` tool; returns the process exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qlsim

#endif
