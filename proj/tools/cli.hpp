// Copyright 2026 The antler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ANTLER_TOOLS_CLI_HPP_
#define ANTLER_TOOLS_CLI_HPP_

#include <ostream>

namespace antler::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;
inline constexpr int kDiverged = 4;

// Runs one subcommand. Results summary goes to out as a JSON line, errors
// go to err as a JSON object.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace antler::cli

#endif  // ANTLER_TOOLS_CLI_HPP_
