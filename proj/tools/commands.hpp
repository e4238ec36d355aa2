// Copyright 2026 The povmclean Authors
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

#ifndef POVMCLEAN_TOOLS_COMMANDS_HPP
#define POVMCLEAN_TOOLS_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace povm::cli {

/// Exit codes shared by all commands.
enum ExitCode : int {
  kExitClean = 0,
  kExitNotClean = 1,
  kExitUndetermined = 2,
  kExitInputError = 64,
  kExitInternalError = 70,
};

/// Runs the tool on `args` (without the program name) and returns the exit
/// code. Reports go to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace povm::cli

#endif  // POVMCLEAN_TOOLS_COMMANDS_HPP
