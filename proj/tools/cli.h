// Copyright 2026 The hikm Authors.
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

#ifndef HIKM_TOOLS_CLI_H_
#define HIKM_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace hikm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,     // bad arguments or config
  kExitData = 3,      // unreadable or malformed input files
  kExitMismatch = 4,  // tree and dataset do not belong together
};

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace hikm::cli

#endif  // HIKM_TOOLS_CLI_H_
