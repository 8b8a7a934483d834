// Copyright 2026 The eegpi Authors.
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

#ifndef EEGPI_TOOLS_COMMANDS_H_
#define EEGPI_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace eegpi::cli {

// Runs the command line `args` (args[0] is the program name). Reports go to
// `out`; failures print one "error: <code>: <message>" line to `err`.
// Returns the process exit status.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace eegpi::cli

#endif  // EEGPI_TOOLS_COMMANDS_H_
