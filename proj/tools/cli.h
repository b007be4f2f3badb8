// Copyright 2026 The privfunnel Authors
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

#ifndef PRIVFUNNEL_TOOLS_CLI_H_
#define PRIVFUNNEL_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace privfunnel::cli {

// Runs the privfunnel command line. `args` excludes the program name.
// Returns 0 on success, 1 on a library error and 2 on a usage error; errors
// are written to `err` as a single line starting with "error: ".
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace privfunnel::cli

#endif  // PRIVFUNNEL_TOOLS_CLI_H_
