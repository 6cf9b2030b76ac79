/*
 * Copyright 2026 The gmvx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GMVX_CLI_COMMANDS_H_
#define GMVX_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gmvx/cli/run_config.h"

namespace gmvx::cli {

// Subcommands: generate, validate, benchmark, tune, train, explain, report.
const std::vector<std::string>& CommandNames();
// Option names accepted by a subcommand (without the leading dashes).
const std::vector<std::string>& CommandOptions(std::string_view command);

// Runs one command line; args[0] is the program name. Returns the exit
// code: 0 on success, 2 for usage and input errors, 1 for internal errors.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, const EnvLookup& env = ProcessEnvironment());

}  // namespace gmvx::cli

#endif  // GMVX_CLI_COMMANDS_H_
