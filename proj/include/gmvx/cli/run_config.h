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

#ifndef GMVX_CLI_RUN_CONFIG_H_
#define GMVX_CLI_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace gmvx::cli {

// Resolved settings for one command. Layers, lowest first: these defaults,
// the JSON config file (--config), GMVX_* environment variables, flags.
struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  int threads = 0;
  std::string data;
  std::string schema;
  std::string grids;
  std::string out = "gmvx_out";
  std::string model;
  std::string spec;  // synthetic-data spec for generate
  bool strict = false;
  std::string metric = "mape";
  std::size_t rows = 1000;
  std::vector<std::string> algorithms;
  std::string algorithm = "RF";
  std::string params;  // inline JSON object or a path to one
  double holdout = 0.0;
  std::string shap = "sampled";
  std::size_t permutations = 100;
  std::size_t background = 500;
  std::size_t explain_rows = 0;  // 0 explains every row
  std::vector<std::string> ale;
  std::size_t ale_bins = 20;
  std::size_t ale_trajectories = 50;
  std::vector<std::string> shap3d;
  std::size_t knn_smooth = 0;  // 0 means round(sqrt(n))
  bool group_split = false;
};

enum class OptionKind { kString, kUnsigned, kInt, kDouble, kBool, kList };

struct OptionInfo {
  std::string name;  // flag name without dashes, also the config-file key
  OptionKind kind;
  std::string help;
};

const std::vector<OptionInfo>& AllOptions();
const OptionInfo& FindOption(std::string_view name);

// GMVX_ plus the upper-cased name with dashes as underscores.
std::string EnvName(std::string_view option);

// Parses and stores one value; list options take comma-separated text.
// Bad values are kInvalidArgument errors naming the option.
void SetOption(RunConfig& config, std::string_view name, std::string_view value);

// Keys are option names; unknown keys are rejected.
void ApplyConfigJson(RunConfig& config, const nlohmann::json& doc,
                     const std::vector<std::string>& allowed);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup ProcessEnvironment();
void ApplyEnvironment(RunConfig& config, const EnvLookup& env,
                      const std::vector<std::string>& allowed);

// Every option in `names`, keyed by option name.
nlohmann::json ConfigToJson(const RunConfig& config,
                            const std::vector<std::string>& names);

}  // namespace gmvx::cli

#endif  // GMVX_CLI_RUN_CONFIG_H_
