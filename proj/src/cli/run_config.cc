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

#include "gmvx/cli/run_config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"

namespace gmvx::cli {
namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<nlohmann::json(const RunConfig&)>;

struct Field {
  OptionInfo info;
  Setter set;
  Getter get;
};

[[noreturn]] void Bad(std::string_view name, std::string_view value,
                      std::string_view expected) {
  Fail(ErrorCode::kInvalidArgument, "--" + std::string(name) + ": '" +
                                        std::string(value) + "' is not " +
                                        std::string(expected));
}

std::string Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T ParseInteger(std::string_view name, std::string_view raw) {
  const std::string s = Trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    Bad(name, raw, std::is_signed_v<T> ? "an integer" : "a non-negative integer");
  }
  return v;
}

double ParseReal(std::string_view name, std::string_view raw) {
  const auto v = ParseCsvNumber(Trim(raw));
  if (!v || !std::isfinite(*v)) Bad(name, raw, "a finite number");
  return *v;
}

bool ParseBool(std::string_view name, std::string_view raw) {
  std::string s = Trim(raw);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  Bad(name, raw, "a boolean");
}

std::vector<std::string> ParseList(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const std::size_t comma = raw.find(',', start);
    const std::string item =
        Trim(raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename M>
Field Str(std::string name, M RunConfig::*member, std::string help) {
  return {{name, OptionKind::kString, std::move(help)},
          [member](RunConfig& c, std::string_view v) { c.*member = Trim(v); },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

template <typename M>
Field Uns(std::string name, M RunConfig::*member, std::string help) {
  return {{name, OptionKind::kUnsigned, std::move(help)},
          [name, member](RunConfig& c, std::string_view v) {
            c.*member = ParseInteger<M>(name, v);
          },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

Field Int(std::string name, int RunConfig::*member, std::string help) {
  return {{name, OptionKind::kInt, std::move(help)},
          [name, member](RunConfig& c, std::string_view v) {
            c.*member = ParseInteger<int>(name, v);
          },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

Field Real(std::string name, double RunConfig::*member, std::string help) {
  return {{name, OptionKind::kDouble, std::move(help)},
          [name, member](RunConfig& c, std::string_view v) {
            c.*member = ParseReal(name, v);
          },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

Field Flag(std::string name, bool RunConfig::*member, std::string help) {
  return {{name, OptionKind::kBool, std::move(help)},
          [name, member](RunConfig& c, std::string_view v) {
            c.*member = ParseBool(name, v);
          },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

Field List(std::string name, std::vector<std::string> RunConfig::*member,
           std::string help) {
  return {{name, OptionKind::kList, std::move(help)},
          [member](RunConfig& c, std::string_view v) { c.*member = ParseList(v); },
          [member](const RunConfig& c) { return nlohmann::json(c.*member); }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Uns("seed", &RunConfig::seed, "master random seed"),
      Uns("folds", &RunConfig::folds, "cross-validation folds"),
      Int("threads", &RunConfig::threads, "worker threads (0 = all cores)"),
      Str("data", &RunConfig::data, "input CSV"),
      Str("schema", &RunConfig::schema, "schema JSON (default: built-in table)"),
      Str("grids", &RunConfig::grids, "hyperparameter grid JSON (default: built-in)"),
      Str("out", &RunConfig::out, "output directory"),
      Str("model", &RunConfig::model, "fitted model JSON"),
      Str("spec", &RunConfig::spec, "synthetic-data spec JSON (default: built-in)"),
      Flag("strict", &RunConfig::strict, "treat bound violations as errors"),
      Str("metric", &RunConfig::metric, "selection metric: mae, mse or mape"),
      Uns("rows", &RunConfig::rows, "rows to generate"),
      List("algorithms", &RunConfig::algorithms, "comma-separated algorithm filter"),
      Str("algorithm", &RunConfig::algorithm, "algorithm tag (DT, RF, SVR, ...)"),
      Str("params", &RunConfig::params, "hyperparameters: JSON object or file"),
      Real("holdout", &RunConfig::holdout, "held-out share for final scoring (0 = off)"),
      Str("shap", &RunConfig::shap, "SHAP estimator: exact or sampled"),
      Uns("permutations", &RunConfig::permutations, "permutations per sampled row"),
      Uns("background", &RunConfig::background, "maximum background rows"),
      Uns("explain-rows", &RunConfig::explain_rows, "rows to explain (0 = all)"),
      List("ale", &RunConfig::ale, "features for ALE curves"),
      Uns("ale-bins", &RunConfig::ale_bins, "ALE quantile bins"),
      Uns("ale-trajectories", &RunConfig::ale_trajectories,
          "per-row ALE trajectories to draw"),
      List("shap3d", &RunConfig::shap3d, "features for 3D-SHAP surfaces"),
      Uns("knn-smooth", &RunConfig::knn_smooth, "3D-SHAP neighbors (0 = sqrt(n))"),
      Flag("group-split", &RunConfig::group_split, "female/male importance comparison"),
  };
  return fields;
}

const Field& FindField(std::string_view name) {
  for (const auto& f : Fields()) {
    if (f.info.name == name) return f;
  }
  Fail(ErrorCode::kInternal, "unknown option " + std::string(name));
}

bool Allowed(const std::vector<std::string>& allowed, std::string_view name) {
  return std::find(allowed.begin(), allowed.end(), name) != allowed.end();
}

}  // namespace

const std::vector<OptionInfo>& AllOptions() {
  static const std::vector<OptionInfo> infos = [] {
    std::vector<OptionInfo> out;
    for (const auto& f : Fields()) out.push_back(f.info);
    return out;
  }();
  return infos;
}

const OptionInfo& FindOption(std::string_view name) { return FindField(name).info; }

std::string EnvName(std::string_view option) {
  std::string out = "GMVX_";
  for (char c : option) {
    out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

void SetOption(RunConfig& config, std::string_view name, std::string_view value) {
  FindField(name).set(config, value);
}

void ApplyConfigJson(RunConfig& config, const nlohmann::json& doc,
                     const std::vector<std::string>& allowed) {
  if (!doc.is_object()) {
    Fail(ErrorCode::kParse, "config file must hold a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!Allowed(allowed, key)) {
      Fail(ErrorCode::kInvalidArgument,
           "config key '" + key + "' is not an option of this command");
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& item : value) {
        if (!text.empty()) text += ',';
        text += item.is_string() ? item.get<std::string>() : item.dump();
      }
    } else if (value.is_number() || value.is_boolean()) {
      text = value.dump();
    } else {
      Fail(ErrorCode::kInvalidArgument, "config key '" + key + "' has an unsupported type");
    }
    SetOption(config, key, text);
  }
}

EnvLookup ProcessEnvironment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  };
}

void ApplyEnvironment(RunConfig& config, const EnvLookup& env,
                      const std::vector<std::string>& allowed) {
  for (const auto& name : allowed) {
    if (const auto v = env(EnvName(name))) SetOption(config, name, *v);
  }
}

nlohmann::json ConfigToJson(const RunConfig& config,
                            const std::vector<std::string>& names) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& name : names) doc[name] = FindField(name).get(config);
  return doc;
}

}  // namespace gmvx::cli
