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

#include "gmvx/tuning/grid_search.h"

#include <cmath>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/tuning/cross_validation.h"

namespace gmvx::tuning {

using models::Algorithm;
using models::Hyperparameters;
using models::ParamValue;

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (const auto& [name, list] : values) total *= list.size();
  return values.empty() ? 1 : total;
}

Hyperparameters GridSpec::Config(std::size_t index) const {
  Hyperparameters hp;
  std::size_t stride = size();
  for (const auto& [name, list] : values) {
    stride /= list.size();
    hp.Set(name, list[(index / stride) % list.size()]);
  }
  return hp;
}

std::vector<std::string> GridViolations(const GridSpec& grid,
                                       bool include_ranges) {
  std::vector<std::string> out;
  const std::string tag(models::AlgorithmName(grid.algorithm));
  for (const auto& [name, list] : grid.values) {
    if (list.empty()) out.push_back(tag + "." + name + ": empty value list");
    for (const ParamValue& v : list) {
      try {
        models::ValidateSpec({grid.algorithm, Hyperparameters{{name, v}}, 0});
      } catch (const Error& e) {
        out.push_back(tag + ": " + e.what());
        continue;
      }
      if (!include_ranges) continue;
      for (const std::string& msg :
           models::TuningRangeViolations(grid.algorithm, name, v)) {
        out.push_back(tag + ": " + msg);
      }
    }
  }
  return out;
}

GridSet GridsFromJson(const nlohmann::json& doc, bool enforce_ranges) {
  if (!doc.is_object() || !doc.contains("grids") || !doc["grids"].is_object()) {
    Fail(ErrorCode::kParse, "grid document needs a \"grids\" object");
  }
  GridSet grids;
  for (const auto& [tag, body] : doc["grids"].items()) {
    GridSpec grid;
    grid.algorithm = models::ParseAlgorithm(tag);
    if (!body.is_object()) Fail(ErrorCode::kParse, tag + ": grid must be an object");
    for (const auto& [name, list] : body.items()) {
      std::vector<ParamValue> values;
      if (list.is_array()) {
        for (const auto& v : list) values.push_back(models::ParamFromJson(v));
      } else {
        values.push_back(models::ParamFromJson(list));
      }
      grid.values[name] = std::move(values);
    }
    const std::vector<std::string> problems = GridViolations(grid, enforce_ranges);
    if (!problems.empty()) {
      std::string msg = "invalid grid values:";
      for (const auto& p : problems) msg += "\n  " + p;
      Fail(ErrorCode::kInvalidArgument, msg);
    }
    grids[grid.algorithm] = std::move(grid);
  }
  return grids;
}

nlohmann::json GridsToJson(const GridSet& grids) {
  nlohmann::json body = nlohmann::json::object();
  for (const auto& [algorithm, grid] : grids) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, list] : grid.values) {
      nlohmann::json values = nlohmann::json::array();
      for (const auto& v : list) values.push_back(models::ParamToJson(v));
      params[name] = std::move(values);
    }
    body[std::string(models::AlgorithmName(algorithm))] = std::move(params);
  }
  return {{"grids", std::move(body)}};
}

GridSet LoadGrids(const std::string& path, bool enforce_ranges) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, path + ": " + ex.what());
  }
  return GridsFromJson(doc, enforce_ranges);
}

namespace {

std::vector<ParamValue> Ints(std::initializer_list<std::int64_t> v) {
  return {v.begin(), v.end()};
}
std::vector<ParamValue> Reals(std::initializer_list<double> v) {
  return {v.begin(), v.end()};
}
std::vector<ParamValue> Words(std::initializer_list<const char*> v) {
  std::vector<ParamValue> out;
  for (const char* s : v) out.emplace_back(std::string(s));
  return out;
}
std::vector<ParamValue> Flags(std::initializer_list<bool> v) {
  return {v.begin(), v.end()};
}

GridSpec Grid(Algorithm a,
              std::map<std::string, std::vector<ParamValue>> values) {
  return GridSpec{a, std::move(values)};
}

}  // namespace

GridSet DefaultGrids() {
  GridSet g;
  g[Algorithm::kDT] = Grid(Algorithm::kDT, {{"max_depth", Ints({5, 10, 20})},
                                            {"min_samples_split", Ints({2, 10})},
                                            {"min_samples_leaf", Ints({1, 4})},
                                            {"max_features", Words({"sqrt", "log2"})}});
  g[Algorithm::kRF] = Grid(Algorithm::kRF, {{"n_estimators", Ints({100})},
                                            {"max_depth", Ints({10, 20})},
                                            {"min_samples_split", Ints({2})},
                                            {"min_samples_leaf", Ints({1, 4})},
                                            {"max_features", Words({"sqrt"})},
                                            {"bootstrap", Flags({true})}});
  g[Algorithm::kSVR] = Grid(Algorithm::kSVR, {{"kernel", Words({"rbf"})},
                                              {"C", Reals({1, 10})},
                                              {"epsilon", Reals({0.1})}});
  g[Algorithm::kET] = Grid(Algorithm::kET, {{"n_estimators", Ints({100})},
                                            {"max_depth", Ints({10, 20})},
                                            {"min_samples_split", Ints({2})},
                                            {"min_samples_leaf", Ints({1, 4})},
                                            {"max_features", Words({"sqrt"})},
                                            {"bootstrap", Flags({false})}});
  g[Algorithm::kLR] = Grid(Algorithm::kLR, {{"fit_intercept", Flags({true, false})},
                                            {"normalize", Flags({false, true})},
                                            {"max_iter", Ints({100})}});
  g[Algorithm::kKNN] = Grid(Algorithm::kKNN, {{"n_neighbors", Ints({5, 10, 20})},
                                              {"weights", Words({"uniform", "distance"})},
                                              {"algorithm", Words({"kd_tree"})},
                                              {"leaf_size", Ints({30})}});
  g[Algorithm::kAdaBoost] =
      Grid(Algorithm::kAdaBoost, {{"n_estimators", Ints({50})},
                                  {"learning_rate", Reals({0.1, 1})},
                                  {"loss", Words({"linear", "square", "exponential"})}});
  g[Algorithm::kGBRT] = Grid(Algorithm::kGBRT, {{"n_estimators", Ints({100})},
                                                {"max_depth", Ints({5})},
                                                {"learning_rate", Reals({0.05, 0.1})},
                                                {"max_features", Words({"sqrt"})}});
  return g;
}

GridSet FullGrids() {
  GridSet g;
  const auto depth = Ints({5, 10, 20, 50, 100});
  const auto split = Ints({2, 5, 10});
  const auto leaf = Ints({1, 2, 4});
  const auto feats = Words({"sqrt", "log2"});
  const auto rate = Reals({0.01, 0.05, 0.1, 0.5});
  g[Algorithm::kDT] = Grid(Algorithm::kDT, {{"max_depth", depth},
                                            {"min_samples_split", split},
                                            {"min_samples_leaf", leaf},
                                            {"max_features", feats}});
  g[Algorithm::kRF] = Grid(Algorithm::kRF, {{"n_estimators", Ints({10, 50, 100, 200, 500})},
                                            {"max_depth", depth},
                                            {"min_samples_split", split},
                                            {"min_samples_leaf", leaf},
                                            {"max_features", feats},
                                            {"bootstrap", Flags({true, false})}});
  g[Algorithm::kSVR] = Grid(Algorithm::kSVR, {{"kernel", Words({"linear", "poly", "rbf", "sigmoid"})},
                                              {"C", Reals({0.1, 1, 10, 100, 1000})},
                                              {"epsilon", Reals({0.01, 0.1, 1, 10, 100})}});
  g[Algorithm::kET] = Grid(Algorithm::kET, {{"n_estimators", Ints({10, 50, 100, 200, 500, 800})},
                                            {"max_depth", depth},
                                            {"min_samples_split", split},
                                            {"min_samples_leaf", leaf},
                                            {"max_features", feats},
                                            {"bootstrap", Flags({true, false})}});
  g[Algorithm::kLR] = Grid(Algorithm::kLR, {{"fit_intercept", Flags({true, false})},
                                            {"normalize", Flags({true, false})},
                                            {"max_iter", Ints({100, 1000, 5000})}});
  g[Algorithm::kKNN] = Grid(Algorithm::kKNN, {{"n_neighbors", Ints({2, 5, 10, 20, 50})},
                                              {"weights", Words({"uniform", "distance"})},
                                              {"algorithm", Words({"brute", "kd_tree", "ball_tree"})},
                                              {"leaf_size", Ints({10, 30, 50})}});
  g[Algorithm::kAdaBoost] =
      Grid(Algorithm::kAdaBoost, {{"n_estimators", Ints({10, 50, 100, 200, 500, 800})},
                                  {"learning_rate", Reals({0.01, 0.05, 0.1, 0.5, 1, 10, 100})},
                                  {"loss", Words({"linear", "square", "exponential"})}});
  g[Algorithm::kGBRT] = Grid(Algorithm::kGBRT, {{"n_estimators", Ints({10, 50, 100, 200, 500, 800})},
                                                {"max_depth", depth},
                                                {"learning_rate", rate},
                                                {"min_samples_split", split},
                                                {"min_samples_leaf", leaf},
                                                {"max_features", feats}});
  return g;
}

SearchResult GridSearch(const GridSpec& grid, const Matrix& x, const Vector& y,
                        const dataset::FoldPlan& plan, MetricKind metric,
                        std::uint64_t seed, int threads) {
  CheckPlan(plan, static_cast<std::size_t>(x.rows()));
  for (const auto& [name, list] : grid.values) {
    if (list.empty()) {
      Fail(ErrorCode::kInvalidArgument, "grid value list for " + name + " is empty");
    }
  }
  const std::size_t configs = grid.size();
  const std::size_t k = plan.folds.size();
  struct Slot {
    bool ok = false;
    std::string error;
    Metrics metrics;
  };
  std::vector<Slot> slots(configs * k);
  ParallelFor(
      slots.size(),
      [&](std::size_t s) {
        const std::size_t c = s / k;
        const std::size_t f = s % k;
        const models::ModelSpec spec{grid.algorithm, grid.Config(c), seed};
        try {
          const Vector pred = FitPredictFold(spec, x, y, plan, f);
          slots[s].metrics = ComputeMetrics(SelectRows(y, plan.folds[f]), pred,
                                            /*with_mape=*/false);
          if (std::isnan(MetricValue(slots[s].metrics, metric))) {
            slots[s].error = "domain: MAPE undefined for a zero target";
          } else {
            slots[s].ok = true;
          }
        } catch (const Error& e) {
          slots[s].error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
        }
      },
      threads);

  SearchResult result;
  result.algorithm = grid.algorithm;
  result.metric = metric;
  bool any = false;
  for (std::size_t c = 0; c < configs; ++c) {
    ConfigResult cr;
    cr.params = grid.Config(c);
    cr.ok = true;
    for (std::size_t f = 0; f < k; ++f) {
      const Slot& slot = slots[c * k + f];
      if (!slot.ok) {
        cr.ok = false;
        cr.error = "fold " + std::to_string(f + 1) + ": " + slot.error;
        cr.folds.clear();
        break;
      }
      cr.folds.push_back(slot.metrics);
    }
    if (cr.ok) {
      cr.mean = MeanMetrics(cr.folds);
      const double v = MetricValue(cr.mean, metric);
      if (!any || v < MetricValue(result.configs[result.best_index].mean, metric)) {
        result.best_index = c;
        any = true;
      }
    }
    result.configs.push_back(std::move(cr));
  }
  if (!any) {
    Fail(ErrorCode::kSearch, std::string(models::AlgorithmName(grid.algorithm)) +
                                 ": every configuration failed (first: " +
                                 result.configs.front().error + ")");
  }
  result.best_config = {grid.algorithm, result.best().params, seed};
  return result;
}

nlohmann::json MetricsToJson(const Metrics& m) {
  return {{"mae", m.mae}, {"mse", m.mse}, {"mape", m.mape}};
}

nlohmann::json SearchToJson(const SearchResult& result) {
  nlohmann::json configs = nlohmann::json::array();
  for (const ConfigResult& c : result.configs) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, v] : c.params.values()) params[name] = models::ParamToJson(v);
    nlohmann::json entry = {{"params", params}, {"ok", c.ok}};
    if (c.ok) {
      nlohmann::json folds = nlohmann::json::array();
      for (const Metrics& m : c.folds) folds.push_back(MetricsToJson(m));
      entry["folds"] = std::move(folds);
      entry["mean"] = MetricsToJson(c.mean);
    } else {
      entry["error"] = c.error;
    }
    configs.push_back(std::move(entry));
  }
  return {{"algorithm", models::AlgorithmName(result.algorithm)},
          {"metric", MetricName(result.metric)},
          {"best_index", result.best_index},
          {"best_config", models::SpecToJson(result.best_config)},
          {"configs", std::move(configs)}};
}

}  // namespace gmvx::tuning
