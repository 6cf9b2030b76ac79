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

#ifndef GMVX_TUNING_GRID_SEARCH_H_
#define GMVX_TUNING_GRID_SEARCH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/tuning/metrics.h"

namespace gmvx::tuning {

// Explicit value lists per hyperparameter. Configurations enumerate the
// Cartesian product with parameter names in lexicographic order, the last
// name varying fastest.
struct GridSpec {
  models::Algorithm algorithm = models::Algorithm::kDT;
  std::map<std::string, std::vector<models::ParamValue>> values;

  std::size_t size() const;
  models::Hyperparameters Config(std::size_t index) const;
};

// Values that are unknown or invalid, and with include_ranges also those
// outside the tuning ranges.
std::vector<std::string> GridViolations(const GridSpec& grid,
                                       bool include_ranges = true);

using GridSet = std::map<models::Algorithm, GridSpec>;

// {"grids": {"RF": {"n_estimators": [100, 200], ...}, ...}}. With
// enforce_ranges every value must lie in its tuning range (kInvalidArgument
// listing the offenders otherwise).
GridSet GridsFromJson(const nlohmann::json& doc, bool enforce_ranges = true);
nlohmann::json GridsToJson(const GridSet& grids);
GridSet LoadGrids(const std::string& path, bool enforce_ranges = true);

// Small grids that keep an eight-algorithm, ten-fold benchmark on a couple of
// thousand rows within minutes on one core.
GridSet DefaultGrids();
// Wider discretizations of the full tuning ranges.
GridSet FullGrids();

struct ConfigResult {
  models::Hyperparameters params;
  bool ok = false;
  std::string error;  // first failing fold's reason when !ok
  std::vector<Metrics> folds;
  Metrics mean;
};

struct SearchResult {
  models::Algorithm algorithm = models::Algorithm::kDT;
  MetricKind metric = MetricKind::kMape;
  std::vector<ConfigResult> configs;  // enumeration order
  std::size_t best_index = 0;
  models::ModelSpec best_config;

  const ConfigResult& best() const { return configs[best_index]; }
};

// Cross-validates every configuration on the shared plan. Configs that fail
// to fit are recorded and skipped; if all fail the search is a kSearch
// error. The lowest mean selection metric wins, ties to enumeration order.
SearchResult GridSearch(const GridSpec& grid, const Matrix& x, const Vector& y,
                        const dataset::FoldPlan& plan, MetricKind metric,
                        std::uint64_t seed, int threads = 0);

nlohmann::json MetricsToJson(const Metrics& m);
nlohmann::json SearchToJson(const SearchResult& result);

}  // namespace gmvx::tuning

#endif  // GMVX_TUNING_GRID_SEARCH_H_
