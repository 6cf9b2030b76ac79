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

#ifndef GMVX_TUNING_BENCHMARK_H_
#define GMVX_TUNING_BENCHMARK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/dataset/dataset.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/tuning/grid_search.h"
#include "gmvx/tuning/metrics.h"

namespace gmvx::tuning {

struct BenchmarkOptions {
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  MetricKind metric = MetricKind::kMape;
  // 0 tunes and reports on the same folds. A fraction in (0, 1) first holds
  // out that share of rows; tuning uses folds over the rest, and the reported
  // metrics come from refitting the best configuration on the rest and
  // scoring the held-out rows.
  double holdout_fraction = 0.0;
  int threads = 0;
  std::vector<models::Algorithm> algorithms{models::kAllAlgorithms.begin(),
                                            models::kAllAlgorithms.end()};
  std::function<void(const std::string&)> progress;
};

struct AlgorithmOutcome {
  models::Algorithm algorithm = models::Algorithm::kDT;
  bool ok = false;
  std::string error;
  Metrics metrics;
  std::optional<SearchResult> search;
  double seconds = 0.0;
};

struct BenchmarkReport {
  std::vector<AlgorithmOutcome> rows;  // benchmark-table order
  std::optional<models::Algorithm> best;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::size_t rows_used = 0;
  std::size_t holdout_rows = 0;
  MetricKind metric = MetricKind::kMape;
  std::string fold_plan_digest;  // hash of the shared fold assignment

  const AlgorithmOutcome* Find(models::Algorithm a) const;
  // 1-based rank by (MAPE, MAE, MSE); 0 for failed algorithms.
  std::size_t RankOf(models::Algorithm a) const;
};

// Orders outcomes by MAPE, then MAE, then MSE, then table order.
bool BetterOutcome(const AlgorithmOutcome& a, const AlgorithmOutcome& b);

// Grid search per algorithm on one shared fold plan over a transformed
// dataset. A failing algorithm is annotated, not fatal; if every algorithm
// fails the call is a kSearch error. Missing grids are a kInvalidArgument
// error.
BenchmarkReport BenchmarkAll(const dataset::Dataset& ds, const GridSet& grids,
                             const BenchmarkOptions& options);

// Rows MAE/MSE/MAPE, one column per algorithm in table order.
std::string BenchmarkCsv(const BenchmarkReport& report);
nlohmann::json BenchmarkToJson(const BenchmarkReport& report);

}  // namespace gmvx::tuning

#endif  // GMVX_TUNING_BENCHMARK_H_
