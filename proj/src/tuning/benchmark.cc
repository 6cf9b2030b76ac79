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

#include "gmvx/tuning/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/random.h"
#include "gmvx/models/fitted_model.h"
#include "gmvx/tuning/cross_validation.h"

namespace gmvx::tuning {

using models::Algorithm;

const AlgorithmOutcome* BenchmarkReport::Find(Algorithm a) const {
  for (const auto& row : rows) {
    if (row.algorithm == a) return &row;
  }
  return nullptr;
}

std::size_t BenchmarkReport::RankOf(Algorithm a) const {
  const AlgorithmOutcome* self = Find(a);
  if (self == nullptr || !self->ok) return 0;
  std::size_t rank = 1;
  for (const auto& row : rows) {
    if (row.ok && row.algorithm != a && BetterOutcome(row, *self)) ++rank;
  }
  return rank;
}

namespace {

std::size_t TableIndex(Algorithm a) {
  return static_cast<std::size_t>(
      std::find(models::kAllAlgorithms.begin(), models::kAllAlgorithms.end(), a) -
      models::kAllAlgorithms.begin());
}

std::string PlanDigest(const dataset::FoldPlan& plan) {
  std::string bytes;
  for (const auto& fold : plan.folds) {
    for (std::size_t i : fold) bytes += std::to_string(i) + ",";
    bytes += ";";
  }
  return HexU64(Fnv1a64(bytes));
}

}  // namespace

bool BetterOutcome(const AlgorithmOutcome& a, const AlgorithmOutcome& b) {
  if (a.metrics.mape != b.metrics.mape) return a.metrics.mape < b.metrics.mape;
  if (a.metrics.mae != b.metrics.mae) return a.metrics.mae < b.metrics.mae;
  if (a.metrics.mse != b.metrics.mse) return a.metrics.mse < b.metrics.mse;
  return TableIndex(a.algorithm) < TableIndex(b.algorithm);
}

BenchmarkReport BenchmarkAll(const dataset::Dataset& ds, const GridSet& grids,
                             const BenchmarkOptions& options) {
  if (ds.scale() != dataset::Scale::kTransformed) {
    Fail(ErrorCode::kInvalidArgument,
         "benchmark expects transformed data (metrics are on ln GMV)");
  }
  for (Algorithm a : options.algorithms) {
    if (grids.count(a) == 0) {
      Fail(ErrorCode::kInvalidArgument,
           "no grid for " + std::string(models::AlgorithmName(a)));
    }
  }
  if (!(options.holdout_fraction >= 0.0 && options.holdout_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "holdout fraction must be in [0, 1)");
  }

  // Rows used for tuning and, in held-out mode, for final scoring.
  const std::size_t n = ds.rows();
  std::vector<std::size_t> tune_rows(n);
  std::iota(tune_rows.begin(), tune_rows.end(), std::size_t{0});
  std::vector<std::size_t> test_rows;
  if (options.holdout_fraction > 0.0) {
    Rng rng(DeriveSeed(options.seed, 0x686f6c64ULL));
    rng.Shuffle(std::span<std::size_t>(tune_rows));
    const auto held = static_cast<std::size_t>(
        std::round(options.holdout_fraction * static_cast<double>(n)));
    if (held < 1 || n - held < options.folds) {
      Fail(ErrorCode::kInvalidArgument, "holdout leaves too few rows");
    }
    test_rows.assign(tune_rows.end() - static_cast<std::ptrdiff_t>(held), tune_rows.end());
    tune_rows.resize(n - held);
    std::sort(tune_rows.begin(), tune_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
  }
  const Matrix x = SelectRows(ds.features(), tune_rows);
  const Vector y = SelectRows(ds.target(), tune_rows);
  const dataset::FoldPlan plan = dataset::MakeFolds(tune_rows.size(), options.folds, options.seed);

  BenchmarkReport report;
  report.seed = options.seed;
  report.folds = options.folds;
  report.rows_used = tune_rows.size();
  report.holdout_rows = test_rows.size();
  report.metric = options.metric;
  report.fold_plan_digest = PlanDigest(plan);

  std::vector<Algorithm> order = options.algorithms;
  std::sort(order.begin(), order.end(),
            [](Algorithm a, Algorithm b) { return TableIndex(a) < TableIndex(b); });
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (Algorithm a : order) {
    AlgorithmOutcome row;
    row.algorithm = a;
    const auto start = std::chrono::steady_clock::now();
    try {
      SearchResult search = GridSearch(grids.at(a), x, y, plan, options.metric,
                                       options.seed, options.threads);
      if (test_rows.empty()) {
        row.metrics = search.best().mean;
      } else {
        const models::FittedModel model = models::Fit(search.best_config, x, y);
        row.metrics = ComputeMetrics(SelectRows(ds.target(), test_rows),
                                     model.Predict(SelectRows(ds.features(), test_rows)));
      }
      row.search = std::move(search);
      row.ok = true;
    } catch (const Error& e) {
      row.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.progress) {
      options.progress(std::string(models::AlgorithmName(a)) +
                       (row.ok ? " MAPE " + FormatFixed(row.metrics.mape, 3) + "%"
                               : " failed: " + row.error));
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& row : report.rows) {
    if (row.ok && (!report.best || BetterOutcome(row, *report.Find(*report.best)))) {
      report.best = row.algorithm;
    }
  }
  if (!report.best) Fail(ErrorCode::kSearch, "every algorithm failed");
  return report;
}

std::string BenchmarkCsv(const BenchmarkReport& report) {
  std::string out = "metric";
  for (const auto& row : report.rows) out += "," + std::string(models::AlgorithmName(row.algorithm));
  out += "\n";
  const std::pair<const char*, double Metrics::*> lines[] = {
      {"MAE", &Metrics::mae}, {"MSE", &Metrics::mse}, {"MAPE", &Metrics::mape}};
  for (const auto& [name, field] : lines) {
    out += name;
    for (const auto& row : report.rows) {
      out += ",";
      if (row.ok) out += FormatDouble(row.metrics.*field);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json BenchmarkToJson(const BenchmarkReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json entry = {{"algorithm", models::AlgorithmName(row.algorithm)},
                            {"ok", row.ok}};
    if (row.ok) {
      entry["metrics"] = MetricsToJson(row.metrics);
      entry["rank"] = report.RankOf(row.algorithm);
      entry["search"] = SearchToJson(*row.search);
    } else {
      entry["error"] = row.error;
    }
    rows.push_back(std::move(entry));
  }
  return {{"seed", report.seed},
          {"folds", report.folds},
          {"rows_used", report.rows_used},
          {"holdout_rows", report.holdout_rows},
          {"selection_metric", MetricName(report.metric)},
          {"fold_plan_digest", report.fold_plan_digest},
          {"best_algorithm", report.best ? nlohmann::json(models::AlgorithmName(*report.best))
                                         : nlohmann::json(nullptr)},
          {"algorithms", std::move(rows)}};
}

}  // namespace gmvx::tuning
