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

#ifndef GMVX_EXPLAIN_IMPORTANCE_H_
#define GMVX_EXPLAIN_IMPORTANCE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gmvx/dataset/dataset.h"
#include "gmvx/explain/shapley.h"
#include "gmvx/models/model_spec.h"

namespace gmvx::explain {

struct GlobalImportance {
  std::vector<std::string> feature_names;
  Vector sum_abs;   // ranking key
  Vector mean_abs;
  // Feature indices by descending sum_abs; ties keep feature order.
  std::vector<std::size_t> ranking;
  std::size_t samples = 0;
};

GlobalImportance ComputeGlobalImportance(const ShapMatrix& sm);

struct GroupImportanceOptions {
  double train_ratio = 0.9;
  std::uint64_t seed = 0;
  std::size_t background_rows = 500;
  ShapOptions shap;
};

struct GroupImportance {
  GlobalImportance female;
  GlobalImportance male;
  std::size_t female_rows = 0;
  std::size_t male_rows = 0;
  std::size_t female_test_rows = 0;
  std::size_t male_test_rows = 0;
};

// For each group: seeded train/test split, refit `spec` on the training
// part, explain the test part against a training background. Both groups
// use the same seed streams, so identical row sets give identical results.
// Groups under 10 rows are a kDegenerate error.
GroupImportance ComputeGroupImportance(const models::ModelSpec& spec,
                                       const dataset::Dataset& ds,
                                       const dataset::GroupSplit& split,
                                       const GroupImportanceOptions& options);

struct SummaryPoint {
  std::size_t row = 0;
  std::size_t feature = 0;
  double value = 0.0;
  double quantile = 0.0;  // within-feature rank in [0, 1]
  double phi = 0.0;
};

struct SummaryPoints {
  std::vector<std::string> feature_names;
  // Features by global importance, most important first.
  std::vector<std::size_t> feature_order;
  // Grouped by feature in feature_order, rows ascending within a feature.
  std::vector<SummaryPoint> points;
};

// Midrank quantiles: (rank - 1) / (n - 1) with ties sharing their average
// rank, so a constant column maps to 0.5. A single row maps to 0.5.
Vector RankQuantiles(const Vector& column);

SummaryPoints ComputeSummaryPoints(const ShapMatrix& sm, const Matrix& x);

}  // namespace gmvx::explain

#endif  // GMVX_EXPLAIN_IMPORTANCE_H_
