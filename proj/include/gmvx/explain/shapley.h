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

#ifndef GMVX_EXPLAIN_SHAPLEY_H_
#define GMVX_EXPLAIN_SHAPLEY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmvx/common/matrix.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/models/fitted_model.h"

namespace gmvx::explain {

// Batch prediction: one output per row of the input.
using Predictor = std::function<Vector(const Matrix&)>;

Predictor ModelPredictor(const models::FittedModel& model);

enum class ShapMethod { kExact, kSampled };
ShapMethod ParseShapMethod(std::string_view name);
std::string_view ShapMethodName(ShapMethod method);

// Subset enumeration costs 2^p background passes per sample.
inline constexpr std::size_t kMaxExactFeatures = 15;

struct ShapleyValues {
  Vector phi;
  double base_value = 0.0;
  // Standard error of each sampled phi; empty for exact values.
  Vector std_error;
};

// The value of a coalition S is the mean prediction over background rows
// with the features in S replaced by the sample's values. base_value is the
// value of the empty coalition.
ShapleyValues ShapleyExact(const Predictor& predict, std::span<const double> x,
                           const Matrix& background);

// Permutation estimator of the same quantity. Every permutation draws one
// background row and walks the ordering, adding the sample's features one
// at a time; phi_j is the mean marginal contribution of feature j.
ShapleyValues ShapleySampled(const Predictor& predict,
                             std::span<const double> x,
                             const Matrix& background,
                             std::size_t n_permutations, std::uint64_t seed);

struct ShapOptions {
  ShapMethod method = ShapMethod::kSampled;
  std::size_t n_permutations = 100;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct ShapMatrix {
  std::vector<std::string> feature_names;
  Matrix values;      // one row per explained sample
  Matrix std_errors;  // sampled only
  double base_value = 0.0;
  ShapMethod method = ShapMethod::kExact;
  std::size_t n_permutations = 0;
  std::uint64_t seed = 0;
  std::size_t background_rows = 0;
};

// Row i is explained with seed DeriveSeed(options.seed, i).
ShapMatrix ComputeShapMatrix(const Predictor& predict, const Matrix& x,
                             const Matrix& background,
                             std::vector<std::string> feature_names,
                             const ShapOptions& options);
ShapMatrix ComputeShapMatrix(const models::FittedModel& model,
                             const dataset::Dataset& ds,
                             const Matrix& background,
                             const ShapOptions& options);

// Seeded subsample of at most max_rows rows (all rows, in order, when the
// matrix is small enough).
Matrix SampleBackground(const Matrix& x, std::size_t max_rows,
                        std::uint64_t seed);

}  // namespace gmvx::explain

#endif  // GMVX_EXPLAIN_SHAPLEY_H_
