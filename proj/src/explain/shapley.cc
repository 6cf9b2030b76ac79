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

#include "gmvx/explain/shapley.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/common/random.h"

namespace gmvx::explain {
namespace {

void CheckInputs(std::span<const double> x, const Matrix& background) {
  if (background.rows() == 0) {
    Fail(ErrorCode::kEmptyInput, "Shapley background has no rows");
  }
  if (static_cast<std::size_t>(background.cols()) != x.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "sample has " + std::to_string(x.size()) +
             " features but the background has " +
             std::to_string(background.cols()));
  }
}

double Mean(const Vector& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v[i];
  return s / static_cast<double>(v.size());
}

void CheckExactSize(std::size_t p) {
  if (p > kMaxExactFeatures) {
    Fail(ErrorCode::kCapability,
         "exact Shapley values support at most " +
             std::to_string(kMaxExactFeatures) + " features (got " +
             std::to_string(p) + "); use the sampled method");
  }
}

}  // namespace

Predictor ModelPredictor(const models::FittedModel& model) {
  return [&model](const Matrix& x) { return model.Predict(x); };
}

ShapMethod ParseShapMethod(std::string_view name) {
  if (name == "exact") return ShapMethod::kExact;
  if (name == "sampled") return ShapMethod::kSampled;
  Fail(ErrorCode::kInvalidArgument, "unknown SHAP method '" +
                                        std::string(name) +
                                        "' (expected exact or sampled)");
}

std::string_view ShapMethodName(ShapMethod method) {
  return method == ShapMethod::kExact ? "exact" : "sampled";
}

ShapleyValues ShapleyExact(const Predictor& predict, std::span<const double> x,
                           const Matrix& background) {
  CheckInputs(x, background);
  const std::size_t p = x.size();
  CheckExactSize(p);
  const std::size_t subsets = std::size_t{1} << p;

  std::vector<double> value(subsets);
  Matrix composite(background.rows(), background.cols());
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    composite = background;
    for (std::size_t j = 0; j < p; ++j) {
      if (mask >> j & 1) {
        composite.col(static_cast<Eigen::Index>(j)).setConstant(x[j]);
      }
    }
    value[mask] = Mean(predict(composite));
  }

  // |S|!(p-|S|-1)!/p! = 1 / (p * C(p-1, |S|)).
  std::vector<double> weight(p);
  double binom = 1.0;
  for (std::size_t s = 0; s < p; ++s) {
    weight[s] = 1.0 / (static_cast<double>(p) * binom);
    binom = binom * static_cast<double>(p - 1 - s) / static_cast<double>(s + 1);
  }

  ShapleyValues out;
  out.phi = Vector::Zero(static_cast<Eigen::Index>(p));
  out.base_value = value[0];
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      phi += weight[static_cast<std::size_t>(std::popcount(mask))] *
             (value[mask | bit] - value[mask]);
    }
    out.phi[static_cast<Eigen::Index>(j)] = phi;
  }
  return out;
}

ShapleyValues ShapleySampled(const Predictor& predict,
                             std::span<const double> x,
                             const Matrix& background,
                             std::size_t n_permutations, std::uint64_t seed) {
  CheckInputs(x, background);
  if (n_permutations < 1) {
    Fail(ErrorCode::kInvalidArgument, "n_permutations must be at least 1");
  }
  const std::size_t p = x.size();
  const auto pe = static_cast<Eigen::Index>(p);
  constexpr std::size_t kChunk = 64;

  Rng rng(seed);
  std::vector<std::size_t> order(p);
  std::vector<std::size_t> orders;
  Vector mean = Vector::Zero(pe);
  Vector m2 = Vector::Zero(pe);
  std::size_t seen = 0;

  for (std::size_t start = 0; start < n_permutations; start += kChunk) {
    const std::size_t count = std::min(kChunk, n_permutations - start);
    Matrix walk(static_cast<Eigen::Index>(count * (p + 1)), pe);
    orders.assign(count * p, 0);
    for (std::size_t m = 0; m < count; ++m) {
      const auto b = static_cast<Eigen::Index>(
          rng.Below(static_cast<std::size_t>(background.rows())));
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.Shuffle(std::span<std::size_t>(order));
      std::copy(order.begin(), order.end(), orders.begin() + m * p);
      auto row = static_cast<Eigen::Index>(m * (p + 1));
      walk.row(row) = background.row(b);
      for (std::size_t t = 0; t < p; ++t, ++row) {
        walk.row(row + 1) = walk.row(row);
        walk(row + 1, static_cast<Eigen::Index>(order[t])) = x[order[t]];
      }
    }
    const Vector pred = predict(walk);
    for (std::size_t m = 0; m < count; ++m) {
      ++seen;
      const auto base = static_cast<Eigen::Index>(m * (p + 1));
      for (std::size_t t = 0; t < p; ++t) {
        const auto j = static_cast<Eigen::Index>(orders[m * p + t]);
        const auto at = base + static_cast<Eigen::Index>(t);
        const double c = pred[at + 1] - pred[at];
        const double delta = c - mean[j];
        mean[j] += delta / static_cast<double>(seen);
        m2[j] += delta * (c - mean[j]);
      }
    }
  }

  ShapleyValues out;
  out.phi = mean;
  out.base_value = Mean(predict(background));
  out.std_error.resize(pe);
  const auto n = static_cast<double>(n_permutations);
  for (Eigen::Index j = 0; j < pe; ++j) {
    out.std_error[j] = n_permutations > 1
                           ? std::sqrt(m2[j] / (n - 1.0) / n)
                           : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

ShapMatrix ComputeShapMatrix(const Predictor& predict, const Matrix& x,
                             const Matrix& background,
                             std::vector<std::string> feature_names,
                             const ShapOptions& options) {
  const auto p = static_cast<std::size_t>(x.cols());
  if (feature_names.size() != p) {
    Fail(ErrorCode::kInvalidArgument, "feature name count does not match");
  }
  if (background.rows() == 0) {
    Fail(ErrorCode::kEmptyInput, "Shapley background has no rows");
  }
  if (background.cols() != x.cols()) {
    Fail(ErrorCode::kInvalidArgument,
         "background and samples differ in feature count");
  }
  if (options.method == ShapMethod::kExact) CheckExactSize(p);
  if (options.method == ShapMethod::kSampled && options.n_permutations < 1) {
    Fail(ErrorCode::kInvalidArgument, "n_permutations must be at least 1");
  }

  ShapMatrix sm;
  sm.feature_names = std::move(feature_names);
  sm.method = options.method;
  sm.seed = options.seed;
  sm.background_rows = static_cast<std::size_t>(background.rows());
  sm.values.resize(x.rows(), x.cols());
  if (options.method == ShapMethod::kSampled) {
    sm.n_permutations = options.n_permutations;
    sm.std_errors.resize(x.rows(), x.cols());
  }
  sm.base_value = Mean(predict(background));

  ParallelFor(
      static_cast<std::size_t>(x.rows()),
      [&](std::size_t i) {
        const auto r = static_cast<Eigen::Index>(i);
        if (options.method == ShapMethod::kExact) {
          sm.values.row(r) = ShapleyExact(predict, RowSpan(x, r), background)
                                 .phi.transpose();
        } else {
          const ShapleyValues v =
              ShapleySampled(predict, RowSpan(x, r), background,
                             options.n_permutations,
                             DeriveSeed(options.seed, i));
          sm.values.row(r) = v.phi.transpose();
          sm.std_errors.row(r) = v.std_error.transpose();
        }
      },
      options.threads);
  return sm;
}

ShapMatrix ComputeShapMatrix(const models::FittedModel& model,
                             const dataset::Dataset& ds,
                             const Matrix& background,
                             const ShapOptions& options) {
  if (model.num_features() != ds.cols()) {
    Fail(ErrorCode::kInvalidArgument,
         "model expects " + std::to_string(model.num_features()) +
             " features but the data has " + std::to_string(ds.cols()));
  }
  return ComputeShapMatrix(ModelPredictor(model), ds.features(), background,
                           ds.schema().predictor_names(), options);
}

Matrix SampleBackground(const Matrix& x, std::size_t max_rows,
                        std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (max_rows == 0 || n <= max_rows) return x;
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(rows));
  rows.resize(max_rows);
  std::sort(rows.begin(), rows.end());
  return SelectRows(x, rows);
}

}  // namespace gmvx::explain
