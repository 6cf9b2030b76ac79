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

#include "gmvx/explain/shap3d.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "gmvx/common/error.h"
#include "gmvx/models/neighbors.h"

namespace gmvx::explain {
namespace {

Vector Standardize(const Vector& v) {
  const double mean = v.mean();
  const double var = (v.array() - mean).square().mean();
  const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
  return (v.array() - mean) / sd;
}

// Mean of `values` over the k nearest points; `self`, when given, is always
// part of the neighborhood (it ties at distance zero with any duplicate).
double NeighborMean(const models::NeighborIndex& index,
                    std::span<const double> query, std::size_t k,
                    const Vector& values, std::size_t self) {
  std::vector<models::Neighbor> hits = index.Query(query, k);
  if (self != std::numeric_limits<std::size_t>::max() &&
      std::none_of(hits.begin(), hits.end(),
                   [&](const models::Neighbor& h) { return h.index == self; })) {
    hits.back() = {self, 0.0};
  }
  double sum = 0.0;
  for (const auto& h : hits) sum += values[static_cast<Eigen::Index>(h.index)];
  return sum / static_cast<double>(hits.size());
}

}  // namespace

ThresholdFit DetectThresholds(const Vector& grid_x, const Vector& grid_z) {
  if (grid_x.size() != grid_z.size()) {
    Fail(ErrorCode::kInvalidArgument, "threshold grid x and z differ in length");
  }
  const Eigen::Index g = grid_x.size();
  if (g < 6) {
    Fail(ErrorCode::kInsufficientData,
         "threshold detection needs at least 6 grid points, got " +
             std::to_string(g));
  }
  const double x0 = grid_x[0];
  const double span = grid_x[g - 1] - x0;
  if (!(span > 0.0)) {
    Fail(ErrorCode::kInsufficientData, "threshold grid has no x extent");
  }
  const Vector u = (grid_x.array() - x0) / span;

  ThresholdFit best;
  best.sse = std::numeric_limits<double>::infinity();
  Eigen::Vector4d best_beta = Eigen::Vector4d::Zero();
  Eigen::MatrixXd design(g, 4);
  design.col(0).setOnes();
  design.col(1) = u;
  for (Eigen::Index a = 1; a + 4 < g; ++a) {
    for (Eigen::Index b = a + 2; b + 2 < g; ++b) {
      design.col(2) = (u.array() - u[a]).max(0.0);
      design.col(3) = (u.array() - u[b]).max(0.0);
      const Eigen::Vector4d beta = design.colPivHouseholderQr().solve(grid_z);
      const double sse = (design * beta - grid_z).squaredNorm();
      if (sse < best.sse) {
        best.sse = sse;
        best.first_index = static_cast<std::size_t>(a);
        best.second_index = static_cast<std::size_t>(b);
        best_beta = beta;
      }
    }
  }
  best.first = grid_x[static_cast<Eigen::Index>(best.first_index)];
  best.second = grid_x[static_cast<Eigen::Index>(best.second_index)];
  best.slopes = {best_beta[1] / span, (best_beta[1] + best_beta[2]) / span,
                 (best_beta[1] + best_beta[2] + best_beta[3]) / span};

  const double sst = (grid_z.array() - grid_z.mean()).square().sum();
  best.r_squared = sst > 0.0 ? 1.0 - best.sse / sst : 1.0;
  const double reference = (grid_z.maxCoeff() - grid_z.minCoeff()) / span;
  const auto [lo, hi] = std::minmax_element(best.slopes.begin(), best.slopes.end());
  best.degenerate = reference == 0.0 || *hi - *lo <= 0.05 * reference;
  best.declining_tail = best.slopes[2] < 0.0;
  return best;
}

Shap3DSurface ComputeShap3D(const Vector& x, const Vector& y, const Vector& z,
                            const Shap3DOptions& options) {
  if (x.size() != y.size() || x.size() != z.size()) {
    Fail(ErrorCode::kInvalidArgument, "3D-SHAP inputs differ in length");
  }
  const auto n = static_cast<std::size_t>(x.size());
  if (n == 0) Fail(ErrorCode::kEmptyInput, "3D-SHAP needs at least one point");
  std::size_t k = options.k_neighbors;
  if (k == 0) {
    k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n)))));
  }
  if (k > n) {
    Fail(ErrorCode::kInvalidArgument,
         "k_neighbors (" + std::to_string(k) + ") exceeds the number of points (" +
             std::to_string(n) + ")");
  }

  Shap3DSurface s;
  s.x = x;
  s.y = y;
  s.z = z;
  s.k_neighbors = k;

  Matrix plane(x.size(), 2);
  plane.col(0) = Standardize(x);
  plane.col(1) = Standardize(y);
  const models::NeighborIndex index(plane, models::NeighborBackend::kKdTree);
  s.z_smoothed.resize(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    s.z_smoothed[static_cast<Eigen::Index>(i)] =
        NeighborMean(index, RowSpan(plane, static_cast<Eigen::Index>(i)), k, z, i);
  }

  if (options.grid_points > 0) {
    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    const std::size_t points = hi > lo ? options.grid_points : 1;
    Matrix line(x.size(), 1);
    line.col(0) = x;
    const models::NeighborIndex by_x(line, models::NeighborBackend::kKdTree);
    s.grid_x.resize(static_cast<Eigen::Index>(points));
    s.grid_z.resize(static_cast<Eigen::Index>(points));
    for (std::size_t g = 0; g < points; ++g) {
      const double at =
          points > 1 ? lo + (hi - lo) * static_cast<double>(g) /
                                static_cast<double>(points - 1)
                     : lo;
      s.grid_x[static_cast<Eigen::Index>(g)] = at;
      s.grid_z[static_cast<Eigen::Index>(g)] =
          NeighborMean(by_x, std::span<const double>(&at, 1), k, s.z_smoothed,
                       std::numeric_limits<std::size_t>::max());
    }
    if (points >= 6) {
      s.thresholds = DetectThresholds(s.grid_x, s.grid_z);
      s.has_thresholds = true;
    }
  }
  return s;
}

Shap3DSurface ComputeShap3D(const ShapMatrix& sm, const Matrix& features,
                            const Vector& target, std::size_t feature,
                            const Shap3DOptions& options) {
  if (sm.values.rows() != features.rows() || sm.values.cols() != features.cols() ||
      target.size() != features.rows()) {
    Fail(ErrorCode::kInvalidArgument,
         "SHAP matrix, features and target differ in shape");
  }
  if (feature >= static_cast<std::size_t>(features.cols())) {
    Fail(ErrorCode::kInvalidArgument,
         "feature index " + std::to_string(feature) + " out of range");
  }
  const auto j = static_cast<Eigen::Index>(feature);
  Shap3DSurface s = ComputeShap3D(features.col(j), target, sm.values.col(j), options);
  s.feature = feature;
  if (feature < sm.feature_names.size()) s.feature_name = sm.feature_names[feature];
  return s;
}

}  // namespace gmvx::explain
