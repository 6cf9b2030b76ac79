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

#include "gmvx/explain/ale.h"

#include <algorithm>
#include <cmath>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"

namespace gmvx::explain {
namespace {

double Quantile7(const std::vector<double>& sorted, double prob) {
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

// Bin k covers (edges[k], edges[k + 1]]; values at or below edges[0] fall
// into bin 0 and values above the last edge into the last bin.
std::size_t BinOf(const Vector& edges, double value) {
  const double* first = edges.data() + 1;
  const double* last = edges.data() + edges.size();
  const auto k = static_cast<std::size_t>(std::lower_bound(first, last, value) - first);
  return std::min(k, static_cast<std::size_t>(edges.size() - 2));
}

std::vector<std::size_t> CountBins(const Vector& edges, const Vector& column) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(edges.size() - 1), 0);
  for (Eigen::Index i = 0; i < column.size(); ++i) ++counts[BinOf(edges, column[i])];
  return counts;
}

Vector EraseAt(const Vector& v, Eigen::Index at) {
  Vector out(v.size() - 1);
  out << v.head(at), v.tail(v.size() - at - 1);
  return out;
}

}  // namespace

AleCurve ComputeAle(const Predictor& predict, const Matrix& x,
                    std::size_t feature, const AleOptions& options,
                    std::string feature_name) {
  if (x.rows() == 0) Fail(ErrorCode::kEmptyInput, "ALE needs at least one row");
  if (feature >= static_cast<std::size_t>(x.cols())) {
    Fail(ErrorCode::kInvalidArgument,
         "feature index " + std::to_string(feature) + " out of range");
  }
  if (options.bins < 2) {
    Fail(ErrorCode::kInvalidArgument, "ALE needs at least 2 bins");
  }
  const auto j = static_cast<Eigen::Index>(feature);
  const Vector column = x.col(j);
  std::vector<double> sorted(column.data(), column.data() + column.size());
  std::sort(sorted.begin(), sorted.end());

  AleCurve curve;
  curve.feature = feature;
  curve.feature_name = std::move(feature_name);
  curve.requested_bins = options.bins;

  std::vector<double> uniq = sorted;
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  if (uniq.size() < 2) {
    Fail(ErrorCode::kDegenerate,
         "feature " + (curve.feature_name.empty() ? std::to_string(feature)
                                                   : curve.feature_name) +
             " is constant; its ALE curve is undefined");
  }
  std::size_t k_bins = options.bins;
  if (uniq.size() < k_bins) {
    k_bins = uniq.size() - 1;
    curve.notes.push_back("feature has " + std::to_string(uniq.size()) +
                          " distinct values; bins reduced from " +
                          std::to_string(options.bins) + " to " +
                          std::to_string(k_bins));
  }

  std::vector<double> edges;
  for (std::size_t i = 0; i <= k_bins; ++i) {
    edges.push_back(Quantile7(sorted, static_cast<double>(i) /
                                          static_cast<double>(k_bins)));
  }
  const std::size_t before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() < before) {
    curve.notes.push_back("dropped " + std::to_string(before - edges.size()) +
                          " repeated quantile edges");
  }
  curve.edges = Eigen::Map<const Vector>(edges.data(),
                                         static_cast<Eigen::Index>(edges.size()));

  curve.counts = CountBins(curve.edges, column);
  for (std::size_t k = 0; k < curve.counts.size();) {
    if (curve.counts[k] > 0) {
      ++k;
      continue;
    }
    const bool last = k + 1 == curve.counts.size();
    const auto drop = static_cast<Eigen::Index>(last ? k : k + 1);
    curve.notes.push_back("merged empty bin (" +
                          FormatDouble(curve.edges[static_cast<Eigen::Index>(k)]) +
                          ", " +
                          FormatDouble(curve.edges[static_cast<Eigen::Index>(k + 1)]) +
                          "] into a neighbor");
    curve.edges = EraseAt(curve.edges, drop);
    curve.counts = CountBins(curve.edges, column);
    k = 0;
  }
  const std::size_t bins = curve.counts.size();

  // Finite differences across each row's own bin.
  Matrix upper = x;
  Matrix lower = x;
  std::vector<std::size_t> bin_of(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const std::size_t k = BinOf(curve.edges, column[i]);
    bin_of[static_cast<std::size_t>(i)] = k;
    lower(i, j) = curve.edges[static_cast<Eigen::Index>(k)];
    upper(i, j) = curve.edges[static_cast<Eigen::Index>(k + 1)];
  }
  const Vector f_upper = predict(upper);
  const Vector f_lower = predict(lower);
  curve.local_effects = Vector::Zero(static_cast<Eigen::Index>(bins));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    curve.local_effects[static_cast<Eigen::Index>(bin_of[static_cast<std::size_t>(i)])] +=
        f_upper[i] - f_lower[i];
  }
  Vector accumulated(static_cast<Eigen::Index>(bins));
  double running = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const auto ke = static_cast<Eigen::Index>(k);
    curve.local_effects[ke] /= static_cast<double>(curve.counts[k]);
    running += curve.local_effects[ke];
    accumulated[ke] = running;
    weighted += static_cast<double>(curve.counts[k]) * running;
  }
  curve.offset = weighted / static_cast<double>(x.rows());
  curve.centered = accumulated.array() - curve.offset;

  if (options.trajectory_rows > 0) {
    const auto n = static_cast<std::size_t>(x.rows());
    const std::size_t m = std::min(options.trajectory_rows, n);
    const auto width = static_cast<Eigen::Index>(bins + 1);
    Matrix grid(static_cast<Eigen::Index>(m) * width, x.cols());
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t row = r * n / m;
      curve.trajectory_row_ids.push_back(row);
      for (Eigen::Index k = 0; k < width; ++k) {
        const Eigen::Index at = static_cast<Eigen::Index>(r) * width + k;
        grid.row(at) = x.row(static_cast<Eigen::Index>(row));
        grid(at, j) = curve.edges[k];
      }
    }
    const Vector f = predict(grid);
    curve.trajectories.resize(static_cast<Eigen::Index>(m), width);
    for (std::size_t r = 0; r < m; ++r) {
      const Eigen::Index base = static_cast<Eigen::Index>(r) * width;
      double mean = 0.0;
      for (Eigen::Index k = 0; k < width; ++k) {
        curve.trajectories(static_cast<Eigen::Index>(r), k) = f[base + k] - f[base];
        if (k > 0) {
          mean += static_cast<double>(curve.counts[static_cast<std::size_t>(k - 1)]) *
                  (f[base + k] - f[base]);
        }
      }
      mean /= static_cast<double>(n);
      curve.trajectories.row(static_cast<Eigen::Index>(r)).array() -= mean;
    }
  }
  return curve;
}

double AleValueAt(const AleCurve& curve, double value) {
  return curve.centered[static_cast<Eigen::Index>(BinOf(curve.edges, value))];
}

}  // namespace gmvx::explain
