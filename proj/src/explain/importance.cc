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

#include "gmvx/explain/importance.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::explain {
namespace {

struct GroupRun {
  GlobalImportance importance;
  std::size_t test_rows = 0;
};

GroupRun ExplainGroup(const models::ModelSpec& spec, const dataset::Dataset& ds,
                      std::vector<std::size_t> rows, const char* label,
                      const GroupImportanceOptions& options) {
  if (rows.size() < 10) {
    Fail(ErrorCode::kDegenerate,
         std::string(label) + " group has " + std::to_string(rows.size()) +
             " rows; at least 10 are needed for a train/test split");
  }
  Rng rng(DeriveSeed(options.seed, 0));
  rng.Shuffle(std::span<std::size_t>(rows));
  const auto n = static_cast<double>(rows.size());
  const auto n_test = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(n * (1.0 - options.train_ratio))),
      1, rows.size() - 1);
  std::vector<std::size_t> test(rows.begin(),
                                rows.begin() + static_cast<long>(n_test));
  std::vector<std::size_t> train(rows.begin() + static_cast<long>(n_test),
                                 rows.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  const Matrix train_x = SelectRows(ds.features(), train);
  const models::FittedModel model =
      models::Fit(spec, train_x, SelectRows(ds.target(), train));
  const Matrix background = SampleBackground(
      train_x, options.background_rows, DeriveSeed(options.seed, 1));
  const ShapMatrix sm = ComputeShapMatrix(
      ModelPredictor(model), SelectRows(ds.features(), test), background,
      ds.schema().predictor_names(), options.shap);
  return {ComputeGlobalImportance(sm), test.size()};
}

}  // namespace

GlobalImportance ComputeGlobalImportance(const ShapMatrix& sm) {
  const auto p = sm.values.cols();
  GlobalImportance g;
  g.feature_names = sm.feature_names;
  g.samples = static_cast<std::size_t>(sm.values.rows());
  g.sum_abs = Vector::Zero(p);
  for (Eigen::Index i = 0; i < sm.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) g.sum_abs[j] += std::abs(sm.values(i, j));
  }
  g.mean_abs = g.samples > 0 ? Vector(g.sum_abs / static_cast<double>(g.samples))
                             : Vector(Vector::Zero(p));
  g.ranking.resize(static_cast<std::size_t>(p));
  std::iota(g.ranking.begin(), g.ranking.end(), std::size_t{0});
  std::stable_sort(g.ranking.begin(), g.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return g.sum_abs[static_cast<Eigen::Index>(a)] >
                            g.sum_abs[static_cast<Eigen::Index>(b)];
                   });
  return g;
}

GroupImportance ComputeGroupImportance(const models::ModelSpec& spec,
                                       const dataset::Dataset& ds,
                                       const dataset::GroupSplit& split,
                                       const GroupImportanceOptions& options) {
  if (ds.scale() != dataset::Scale::kTransformed) {
    Fail(ErrorCode::kInvalidArgument,
         "group importance needs transformed data");
  }
  if (!(options.train_ratio > 0.0 && options.train_ratio < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "train_ratio must lie in (0, 1)");
  }
  GroupImportance out;
  out.female_rows = split.female.size();
  out.male_rows = split.male.size();
  GroupRun female = ExplainGroup(spec, ds, split.female, "female", options);
  GroupRun male = ExplainGroup(spec, ds, split.male, "male", options);
  out.female = std::move(female.importance);
  out.female_test_rows = female.test_rows;
  out.male = std::move(male.importance);
  out.male_test_rows = male.test_rows;
  return out;
}

Vector RankQuantiles(const Vector& column) {
  const auto n = static_cast<std::size_t>(column.size());
  Vector q(column.size());
  if (n == 1) {
    q[0] = 0.5;
    return q;
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return column[static_cast<Eigen::Index>(a)] <
           column[static_cast<Eigen::Index>(b)];
  });
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && column[static_cast<Eigen::Index>(idx[hi])] ==
                         column[static_cast<Eigen::Index>(idx[lo])]) {
      ++hi;
    }
    // Zero-based midrank of positions lo..hi-1.
    const double mid = (static_cast<double>(lo) + static_cast<double>(hi - 1)) / 2.0;
    for (std::size_t t = lo; t < hi; ++t) {
      q[static_cast<Eigen::Index>(idx[t])] = mid / static_cast<double>(n - 1);
    }
    lo = hi;
  }
  return q;
}

SummaryPoints ComputeSummaryPoints(const ShapMatrix& sm, const Matrix& x) {
  if (sm.values.rows() != x.rows() || sm.values.cols() != x.cols()) {
    Fail(ErrorCode::kInvalidArgument,
         "SHAP matrix and feature matrix differ in shape");
  }
  SummaryPoints out;
  out.feature_names = sm.feature_names;
  out.feature_order = ComputeGlobalImportance(sm).ranking;
  out.points.reserve(static_cast<std::size_t>(x.rows() * x.cols()));
  for (std::size_t j : out.feature_order) {
    const auto c = static_cast<Eigen::Index>(j);
    const Vector q = RankQuantiles(x.col(c));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out.points.push_back({static_cast<std::size_t>(i), j, x(i, c), q[i],
                            sm.values(i, c)});
    }
  }
  return out;
}

}  // namespace gmvx::explain
