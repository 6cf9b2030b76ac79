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

#include "gmvx/tuning/cross_validation.h"

#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/models/fitted_model.h"

namespace gmvx::tuning {

void CheckPlan(const dataset::FoldPlan& plan, std::size_t rows) {
  if (plan.n != rows) {
    Fail(ErrorCode::kPlan, "fold plan covers " + std::to_string(plan.n) +
                               " rows but the data has " + std::to_string(rows));
  }
  if (plan.folds.size() < 2) Fail(ErrorCode::kPlan, "fold plan needs >= 2 folds");
  std::vector<int> seen(rows, 0);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    if (plan.folds[f].empty()) {
      Fail(ErrorCode::kPlan, "fold " + std::to_string(f + 1) + " has no rows");
    }
    for (std::size_t i : plan.folds[f]) {
      if (i >= rows || seen[i]++ > 0) {
        Fail(ErrorCode::kPlan, "fold plan is not a partition of the rows");
      }
    }
  }
  for (int s : seen) {
    if (s != 1) Fail(ErrorCode::kPlan, "fold plan does not cover every row");
  }
}

Vector FitPredictFold(const models::ModelSpec& spec, const Matrix& x,
                      const Vector& y, const dataset::FoldPlan& plan,
                      std::size_t fold) {
  const std::vector<std::size_t> train = plan.TrainIndices(fold);
  const models::FittedModel model =
      models::Fit(spec, SelectRows(x, train), SelectRows(y, train));
  return model.Predict(SelectRows(x, plan.folds[fold]));
}

CvResult CrossValidate(const models::ModelSpec& spec, const Matrix& x,
                       const Vector& y, const dataset::FoldPlan& plan,
                       int threads) {
  const auto n = static_cast<std::size_t>(x.rows());
  CheckPlan(plan, n);
  std::vector<Vector> predictions(plan.folds.size());
  ParallelFor(
      plan.folds.size(),
      [&](std::size_t f) { predictions[f] = FitPredictFold(spec, x, y, plan, f); },
      threads);
  CvResult result;
  result.out_of_fold = Vector::Zero(x.rows());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& rows = plan.folds[f];
    result.folds.push_back(
        ComputeMetrics(SelectRows(y, rows), predictions[f], /*with_mape=*/false));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      result.out_of_fold[static_cast<Eigen::Index>(rows[i])] =
          predictions[f][static_cast<Eigen::Index>(i)];
    }
  }
  result.mean = MeanMetrics(result.folds);
  return result;
}

CvResult CrossValidate(const models::ModelSpec& spec, const dataset::Dataset& ds,
                       const dataset::FoldPlan& plan, int threads) {
  if (ds.scale() != dataset::Scale::kTransformed) {
    Fail(ErrorCode::kInvalidArgument,
         "cross-validation expects transformed data (metrics are on ln GMV)");
  }
  return CrossValidate(spec, ds.features(), ds.target(), plan, threads);
}

}  // namespace gmvx::tuning
