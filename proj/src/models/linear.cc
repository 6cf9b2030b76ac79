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

#include "gmvx/models/linear.h"

#include <cmath>

#include <Eigen/QR>

#include "gmvx/common/error.h"

namespace gmvx::models {

Vector LinearModel::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

LinearModel FitLinear(const Matrix& x, const Vector& y,
                      const Hyperparameters& params,
                      std::vector<std::string>* warnings) {
  const bool intercept = params.GetBool("fit_intercept", true);
  const bool normalize = params.GetBool("normalize", false);
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();

  Eigen::MatrixXd design = x;
  Vector target = y;
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(p);
  double y_mean = 0.0;
  if (intercept) {
    mean = x.colwise().mean();
    y_mean = y.mean();
    design.rowwise() -= mean;
    target.array() -= y_mean;
  }
  Eigen::RowVectorXd scale = Eigen::RowVectorXd::Ones(p);
  if (normalize) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double s = std::sqrt(design.col(j).squaredNorm() /
                                 static_cast<double>(n));
      if (s > 0.0) scale[j] = s;
    }
    design.array().rowwise() /= scale.array();
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  const Vector beta = cod.solve(target);

  LinearModel model;
  model.rank = static_cast<int>(cod.rank());
  if (model.rank < p && warnings != nullptr) {
    warnings->push_back("design matrix is rank deficient (rank " +
                        std::to_string(model.rank) + " of " +
                        std::to_string(p) + "); using the minimum-norm fit");
  }
  model.coef.resize(static_cast<std::size_t>(p));
  double offset = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double b = beta[j] / scale[j];
    model.coef[static_cast<std::size_t>(j)] = b;
    offset += mean[j] * b;
  }
  model.intercept = intercept ? y_mean - offset : 0.0;
  model.normalized = normalize;
  if (normalize) {
    model.column_mean.assign(mean.begin(), mean.end());
    model.column_scale.assign(scale.begin(), scale.end());
  }
  return model;
}

nlohmann::json LinearToJson(const LinearModel& model) {
  return {{"coef", model.coef},
          {"intercept", model.intercept},
          {"normalized", model.normalized},
          {"column_mean", model.column_mean},
          {"column_scale", model.column_scale},
          {"rank", model.rank}};
}

LinearModel LinearFromJson(const nlohmann::json& doc) {
  LinearModel model;
  try {
    model.coef = doc.at("coef").get<std::vector<double>>();
    model.intercept = doc.at("intercept").get<double>();
    model.normalized = doc.at("normalized").get<bool>();
    model.column_mean = doc.at("column_mean").get<std::vector<double>>();
    model.column_scale = doc.at("column_scale").get<std::vector<double>>();
    model.rank = doc.at("rank").get<int>();
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad linear model: ") + ex.what());
  }
  return model;
}

}  // namespace gmvx::models
