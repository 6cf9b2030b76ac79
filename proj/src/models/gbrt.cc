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

#include "gmvx/models/gbrt.h"

#include <algorithm>
#include <numeric>

#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::models {

double GbrtModel::Predict(std::span<const double> x,
                          std::size_t stages) const {
  double f = initial;
  const std::size_t m = std::min(stages, trees.size());
  for (std::size_t i = 0; i < m; ++i) f += learning_rate * trees[i].Predict(x);
  return f;
}

Vector GbrtModel::Predict(const Matrix& x, std::size_t stages) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out[r] = Predict(RowSpan(x, r), stages);
  }
  return out;
}

GbrtModel FitGbrt(const Matrix& x, const Vector& y,
                  const Hyperparameters& params, std::uint64_t seed,
                  std::vector<std::string>* warnings) {
  const std::int64_t stages = params.GetInt("n_estimators", 100);
  if (stages < 0) Fail(ErrorCode::kInvalidArgument, "n_estimators must be >= 0");
  Hyperparameters tree_params = params;
  if (!tree_params.Has("max_depth")) tree_params.Set("max_depth", std::int64_t{3});
  const TreeGrowthParams growth =
      TreeParamsFromSpec(tree_params, MaxFeatures::kAll, warnings);

  GbrtModel model;
  model.learning_rate = params.GetDouble("learning_rate", 0.1);
  if (!(model.learning_rate > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  model.initial = y.mean();
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Vector f = Vector::Constant(y.size(), model.initial);
  for (std::int64_t m = 0; m < stages; ++m) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(m)));
    const Vector residual = y - f;
    model.trees.push_back(GrowTree(x, residual, rows, growth, rng));
    const RegressionTree& tree = model.trees.back();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      f[r] += model.learning_rate * tree.Predict(RowSpan(x, r));
    }
  }
  return model;
}

nlohmann::json GbrtToJson(const GbrtModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& t : model.trees) trees.push_back(TreeToJson(t));
  return {{"initial", model.initial},
          {"learning_rate", model.learning_rate},
          {"trees", std::move(trees)}};
}

GbrtModel GbrtFromJson(const nlohmann::json& doc) {
  GbrtModel model;
  try {
    model.initial = doc.at("initial").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    for (const auto& t : doc.at("trees")) model.trees.push_back(TreeFromJson(t));
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad gbrt model: ") + ex.what());
  }
  return model;
}

}  // namespace gmvx::models
