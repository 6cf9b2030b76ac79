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

#include "gmvx/models/forest.h"

#include <numeric>

#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/common/random.h"

namespace gmvx::models {

double ForestModel::Predict(std::span<const double> x) const {
  double sum = 0.0;
  for (const RegressionTree& tree : trees) sum += tree.Predict(x);
  return sum / static_cast<double>(trees.size());
}

Vector ForestModel::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

ForestModel FitForest(const Matrix& x, const Vector& y,
                      const Hyperparameters& params, std::uint64_t seed,
                      SplitMode split_mode, std::vector<std::string>* warnings) {
  const std::int64_t count = params.GetInt("n_estimators", 100);
  if (count < 1) Fail(ErrorCode::kInvalidArgument, "n_estimators must be >= 1");
  TreeGrowthParams growth =
      TreeParamsFromSpec(params, MaxFeatures::kSqrt, warnings);
  growth.split_mode = split_mode;
  ForestModel model;
  model.bootstrap =
      params.GetBool("bootstrap", split_mode == SplitMode::kBest);
  const auto n = static_cast<std::size_t>(x.rows());
  const auto trees = static_cast<std::size_t>(count);
  model.trees.resize(trees);
  model.tree_seeds.resize(trees);
  ParallelFor(trees, [&](std::size_t t) {
    const std::uint64_t tree_seed = DeriveSeed(seed, t);
    Rng rng(tree_seed);
    std::vector<std::size_t> rows(n);
    if (model.bootstrap) {
      for (auto& r : rows) r = rng.Below(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees[t] = GrowTree(x, y, rows, growth, rng);
    model.tree_seeds[t] = tree_seed;
  });
  return model;
}

nlohmann::json ForestToJson(const ForestModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& t : model.trees) trees.push_back(TreeToJson(t));
  return {{"bootstrap", model.bootstrap},
          {"tree_seeds", model.tree_seeds},
          {"trees", std::move(trees)}};
}

ForestModel ForestFromJson(const nlohmann::json& doc) {
  ForestModel model;
  try {
    model.bootstrap = doc.at("bootstrap").get<bool>();
    model.tree_seeds = doc.at("tree_seeds").get<std::vector<std::uint64_t>>();
    for (const auto& t : doc.at("trees")) model.trees.push_back(TreeFromJson(t));
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad forest: ") + ex.what());
  }
  if (model.trees.empty() || model.trees.size() != model.tree_seeds.size()) {
    Fail(ErrorCode::kParse, "forest tree and seed counts differ");
  }
  return model;
}

}  // namespace gmvx::models
