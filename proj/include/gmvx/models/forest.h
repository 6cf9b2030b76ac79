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

#ifndef GMVX_MODELS_FOREST_H_
#define GMVX_MODELS_FOREST_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/models/tree.h"

namespace gmvx::models {

// Random forest and extra-trees share this payload; they differ only in the
// split mode and the bootstrap default.
struct ForestModel {
  std::vector<RegressionTree> trees;
  std::vector<std::uint64_t> tree_seeds;
  bool bootstrap = true;

  double Predict(std::span<const double> x) const;
  Vector Predict(const Matrix& x) const;
  bool operator==(const ForestModel&) const = default;
};

// Tree t is grown from Rng(DeriveSeed(seed, t)): a bootstrap resample of n
// rows when enabled, then the per-node feature draws.
ForestModel FitForest(const Matrix& x, const Vector& y,
                      const Hyperparameters& params, std::uint64_t seed,
                      SplitMode split_mode, std::vector<std::string>* warnings);

nlohmann::json ForestToJson(const ForestModel& model);
ForestModel ForestFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_FOREST_H_
