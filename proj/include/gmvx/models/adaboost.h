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

#ifndef GMVX_MODELS_ADABOOST_H_
#define GMVX_MODELS_ADABOOST_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/models/tree.h"

namespace gmvx::models {

enum class BoostLoss { kLinear, kSquare, kExponential };
BoostLoss ParseBoostLoss(const std::string& name);
std::string_view BoostLossName(BoostLoss loss);

// AdaBoost.R2 with shallow trees. The prediction is the weighted median of
// the stage outputs, stage k weighing lr * ln(1 / alpha_k).
struct AdaBoostModel {
  std::vector<RegressionTree> stages;
  std::vector<double> alphas;         // each in (0, 1)
  std::vector<double> stage_weights;  // lr * ln(1 / alpha)
  std::vector<bool> capped;           // alpha was clamped into (0, 1)

  double Predict(std::span<const double> x) const;
  Vector Predict(const Matrix& x) const;
  bool operator==(const AdaBoostModel&) const = default;
};

// Sample weights after each completed reweighting, for inspection.
struct AdaBoostTrace {
  std::vector<Vector> weights;
};

// Each stage resamples n rows with probability proportional to the current
// weights (Rng(DeriveSeed(seed, k))) and fits a tree of depth max_depth
// (default 1). Per-row errors are scaled by the largest error and shaped by
// the loss; the weighted mean error L decides alpha = L / (1 - L). Boosting
// stops at the first stage with L >= 0.5 (kept only when it is the first),
// or after a perfect stage.
AdaBoostModel FitAdaBoost(const Matrix& x, const Vector& y,
                          const Hyperparameters& params, std::uint64_t seed,
                          std::vector<std::string>* warnings,
                          AdaBoostTrace* trace = nullptr);

nlohmann::json AdaBoostToJson(const AdaBoostModel& model);
AdaBoostModel AdaBoostFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_ADABOOST_H_
