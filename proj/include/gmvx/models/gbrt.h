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

#ifndef GMVX_MODELS_GBRT_H_
#define GMVX_MODELS_GBRT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/models/tree.h"

namespace gmvx::models {

// Least-squares gradient boosting: F_0 = mean(y), F_m = F_{m-1} + lr * h_m
// with h_m fitted to the residuals y - F_{m-1}.
struct GbrtModel {
  double initial = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;

  double Predict(std::span<const double> x) const {
    return Predict(x, trees.size());
  }
  // Uses only the first `stages` trees.
  double Predict(std::span<const double> x, std::size_t stages) const;
  Vector Predict(const Matrix& x) const { return Predict(x, trees.size()); }
  Vector Predict(const Matrix& x, std::size_t stages) const;
  bool operator==(const GbrtModel&) const = default;
};

GbrtModel FitGbrt(const Matrix& x, const Vector& y,
                  const Hyperparameters& params, std::uint64_t seed,
                  std::vector<std::string>* warnings);

nlohmann::json GbrtToJson(const GbrtModel& model);
GbrtModel GbrtFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_GBRT_H_
