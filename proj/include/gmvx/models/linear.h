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

#ifndef GMVX_MODELS_LINEAR_H_
#define GMVX_MODELS_LINEAR_H_

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"

namespace gmvx::models {

// y = intercept + sum_j coef_j x_j. When the fit standardized its inputs the
// column means and scales are kept for reference; coef is always on the
// original scale.
struct LinearModel {
  std::vector<double> coef;
  double intercept = 0.0;
  bool normalized = false;
  std::vector<double> column_mean;
  std::vector<double> column_scale;
  int rank = 0;

  double Predict(std::span<const double> x) const {
    double f = intercept;
    for (std::size_t j = 0; j < coef.size(); ++j) f += coef[j] * x[j];
    return f;
  }
  Vector Predict(const Matrix& x) const;
  bool operator==(const LinearModel&) const = default;
};

// Least squares through a complete orthogonal decomposition, which yields the
// minimum-norm solution when the design is rank deficient (reported as a
// warning). fit_intercept centers the data; normalize divides each column by
// its standard deviation before solving. max_iter is accepted and ignored.
LinearModel FitLinear(const Matrix& x, const Vector& y,
                      const Hyperparameters& params,
                      std::vector<std::string>* warnings);

nlohmann::json LinearToJson(const LinearModel& model);
LinearModel LinearFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_LINEAR_H_
