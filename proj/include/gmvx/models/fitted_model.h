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

#ifndef GMVX_MODELS_FITTED_MODEL_H_
#define GMVX_MODELS_FITTED_MODEL_H_

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/adaboost.h"
#include "gmvx/models/forest.h"
#include "gmvx/models/gbrt.h"
#include "gmvx/models/knn.h"
#include "gmvx/models/linear.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/models/svr.h"
#include "gmvx/models/tree.h"

namespace gmvx::models {

using ModelPayload = std::variant<RegressionTree, ForestModel, SvrModel,
                                  LinearModel, KnnModel, AdaBoostModel,
                                  GbrtModel>;

// An immutable trained model. Safe to share across threads.
class FittedModel {
 public:
  FittedModel(ModelSpec spec, std::size_t num_features, ModelPayload payload,
              std::vector<std::string> warnings = {});

  const ModelSpec& spec() const { return spec_; }
  Algorithm algorithm() const { return spec_.algorithm; }
  std::size_t num_features() const { return num_features_; }
  const ModelPayload& payload() const { return payload_; }
  template <typename T>
  const T& as() const {
    return std::get<T>(payload_);
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Throws kInvalidArgument when x has the wrong number of columns.
  Vector Predict(const Matrix& x) const;
  double PredictRow(std::span<const double> x) const;

 private:
  ModelSpec spec_;
  std::size_t num_features_;
  ModelPayload payload_;
  std::vector<std::string> warnings_;
};

// Validates the spec and dispatches to the algorithm's fitter. Throws
// kInvalidArgument for empty or mismatched inputs.
FittedModel Fit(const ModelSpec& spec, const Matrix& x, const Vector& y);

nlohmann::json ModelToJson(const FittedModel& model);
FittedModel ModelFromJson(const nlohmann::json& doc);
void SaveModel(const FittedModel& model, const std::string& path);
FittedModel LoadModel(const std::string& path);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_FITTED_MODEL_H_
