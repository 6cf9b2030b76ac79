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

#ifndef GMVX_MODELS_KNN_H_
#define GMVX_MODELS_KNN_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/models/neighbors.h"

namespace gmvx::models {

enum class KnnWeights { kUniform, kDistance };

// Stores the training set. The prediction is the mean of the k nearest
// targets, or their 1/d weighted mean; under 1/d weighting a query at zero
// distance from some training points returns the mean of their targets.
struct KnnModel {
  std::shared_ptr<const NeighborIndex> index;
  Vector targets;
  std::size_t k = 5;
  KnnWeights weights = KnnWeights::kUniform;

  double Predict(std::span<const double> x) const;
  Vector Predict(const Matrix& x) const;
  bool operator==(const KnnModel& other) const;
};

KnnModel FitKnn(const Matrix& x, const Vector& y, const Hyperparameters& params);

nlohmann::json KnnToJson(const KnnModel& model);
KnnModel KnnFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_KNN_H_
