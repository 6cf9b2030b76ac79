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

#ifndef GMVX_TUNING_CROSS_VALIDATION_H_
#define GMVX_TUNING_CROSS_VALIDATION_H_

#include <cstddef>
#include <vector>

#include "gmvx/common/matrix.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/models/model_spec.h"
#include "gmvx/tuning/metrics.h"

namespace gmvx::tuning {

struct CvResult {
  std::vector<Metrics> folds;
  Metrics mean;
  Vector out_of_fold;  // prediction for every row from the fold holding it
};

// Throws kPlan when the plan does not describe x's rows or has an empty fold.
void CheckPlan(const dataset::FoldPlan& plan, std::size_t rows);

// Fits on each fold's complement and scores the held-out fold. Folds run in
// parallel; results do not depend on the thread count. MAPE is NaN for folds
// containing a zero target.
CvResult CrossValidate(const models::ModelSpec& spec, const Matrix& x,
                       const Vector& y, const dataset::FoldPlan& plan,
                       int threads = 0);

// Dataset overload; the dataset must already be on the transformed scale so
// that metrics refer to ln(GMV).
CvResult CrossValidate(const models::ModelSpec& spec, const dataset::Dataset& ds,
                       const dataset::FoldPlan& plan, int threads = 0);

// Held-out predictions of one fold.
Vector FitPredictFold(const models::ModelSpec& spec, const Matrix& x,
                      const Vector& y, const dataset::FoldPlan& plan,
                      std::size_t fold);

}  // namespace gmvx::tuning

#endif  // GMVX_TUNING_CROSS_VALIDATION_H_
