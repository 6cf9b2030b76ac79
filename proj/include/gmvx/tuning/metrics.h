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

#ifndef GMVX_TUNING_METRICS_H_
#define GMVX_TUNING_METRICS_H_

#include <span>
#include <string>
#include <string_view>

#include "gmvx/common/matrix.h"

namespace gmvx::tuning {

struct Metrics {
  double mae = 0.0;
  double mse = 0.0;
  double mape = 0.0;  // percent

  bool operator==(const Metrics&) const = default;
};

enum class MetricKind { kMae, kMse, kMape };
MetricKind ParseMetric(std::string_view name);
std::string_view MetricName(MetricKind kind);
double MetricValue(const Metrics& m, MetricKind kind);

// MAE, MSE and MAPE (in percent). A zero target makes MAPE undefined: with
// with_mape the row is reported as a kDomain error, otherwise mape is NaN.
Metrics ComputeMetrics(const Vector& y, const Vector& yhat,
                       bool with_mape = true);

// Unweighted average.
Metrics MeanMetrics(std::span<const Metrics> values);

}  // namespace gmvx::tuning

#endif  // GMVX_TUNING_METRICS_H_
