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

#include "gmvx/tuning/metrics.h"

#include <cmath>
#include <limits>

#include "gmvx/common/error.h"

namespace gmvx::tuning {

MetricKind ParseMetric(std::string_view name) {
  if (name == "mae" || name == "MAE") return MetricKind::kMae;
  if (name == "mse" || name == "MSE") return MetricKind::kMse;
  if (name == "mape" || name == "MAPE") return MetricKind::kMape;
  Fail(ErrorCode::kInvalidArgument,
       "unknown metric '" + std::string(name) + "' (expected mae, mse or mape)");
}

std::string_view MetricName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kMae: return "mae";
    case MetricKind::kMse: return "mse";
    case MetricKind::kMape: break;
  }
  return "mape";
}

double MetricValue(const Metrics& m, MetricKind kind) {
  switch (kind) {
    case MetricKind::kMae: return m.mae;
    case MetricKind::kMse: return m.mse;
    case MetricKind::kMape: break;
  }
  return m.mape;
}

Metrics ComputeMetrics(const Vector& y, const Vector& yhat, bool with_mape) {
  if (y.size() != yhat.size()) {
    Fail(ErrorCode::kInvalidArgument, "metric inputs differ in length");
  }
  if (y.size() < 1) Fail(ErrorCode::kInvalidArgument, "metric inputs are empty");
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double pct_sum = 0.0;
  bool pct_defined = true;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double e = y[i] - yhat[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    if (y[i] == 0.0) {
      if (with_mape) {
        Fail(ErrorCode::kDomain,
             "MAPE undefined: target is zero at row " + std::to_string(i + 1));
      }
      pct_defined = false;
    } else {
      pct_sum += std::abs(e) / std::abs(y[i]);
    }
  }
  const auto n = static_cast<double>(y.size());
  Metrics m;
  m.mae = abs_sum / n;
  m.mse = sq_sum / n;
  m.mape = pct_defined ? pct_sum / n * 100.0
                       : std::numeric_limits<double>::quiet_NaN();
  return m;
}

Metrics MeanMetrics(std::span<const Metrics> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "no metrics to average");
  Metrics out;
  for (const Metrics& m : values) {
    out.mae += m.mae;
    out.mse += m.mse;
    out.mape += m.mape;
  }
  const auto n = static_cast<double>(values.size());
  out.mae /= n;
  out.mse /= n;
  out.mape /= n;
  return out;
}

}  // namespace gmvx::tuning
