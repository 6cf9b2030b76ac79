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

#ifndef GMVX_EXPLAIN_SHAP3D_H_
#define GMVX_EXPLAIN_SHAP3D_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "gmvx/common/matrix.h"
#include "gmvx/explain/shapley.h"

namespace gmvx::explain {

struct ThresholdFit {
  // Breakpoints between the trough/rising and rising/bottleneck stages.
  double first = 0.0;
  double second = 0.0;
  std::size_t first_index = 0;   // grid positions of the breakpoints
  std::size_t second_index = 0;
  std::array<double, 3> slopes{};
  double sse = 0.0;
  double r_squared = 0.0;
  // Slopes equal within tolerance: no stage structure, thresholds are not
  // meaningful.
  bool degenerate = false;
  bool declining_tail = false;  // negative final slope
};

inline constexpr std::array<std::string_view, 3> kStageLabels = {
    "trough", "rising", "bottleneck"};

// Least-squares continuous three-segment line over every pair of grid
// breakpoints leaving at least two points per segment. Ties go to the
// earliest pair. Fewer than 6 points is a kInsufficientData error.
ThresholdFit DetectThresholds(const Vector& grid_x, const Vector& grid_z);

struct Shap3DOptions {
  std::size_t k_neighbors = 0;  // 0 means round(sqrt(n))
  std::size_t grid_points = 100;
};

struct Shap3DSurface {
  std::size_t feature = 0;
  std::string feature_name;
  Vector x;  // predictor value
  Vector y;  // target
  Vector z;  // phi
  Vector z_smoothed;
  Vector grid_x;
  Vector grid_z;
  std::size_t k_neighbors = 0;
  bool has_thresholds = false;
  ThresholdFit thresholds;
};

// Each point's z is replaced by the mean z of its k nearest points in
// standardized (x, y) space (itself included, ties by row). The grid holds
// evenly spaced x values, each averaging the smoothed z of its k nearest
// points in x. Thresholds are fitted when the grid has at least 6 points.
Shap3DSurface ComputeShap3D(const Vector& x, const Vector& y, const Vector& z,
                            const Shap3DOptions& options);
Shap3DSurface ComputeShap3D(const ShapMatrix& sm, const Matrix& features,
                            const Vector& target, std::size_t feature,
                            const Shap3DOptions& options);

}  // namespace gmvx::explain

#endif  // GMVX_EXPLAIN_SHAP3D_H_
