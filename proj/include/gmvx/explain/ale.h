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

#ifndef GMVX_EXPLAIN_ALE_H_
#define GMVX_EXPLAIN_ALE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "gmvx/common/matrix.h"
#include "gmvx/explain/shapley.h"

namespace gmvx::explain {

struct AleOptions {
  std::size_t bins = 20;
  // Per-sample accumulated trajectories for this many evenly spaced rows.
  std::size_t trajectory_rows = 0;
};

struct AleCurve {
  std::size_t feature = 0;
  std::string feature_name;
  std::size_t requested_bins = 0;
  Vector edges;                      // z_0 .. z_K
  std::vector<std::size_t> counts;   // per bin, sums to n
  Vector local_effects;              // mean finite difference per bin
  Vector centered;                   // accumulated effect at each upper edge
  double offset = 0.0;               // count-weighted mean removed
  std::vector<std::string> notes;    // bin reductions and merges
  std::vector<std::size_t> trajectory_row_ids;
  Matrix trajectories;               // rows x (K + 1), at the edges

  std::size_t bins() const { return counts.size(); }
};

// Type-7 empirical quantiles at i/K. Bin k holds z_{k-1} < x <= z_k, and
// the first bin also holds the minimum. Repeated edges are dropped and
// empty bins merged into a neighbor; each change is noted. A constant
// feature is a kDegenerate error.
AleCurve ComputeAle(const Predictor& predict, const Matrix& x,
                    std::size_t feature, const AleOptions& options,
                    std::string feature_name = {});

// Centered effect at a feature value (step function over the bins).
double AleValueAt(const AleCurve& curve, double value);

}  // namespace gmvx::explain

#endif  // GMVX_EXPLAIN_ALE_H_
