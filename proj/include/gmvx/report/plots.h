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

#ifndef GMVX_REPORT_PLOTS_H_
#define GMVX_REPORT_PLOTS_H_

#include <cstddef>
#include <string>

#include "gmvx/common/matrix.h"
#include "gmvx/explain/ale.h"
#include "gmvx/explain/importance.h"
#include "gmvx/explain/shap3d.h"
#include "gmvx/tuning/benchmark.h"

namespace gmvx::report {

// Horizontal bars of summed |SHAP|, most important on top.
std::string ImportanceBarSvg(const explain::GlobalImportance& g,
                             std::size_t max_features = 30);

// Paired bars per feature (female vs male groups), ordered by the larger of
// the two mean |SHAP| values.
std::string GroupImportanceSvg(const explain::GroupImportance& g,
                               std::size_t max_features = 30);

// One row per feature; points at their SHAP value, colored by the feature's
// rank quantile (blue low, red high), with deterministic vertical jitter.
std::string SummarySvg(const explain::SummaryPoints& s,
                       std::size_t max_features = 15);

// Centered step curve over the bin edges plus optional per-row
// trajectories and a rug of bin edges.
std::string AleSvg(const explain::AleCurve& curve);

// Two panels: predictor vs target colored by smoothed SHAP, and the gridded
// smoothed SHAP curve with detected breakpoints.
std::string Shap3DSvg(const explain::Shap3DSurface& s,
                      std::string_view target_label);

// Histogram of the values with a normal density of equal mean and variance.
std::string DistributionSvg(const Vector& values, std::string_view label,
                            std::size_t bins = 40);

// MAPE per algorithm; failed algorithms are shown as gaps.
std::string BenchmarkSvg(const tuning::BenchmarkReport& report);

}  // namespace gmvx::report

#endif  // GMVX_REPORT_PLOTS_H_
