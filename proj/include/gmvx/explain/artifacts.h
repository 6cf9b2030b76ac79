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

#ifndef GMVX_EXPLAIN_ARTIFACTS_H_
#define GMVX_EXPLAIN_ARTIFACTS_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/explain/ale.h"
#include "gmvx/explain/importance.h"
#include "gmvx/explain/shap3d.h"
#include "gmvx/explain/shapley.h"

namespace gmvx::explain {

// All numbers use shortest round-trip formatting, so every loader below
// recovers the written values exactly.

// Header: feature names then base_value; one row per sample.
std::string ShapMatrixToCsv(const ShapMatrix& sm);
// Restores names, values and base_value; method metadata lives in the
// sidecar.
ShapMatrix ShapMatrixFromCsv(std::string_view text);
nlohmann::json ShapMetaJson(const ShapMatrix& sm);

// feature,sum_abs,mean_abs,rank (rank is 1-based).
std::string ImportanceToCsv(const GlobalImportance& g);
GlobalImportance ImportanceFromCsv(std::string_view text);
// feature,female_sum_abs,female_mean_abs,male_sum_abs,male_mean_abs
std::string GroupImportanceToCsv(const GroupImportance& g);

// row,feature,value,quantile,phi
std::string SummaryPointsToCsv(const SummaryPoints& s);

// bin_index,left_edge,right_edge,count,local_effect,accumulated_centered
std::string AleToCsv(const AleCurve& curve);
AleCurve AleFromCsv(std::string_view text);
nlohmann::json AleMetaJson(const AleCurve& curve);
// row_id then one column per edge.
std::string AleTrajectoriesToCsv(const AleCurve& curve);

// row_id,x,y,z,z_smoothed. row_ids may be empty (positions are used).
std::string Shap3DPointsToCsv(const Shap3DSurface& s,
                              const std::vector<std::string>& row_ids = {});
// x_grid,z_smoothed
std::string Shap3DGridToCsv(const Shap3DSurface& s);
Shap3DSurface Shap3DFromCsv(std::string_view points, std::string_view grid);
nlohmann::json Shap3DMetaJson(const Shap3DSurface& s);
nlohmann::json ThresholdsToJson(const ThresholdFit& fit);

}  // namespace gmvx::explain

#endif  // GMVX_EXPLAIN_ARTIFACTS_H_
