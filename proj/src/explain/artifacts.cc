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

#include "gmvx/explain/artifacts.h"

#include <cmath>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"

namespace gmvx::explain {
namespace {

void AppendRow(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

double Number(const std::string& cell, std::size_t row, std::string_view what) {
  const auto v = ParseCsvNumber(cell);
  if (!v || std::isnan(*v)) {
    Fail(ErrorCode::kParse, std::string(what) + ": bad number '" + cell +
                                "' on data row " + std::to_string(row + 1));
  }
  return *v;
}

void ExpectHeader(const CsvTable& t, const std::vector<std::string>& header,
                  std::string_view what) {
  if (t.header != header) {
    Fail(ErrorCode::kParse, std::string(what) + ": unexpected header");
  }
}

std::string Size(std::size_t v) { return std::to_string(v); }

}  // namespace

std::string ShapMatrixToCsv(const ShapMatrix& sm) {
  std::string out;
  for (const auto& name : sm.feature_names) out += name + ",";
  out += "base_value\n";
  for (Eigen::Index i = 0; i < sm.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < sm.values.cols(); ++j) {
      out += FormatDouble(sm.values(i, j));
      out += ',';
    }
    out += FormatDouble(sm.base_value);
    out += '\n';
  }
  return out;
}

ShapMatrix ShapMatrixFromCsv(std::string_view text) {
  const CsvTable t = ParseCsv(text);
  if (t.header.empty() || t.header.back() != "base_value") {
    Fail(ErrorCode::kParse, "SHAP matrix: last column must be base_value");
  }
  ShapMatrix sm;
  sm.feature_names.assign(t.header.begin(), t.header.end() - 1);
  const auto p = static_cast<Eigen::Index>(sm.feature_names.size());
  sm.values.resize(static_cast<Eigen::Index>(t.rows.size()), p);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      sm.values(static_cast<Eigen::Index>(i), j) =
          Number(t.rows[i][static_cast<std::size_t>(j)], i, "SHAP matrix");
    }
    sm.base_value = Number(t.rows[i].back(), i, "SHAP matrix");
  }
  return sm;
}

nlohmann::json ShapMetaJson(const ShapMatrix& sm) {
  nlohmann::json doc;
  doc["method"] = ShapMethodName(sm.method);
  doc["base_value"] = sm.base_value;
  doc["rows"] = sm.values.rows();
  doc["features"] = sm.feature_names;
  doc["background_rows"] = sm.background_rows;
  doc["seed"] = sm.seed;
  if (sm.method == ShapMethod::kSampled) {
    doc["n_permutations"] = sm.n_permutations;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < sm.std_errors.size(); ++i) {
      const double se = sm.std_errors.data()[i];
      if (std::isfinite(se)) worst = std::max(worst, se);
    }
    doc["max_std_error"] = worst;
  }
  return doc;
}

std::string ImportanceToCsv(const GlobalImportance& g) {
  std::vector<std::size_t> rank(g.ranking.size());
  for (std::size_t r = 0; r < g.ranking.size(); ++r) rank[g.ranking[r]] = r + 1;
  std::string out = "feature,sum_abs,mean_abs,rank\n";
  for (std::size_t j = 0; j < g.feature_names.size(); ++j) {
    const auto je = static_cast<Eigen::Index>(j);
    AppendRow(out, {g.feature_names[j], FormatDouble(g.sum_abs[je]),
                    FormatDouble(g.mean_abs[je]), Size(rank[j])});
  }
  return out;
}

GlobalImportance ImportanceFromCsv(std::string_view text) {
  const CsvTable t = ParseCsv(text);
  ExpectHeader(t, {"feature", "sum_abs", "mean_abs", "rank"}, "importance");
  GlobalImportance g;
  const auto p = static_cast<Eigen::Index>(t.rows.size());
  g.sum_abs.resize(p);
  g.mean_abs.resize(p);
  g.ranking.assign(t.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    g.feature_names.push_back(t.rows[i][0]);
    g.sum_abs[static_cast<Eigen::Index>(i)] = Number(t.rows[i][1], i, "importance");
    g.mean_abs[static_cast<Eigen::Index>(i)] = Number(t.rows[i][2], i, "importance");
    const double r = Number(t.rows[i][3], i, "importance");
    if (r < 1 || r > static_cast<double>(t.rows.size()) || r != std::floor(r) ||
        g.ranking[static_cast<std::size_t>(r) - 1] != t.rows.size()) {
      Fail(ErrorCode::kParse, "importance: ranks must be a permutation");
    }
    g.ranking[static_cast<std::size_t>(r) - 1] = i;
  }
  if (p > 0 && g.sum_abs[0] != 0.0) {
    g.samples = static_cast<std::size_t>(std::llround(g.sum_abs[0] / g.mean_abs[0]));
  }
  return g;
}

std::string GroupImportanceToCsv(const GroupImportance& g) {
  std::string out =
      "feature,female_sum_abs,female_mean_abs,male_sum_abs,male_mean_abs\n";
  for (std::size_t j = 0; j < g.female.feature_names.size(); ++j) {
    const auto je = static_cast<Eigen::Index>(j);
    AppendRow(out, {g.female.feature_names[j], FormatDouble(g.female.sum_abs[je]),
                    FormatDouble(g.female.mean_abs[je]),
                    FormatDouble(g.male.sum_abs[je]),
                    FormatDouble(g.male.mean_abs[je])});
  }
  return out;
}

std::string SummaryPointsToCsv(const SummaryPoints& s) {
  std::string out = "row,feature,value,quantile,phi\n";
  for (const auto& pt : s.points) {
    AppendRow(out, {Size(pt.row), s.feature_names[pt.feature],
                    FormatDouble(pt.value), FormatDouble(pt.quantile),
                    FormatDouble(pt.phi)});
  }
  return out;
}

std::string AleToCsv(const AleCurve& curve) {
  std::string out =
      "bin_index,left_edge,right_edge,count,local_effect,accumulated_centered\n";
  for (std::size_t k = 0; k < curve.bins(); ++k) {
    const auto ke = static_cast<Eigen::Index>(k);
    AppendRow(out, {Size(k), FormatDouble(curve.edges[ke]),
                    FormatDouble(curve.edges[ke + 1]), Size(curve.counts[k]),
                    FormatDouble(curve.local_effects[ke]),
                    FormatDouble(curve.centered[ke])});
  }
  return out;
}

AleCurve AleFromCsv(std::string_view text) {
  const CsvTable t = ParseCsv(text);
  ExpectHeader(t,
               {"bin_index", "left_edge", "right_edge", "count", "local_effect",
                "accumulated_centered"},
               "ALE");
  if (t.rows.empty()) Fail(ErrorCode::kParse, "ALE: no bins");
  AleCurve c;
  const auto k = static_cast<Eigen::Index>(t.rows.size());
  c.edges.resize(k + 1);
  c.local_effects.resize(k);
  c.centered.resize(k);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto ie = static_cast<Eigen::Index>(i);
    if (Number(t.rows[i][0], i, "ALE") != static_cast<double>(i)) {
      Fail(ErrorCode::kParse, "ALE: bins out of order");
    }
    const double left = Number(t.rows[i][1], i, "ALE");
    if (i > 0 && left != c.edges[ie]) {
      Fail(ErrorCode::kParse, "ALE: bins are not contiguous");
    }
    c.edges[ie] = left;
    c.edges[ie + 1] = Number(t.rows[i][2], i, "ALE");
    c.counts.push_back(static_cast<std::size_t>(Number(t.rows[i][3], i, "ALE")));
    c.local_effects[ie] = Number(t.rows[i][4], i, "ALE");
    c.centered[ie] = Number(t.rows[i][5], i, "ALE");
  }
  c.requested_bins = c.counts.size();
  return c;
}

nlohmann::json AleMetaJson(const AleCurve& curve) {
  nlohmann::json doc;
  doc["feature"] = curve.feature_name;
  doc["feature_index"] = curve.feature;
  doc["requested_bins"] = curve.requested_bins;
  doc["bins"] = curve.bins();
  doc["offset"] = curve.offset;
  doc["notes"] = curve.notes;
  doc["trajectory_rows"] = curve.trajectory_row_ids.size();
  return doc;
}

std::string AleTrajectoriesToCsv(const AleCurve& curve) {
  std::string out = "row_id";
  for (Eigen::Index k = 0; k < curve.edges.size(); ++k) {
    out += ",edge_" + std::to_string(k);
  }
  out += '\n';
  for (std::size_t r = 0; r < curve.trajectory_row_ids.size(); ++r) {
    out += Size(curve.trajectory_row_ids[r]);
    for (Eigen::Index k = 0; k < curve.trajectories.cols(); ++k) {
      out += ',';
      out += FormatDouble(curve.trajectories(static_cast<Eigen::Index>(r), k));
    }
    out += '\n';
  }
  return out;
}

std::string Shap3DPointsToCsv(const Shap3DSurface& s,
                              const std::vector<std::string>& row_ids) {
  std::string out = "row_id,x,y,z,z_smoothed\n";
  for (Eigen::Index i = 0; i < s.x.size(); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    AppendRow(out, {iu < row_ids.size() ? row_ids[iu] : Size(iu),
                    FormatDouble(s.x[i]), FormatDouble(s.y[i]),
                    FormatDouble(s.z[i]), FormatDouble(s.z_smoothed[i])});
  }
  return out;
}

std::string Shap3DGridToCsv(const Shap3DSurface& s) {
  std::string out = "x_grid,z_smoothed\n";
  for (Eigen::Index g = 0; g < s.grid_x.size(); ++g) {
    AppendRow(out, {FormatDouble(s.grid_x[g]), FormatDouble(s.grid_z[g])});
  }
  return out;
}

Shap3DSurface Shap3DFromCsv(std::string_view points, std::string_view grid) {
  const CsvTable p = ParseCsv(points);
  ExpectHeader(p, {"row_id", "x", "y", "z", "z_smoothed"}, "3D-SHAP points");
  const CsvTable g = ParseCsv(grid);
  ExpectHeader(g, {"x_grid", "z_smoothed"}, "3D-SHAP grid");
  Shap3DSurface s;
  const auto n = static_cast<Eigen::Index>(p.rows.size());
  s.x.resize(n);
  s.y.resize(n);
  s.z.resize(n);
  s.z_smoothed.resize(n);
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const auto ie = static_cast<Eigen::Index>(i);
    s.x[ie] = Number(p.rows[i][1], i, "3D-SHAP points");
    s.y[ie] = Number(p.rows[i][2], i, "3D-SHAP points");
    s.z[ie] = Number(p.rows[i][3], i, "3D-SHAP points");
    s.z_smoothed[ie] = Number(p.rows[i][4], i, "3D-SHAP points");
  }
  const auto m = static_cast<Eigen::Index>(g.rows.size());
  s.grid_x.resize(m);
  s.grid_z.resize(m);
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    s.grid_x[static_cast<Eigen::Index>(i)] = Number(g.rows[i][0], i, "3D-SHAP grid");
    s.grid_z[static_cast<Eigen::Index>(i)] = Number(g.rows[i][1], i, "3D-SHAP grid");
  }
  return s;
}

nlohmann::json ThresholdsToJson(const ThresholdFit& fit) {
  nlohmann::json doc;
  doc["detector"] = "three-segment piecewise-linear least squares";
  doc["breakpoints"] = {fit.first, fit.second};
  doc["stages"] = {kStageLabels[0], kStageLabels[1], kStageLabels[2]};
  doc["slopes"] = fit.slopes;
  doc["sse"] = fit.sse;
  doc["r_squared"] = fit.r_squared;
  doc["degenerate"] = fit.degenerate;
  doc["reliable"] = !fit.degenerate;
  doc["declining_final_segment"] = fit.declining_tail;
  return doc;
}

nlohmann::json Shap3DMetaJson(const Shap3DSurface& s) {
  nlohmann::json doc;
  doc["feature"] = s.feature_name;
  doc["feature_index"] = s.feature;
  doc["points"] = s.x.size();
  doc["grid_points"] = s.grid_x.size();
  doc["k_neighbors"] = s.k_neighbors;
  doc["smoothing"] = "k-nearest-neighbor mean in standardized (x, y)";
  doc["thresholds"] =
      s.has_thresholds ? ThresholdsToJson(s.thresholds) : nlohmann::json(nullptr);
  return doc;
}

}  // namespace gmvx::explain
