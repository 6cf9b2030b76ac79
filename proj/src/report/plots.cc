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

#include "gmvx/report/plots.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmvx/common/csv.h"
#include "gmvx/report/svg.h"

namespace gmvx::report {
namespace {

using Anchor = SvgCanvas::Anchor;

constexpr const char* kBlue = "#1e88e5";
constexpr const char* kRed = "#ff0052";

void Title(SvgCanvas& svg, std::string_view text) {
  svg.Text(svg.width() / 2, 22, text, 14, Anchor::kMiddle);
}

std::pair<double, double> Range(const Vector& v) {
  if (v.size() == 0) return {0.0, 1.0};
  double lo = v.minCoeff();
  double hi = v.maxCoeff();
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = (hi - lo) * 0.04;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string ImportanceBarSvg(const explain::GlobalImportance& g,
                             std::size_t max_features) {
  const std::size_t m = std::min(max_features, g.ranking.size());
  const double row = 18;
  SvgCanvas svg(720, 70 + row * static_cast<double>(m) + 40);
  Title(svg, "Feature importance (sum of |SHAP|)");
  const PlotArea area{180, 40, 690, 40 + row * static_cast<double>(m)};
  const double top = m > 0 ? g.sum_abs.maxCoeff() : 1.0;
  const Scale x(0.0, top > 0 ? top * 1.05 : 1.0, area.left, area.right);
  const Scale y(0.0, 1.0, area.bottom, area.top);
  DrawAxes(svg, area, x, y, "sum of |SHAP value|", "", true, false);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t j = g.ranking[r];
    const double py = area.top + row * static_cast<double>(r);
    svg.Rect(area.left, py + 3, x(g.sum_abs[static_cast<Eigen::Index>(j)]) - area.left,
             row - 6, kBlue);
    svg.Text(area.left - 6, py + row - 5, g.feature_names[j], 10, Anchor::kEnd);
  }
  return svg.Finish();
}

std::string GroupImportanceSvg(const explain::GroupImportance& g,
                               std::size_t max_features) {
  const std::size_t p = g.female.feature_names.size();
  std::vector<std::size_t> order(p);
  for (std::size_t j = 0; j < p; ++j) order[j] = j;
  auto key = [&](std::size_t j) {
    const auto je = static_cast<Eigen::Index>(j);
    return std::max(g.female.mean_abs[je], g.male.mean_abs[je]);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  const std::size_t m = std::min(max_features, p);
  const double row = 22;
  SvgCanvas svg(720, 90 + row * static_cast<double>(m) + 40);
  Title(svg, "Mean |SHAP| by group (female " + std::to_string(g.female_test_rows) +
                 " / male " + std::to_string(g.male_test_rows) + " test rows)");
  const PlotArea area{180, 50, 690, 50 + row * static_cast<double>(m)};
  double top = 0.0;
  for (std::size_t r = 0; r < m; ++r) top = std::max(top, key(order[r]));
  const Scale x(0.0, top > 0 ? top * 1.05 : 1.0, area.left, area.right);
  DrawAxes(svg, area, x, Scale(0, 1, area.bottom, area.top), "mean |SHAP value|", "",
           true, false);
  svg.Rect(area.right - 120, 32, 10, 10, kRed);
  svg.Text(area.right - 106, 41, "female", 10);
  svg.Rect(area.right - 60, 32, 10, 10, kBlue);
  svg.Text(area.right - 46, 41, "male", 10);
  for (std::size_t r = 0; r < m; ++r) {
    const auto j = static_cast<Eigen::Index>(order[r]);
    const double py = area.top + row * static_cast<double>(r);
    svg.Rect(area.left, py + 2, x(g.female.mean_abs[j]) - area.left, (row - 4) / 2, kRed);
    svg.Rect(area.left, py + 2 + (row - 4) / 2, x(g.male.mean_abs[j]) - area.left,
             (row - 4) / 2, kBlue);
    svg.Text(area.left - 6, py + row - 7, g.female.feature_names[order[r]], 10,
             Anchor::kEnd);
  }
  return svg.Finish();
}

std::string SummarySvg(const explain::SummaryPoints& s, std::size_t max_features) {
  const std::size_t m = std::min(max_features, s.feature_order.size());
  const double row = 26;
  SvgCanvas svg(760, 80 + row * static_cast<double>(m) + 40);
  Title(svg, "SHAP summary (color: feature value rank)");
  const PlotArea area{180, 40, 700, 40 + row * static_cast<double>(m)};
  double lo = 0.0, hi = 0.0;
  for (const auto& pt : s.points) {
    for (std::size_t r = 0; r < m; ++r) {
      if (pt.feature == s.feature_order[r]) {
        lo = std::min(lo, pt.phi);
        hi = std::max(hi, pt.phi);
      }
    }
  }
  const double pad = (hi - lo) * 0.04 + 1e-12;
  const Scale x(lo - pad, hi + pad, area.left, area.right);
  DrawAxes(svg, area, x, Scale(0, 1, area.bottom, area.top),
           "SHAP value (impact on model output)", "", true, false);
  svg.Line(x(0.0), area.top, x(0.0), area.bottom, "#999");
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t j = s.feature_order[r];
    const double mid = area.top + row * (static_cast<double>(r) + 0.5);
    svg.Text(area.left - 6, mid + 3, s.feature_names[j], 10, Anchor::kEnd);
    for (const auto& pt : s.points) {
      if (pt.feature != j) continue;
      // Golden-ratio sequence on the row index: stable, well spread jitter.
      const double u = std::fmod(static_cast<double>(pt.row) * 0.6180339887498949, 1.0);
      svg.Circle(x(pt.phi), mid + (u - 0.5) * (row - 8), 2.0, Diverging(pt.quantile), 0.8);
    }
  }
  // Color legend.
  for (int i = 0; i < 20; ++i) {
    svg.Rect(area.right + 20, area.top + 5 * i, 10, 5, Diverging(1.0 - i / 19.0));
  }
  svg.Text(area.right + 34, area.top + 8, "high", 9);
  svg.Text(area.right + 34, area.top + 100, "low", 9);
  return svg.Finish();
}

std::string AleSvg(const explain::AleCurve& curve) {
  SvgCanvas svg(640, 420);
  Title(svg, "ALE of " + curve.feature_name + " (" + std::to_string(curve.bins()) +
                 " bins)");
  const PlotArea area{80, 40, 610, 360};
  double lo = curve.centered.minCoeff(), hi = curve.centered.maxCoeff();
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  if (curve.trajectories.size() > 0) {
    lo = std::min(lo, curve.trajectories.minCoeff());
    hi = std::max(hi, curve.trajectories.maxCoeff());
  }
  const double pad = (hi - lo) * 0.05 + 1e-12;
  const Scale x(curve.edges[0], curve.edges[curve.edges.size() - 1], area.left, area.right);
  const Scale y(lo - pad, hi + pad, area.bottom, area.top);
  DrawAxes(svg, area, x, y, curve.feature_name, "accumulated local effect");
  for (Eigen::Index r = 0; r < curve.trajectories.rows(); ++r) {
    std::vector<std::pair<double, double>> pts;
    for (Eigen::Index k = 0; k < curve.trajectories.cols(); ++k) {
      pts.push_back({x(curve.edges[k]), y(curve.trajectories(r, k))});
    }
    svg.Polyline(pts, "#90caf9", 0.8, 0.6);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < curve.bins(); ++k) {
    const auto ke = static_cast<Eigen::Index>(k);
    pts.push_back({x(curve.edges[ke + 1]), y(curve.centered[ke])});
  }
  svg.Polyline(pts, "#111", 2.0);
  for (Eigen::Index k = 0; k < curve.edges.size(); ++k) {
    svg.Line(x(curve.edges[k]), area.bottom, x(curve.edges[k]), area.bottom - 6, "#555");
  }
  return svg.Finish();
}

std::string Shap3DSvg(const explain::Shap3DSurface& s, std::string_view target_label) {
  SvgCanvas svg(1000, 440);
  Title(svg, "3D-SHAP of " + s.feature_name + " (k = " + std::to_string(s.k_neighbors) +
                 ")");
  const PlotArea left{70, 50, 470, 370};
  const auto [x0, x1] = Range(s.x);
  const auto [y0, y1] = Range(s.y);
  const Scale xs(x0, x1, left.left, left.right);
  const Scale ys(y0, y1, left.bottom, left.top);
  DrawAxes(svg, left, xs, ys, s.feature_name, target_label);
  const double zlo = s.z_smoothed.size() ? s.z_smoothed.minCoeff() : 0.0;
  const double zhi = s.z_smoothed.size() ? s.z_smoothed.maxCoeff() : 1.0;
  for (Eigen::Index i = 0; i < s.x.size(); ++i) {
    const double t = zhi > zlo ? (s.z_smoothed[i] - zlo) / (zhi - zlo) : 0.5;
    svg.Circle(xs(s.x[i]), ys(s.y[i]), 2.2, Diverging(t), 0.85);
  }
  svg.Text(left.right, left.top - 6, "color: smoothed SHAP", 10, Anchor::kEnd);

  const PlotArea right{570, 50, 970, 370};
  Vector both(s.grid_z.size() + s.z_smoothed.size());
  both << s.grid_z, s.z_smoothed;
  const auto [z0, z1] = Range(both);
  const Scale gx(x0, x1, right.left, right.right);
  const Scale gz(z0, z1, right.bottom, right.top);
  DrawAxes(svg, right, gx, gz, s.feature_name, "smoothed SHAP value");
  for (Eigen::Index i = 0; i < s.x.size(); ++i) {
    svg.Circle(gx(s.x[i]), gz(s.z_smoothed[i]), 1.5, "#bbb", 0.6);
  }
  std::vector<std::pair<double, double>> pts;
  for (Eigen::Index g = 0; g < s.grid_x.size(); ++g) {
    pts.push_back({gx(s.grid_x[g]), gz(s.grid_z[g])});
  }
  svg.Polyline(pts, "#111", 2.0);
  if (s.has_thresholds) {
    const auto& t = s.thresholds;
    for (double b : {t.first, t.second}) {
      svg.Line(gx(b), right.top, gx(b), right.bottom, t.degenerate ? "#aaa" : kRed, 1.2,
               "5,4");
      svg.Text(gx(b) + 3, right.top + 12, FormatFixed(b, 2), 10);
    }
    std::string note = "stages: trough | rising | bottleneck";
    if (t.degenerate) note += " (no clear structure)";
    if (t.declining_tail) note += "; final segment declines";
    svg.Text(right.left, right.bottom + 52, note, 10);
  }
  return svg.Finish();
}

std::string DistributionSvg(const Vector& values, std::string_view label,
                            std::size_t bins) {
  SvgCanvas svg(640, 420);
  Title(svg, "Distribution of " + std::string(label));
  const PlotArea area{80, 40, 610, 360};
  if (values.size() == 0 || bins == 0) return svg.Finish();
  const double mean = values.mean();
  const double var = values.size() > 1
                         ? (values.array() - mean).square().sum() /
                               static_cast<double>(values.size() - 1)
                         : 0.0;
  const double sd = std::sqrt(var);
  auto [lo, hi] = Range(values);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> density(bins, 0.0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::size_t>((values[i] - lo) / width);
    density[std::min(b, bins - 1)] += 1.0;
  }
  for (double& d : density) d /= static_cast<double>(values.size()) * width;
  double top = *std::max_element(density.begin(), density.end());
  if (sd > 0) top = std::max(top, 1.0 / (sd * std::sqrt(2 * std::numbers::pi)));
  const Scale x(lo, hi, area.left, area.right);
  const Scale y(0.0, top * 1.08, area.bottom, area.top);
  DrawAxes(svg, area, x, y, label, "density");
  for (std::size_t b = 0; b < bins; ++b) {
    const double b0 = lo + width * static_cast<double>(b);
    svg.Rect(x(b0), y(density[b]), x(b0 + width) - x(b0), area.bottom - y(density[b]),
             "#90caf9", "#1e88e5");
  }
  if (sd > 0) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 200; ++i) {
      const double v = lo + (hi - lo) * i / 200.0;
      const double z = (v - mean) / sd;
      pts.push_back({x(v), y(std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * std::numbers::pi)))});
    }
    svg.Polyline(pts, kRed, 2.0);
  }
  svg.Text(area.right, area.top + 12,
           "normal overlay: mean " + FormatFixed(mean, 3) + ", sd " + FormatFixed(sd, 3), 10,
           Anchor::kEnd);
  return svg.Finish();
}

std::string BenchmarkSvg(const tuning::BenchmarkReport& report) {
  SvgCanvas svg(640, 400);
  Title(svg, "Cross-validated MAPE by algorithm");
  const PlotArea area{80, 40, 610, 340};
  double top = 0.0;
  for (const auto& r : report.rows) {
    if (r.ok && std::isfinite(r.metrics.mape)) top = std::max(top, r.metrics.mape);
  }
  const Scale y(0.0, top > 0 ? top * 1.1 : 1.0, area.bottom, area.top);
  const double slot = (area.right - area.left) / std::max<double>(1.0, static_cast<double>(report.rows.size()));
  DrawAxes(svg, area, Scale(0, 1, area.left, area.right), y, "", "MAPE (%)", false,
           true);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    const double px = area.left + slot * static_cast<double>(i);
    const std::string name(models::AlgorithmName(r.algorithm));
    svg.Text(px + slot / 2, area.bottom + 32, name, 10, Anchor::kMiddle);
    if (!r.ok || !std::isfinite(r.metrics.mape)) {
      svg.Text(px + slot / 2, area.bottom - 6, "failed", 9, Anchor::kMiddle);
      continue;
    }
    const bool best = report.best && *report.best == r.algorithm;
    svg.Rect(px + slot * 0.15, y(r.metrics.mape), slot * 0.7, area.bottom - y(r.metrics.mape),
             best ? kRed : kBlue);
    svg.Text(px + slot / 2, y(r.metrics.mape) - 4, FormatFixed(r.metrics.mape, 2), 9,
             Anchor::kMiddle);
  }
  return svg.Finish();
}

}  // namespace gmvx::report
