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

#include "gmvx/report/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gmvx/common/csv.h"

namespace gmvx::report {
namespace {

std::string F(double v) { return FormatFixed(v, 2); }

}  // namespace

SvgCanvas::SvgCanvas(double width, double height)
    : width_(width), height_(height) {}

void SvgCanvas::Rect(double x, double y, double w, double h,
                     std::string_view fill, std::string_view stroke,
                     double opacity) {
  body_ += "<rect x=\"" + F(x) + "\" y=\"" + F(y) + "\" width=\"" +
           F(std::max(0.0, w)) + "\" height=\"" + F(std::max(0.0, h)) +
           "\" fill=\"" + std::string(fill) + "\" stroke=\"" +
           std::string(stroke) + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + F(opacity) + "\"";
  body_ += "/>\n";
}

void SvgCanvas::Line(double x1, double y1, double x2, double y2,
                     std::string_view stroke, double width,
                     std::string_view dash) {
  body_ += "<line x1=\"" + F(x1) + "\" y1=\"" + F(y1) + "\" x2=\"" + F(x2) +
           "\" y2=\"" + F(y2) + "\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + F(width) + "\"";
  if (!dash.empty()) body_ += " stroke-dasharray=\"" + std::string(dash) + "\"";
  body_ += "/>\n";
}

void SvgCanvas::Polyline(const std::vector<std::pair<double, double>>& points,
                         std::string_view stroke, double width,
                         double opacity) {
  if (points.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + F(width) + "\"";
  if (opacity < 1.0) body_ += " stroke-opacity=\"" + F(opacity) + "\"";
  body_ += " points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) body_ += ' ';
    body_ += F(points[i].first) + "," + F(points[i].second);
  }
  body_ += "\"/>\n";
}

void SvgCanvas::Circle(double cx, double cy, double r, std::string_view fill,
                       double opacity) {
  body_ += "<circle cx=\"" + F(cx) + "\" cy=\"" + F(cy) + "\" r=\"" + F(r) +
           "\" fill=\"" + std::string(fill) + "\"";
  if (opacity < 1.0) body_ += " fill-opacity=\"" + F(opacity) + "\"";
  body_ += "/>\n";
}

void SvgCanvas::Text(double x, double y, std::string_view text, double size,
                     Anchor anchor, double rotate) {
  const char* a = anchor == Anchor::kStart    ? "start"
                  : anchor == Anchor::kMiddle ? "middle"
                                              : "end";
  body_ += "<text x=\"" + F(x) + "\" y=\"" + F(y) + "\" font-size=\"" +
           F(size) + "\" text-anchor=\"" + a + "\"";
  if (rotate != 0.0) {
    body_ += " transform=\"rotate(" + F(rotate) + " " + F(x) + " " + F(y) + ")\"";
  }
  body_ += ">" + EscapeXml(text) + "</text>\n";
}

std::string SvgCanvas::Finish() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + F(width_) +
         "\" height=\"" + F(height_) + "\" viewBox=\"0 0 " + F(width_) + " " +
         F(height_) + "\" font-family=\"sans-serif\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ +
         "</svg>\n";
}

std::string EscapeXml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

Scale::Scale(double d0, double d1, double p0, double p1)
    : d0_(d0), d1_(d1), p0_(p0), p1_(p1) {
  if (!(d1_ > d0_)) {
    d0_ -= 0.5;
    d1_ = d0_ + 1.0;
  }
}

double Scale::operator()(double v) const {
  return p0_ + (v - d0_) / (d1_ - d0_) * (p1_ - p0_);
}

std::vector<double> NiceTicks(double lo, double hi, int count) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) return {lo};
  const double raw = (hi - lo) / std::max(1, count);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = (norm < 1.5 ? 1 : norm < 3 ? 2 : norm < 7 ? 5 : 10) * mag;
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

std::string TickLabel(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

void DrawAxes(SvgCanvas& svg, const PlotArea& area, const Scale& x,
              const Scale& y, std::string_view x_label,
              std::string_view y_label, bool x_ticks, bool y_ticks) {
  svg.Line(area.left, area.bottom, area.right, area.bottom, "#333");
  svg.Line(area.left, area.top, area.left, area.bottom, "#333");
  for (double t : x_ticks ? NiceTicks(x.lo(), x.hi()) : std::vector<double>{}) {
    const double px = x(t);
    svg.Line(px, area.bottom, px, area.bottom + 4, "#333");
    svg.Text(px, area.bottom + 16, TickLabel(t), 10, SvgCanvas::Anchor::kMiddle);
  }
  for (double t : y_ticks ? NiceTicks(y.lo(), y.hi()) : std::vector<double>{}) {
    const double py = y(t);
    svg.Line(area.left - 4, py, area.left, py, "#333");
    svg.Line(area.left, py, area.right, py, "#eee");
    svg.Text(area.left - 7, py + 3, TickLabel(t), 10, SvgCanvas::Anchor::kEnd);
  }
  svg.Text((area.left + area.right) / 2, area.bottom + 34, x_label, 12,
           SvgCanvas::Anchor::kMiddle);
  svg.Text(area.left - 46, (area.top + area.bottom) / 2, y_label, 12,
           SvgCanvas::Anchor::kMiddle, -90);
}

std::string Diverging(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.5, 0.0, 1.0);
  // #1e88e5 -> #ff0052 through a light purple.
  const double r0 = 0x1e, g0 = 0x88, b0 = 0xe5;
  const double r1 = 0xff, g1 = 0x00, b1 = 0x52;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(r0 + (r1 - r0) * t)),
                static_cast<int>(std::lround(g0 + (g1 - g0) * t)),
                static_cast<int>(std::lround(b0 + (b1 - b0) * t)));
  return buf;
}

}  // namespace gmvx::report
