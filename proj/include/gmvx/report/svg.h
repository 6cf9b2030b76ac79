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

#ifndef GMVX_REPORT_SVG_H_
#define GMVX_REPORT_SVG_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gmvx::report {

// Minimal SVG document builder. Coordinates are written with two decimals,
// so identical inputs give byte-identical files.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height);

  void Rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none", double opacity = 1.0);
  void Line(double x1, double y1, double x2, double y2,
            std::string_view stroke, double width = 1.0,
            std::string_view dash = "");
  void Polyline(const std::vector<std::pair<double, double>>& points,
                std::string_view stroke, double width = 1.5,
                double opacity = 1.0);
  void Circle(double cx, double cy, double r, std::string_view fill,
              double opacity = 1.0);
  enum class Anchor { kStart, kMiddle, kEnd };
  void Text(double x, double y, std::string_view text, double size = 11.0,
            Anchor anchor = Anchor::kStart, double rotate = 0.0);

  double width() const { return width_; }
  double height() const { return height_; }
  std::string Finish() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

std::string EscapeXml(std::string_view text);

// Linear data-to-pixel map.
class Scale {
 public:
  Scale(double d0, double d1, double p0, double p1);
  double operator()(double v) const;
  double lo() const { return d0_; }
  double hi() const { return d1_; }

 private:
  double d0_, d1_, p0_, p1_;
};

// Round tick positions covering [lo, hi]; about `count` of them.
std::vector<double> NiceTicks(double lo, double hi, int count = 5);
std::string TickLabel(double value);

// Frame with ticks and labels for a plot area.
struct PlotArea {
  double left, top, right, bottom;
};
void DrawAxes(SvgCanvas& svg, const PlotArea& area, const Scale& x,
              const Scale& y, std::string_view x_label,
              std::string_view y_label, bool x_ticks = true,
              bool y_ticks = true);

// Blue (0) to red (1) ramp as #rrggbb.
std::string Diverging(double t);

}  // namespace gmvx::report

#endif  // GMVX_REPORT_SVG_H_
