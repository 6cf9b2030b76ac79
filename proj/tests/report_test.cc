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

#include <gtest/gtest.h>

#include "gmvx/explain/importance.h"
#include "gmvx/report/plots.h"
#include "gmvx/report/svg.h"
#include "testing/fixtures.h"

namespace gmvx::report {
namespace {

std::size_t Count(const std::string& text, std::string_view needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) {
    ++n;
  }
  return n;
}

TEST(Svg, EscapesMarkup) {
  EXPECT_EQ(EscapeXml("a<b & \"c\" > 'd'"), "a&lt;b &amp; &quot;c&quot; &gt; 'd'");
  SvgCanvas svg(100, 50);
  svg.Text(1, 2, "<x>");
  const std::string out = svg.Finish();
  EXPECT_EQ(out.find("<x>"), std::string::npos);
  EXPECT_NE(out.find("&lt;x&gt;"), std::string::npos);
}

TEST(Svg, CoordinatesUseFixedPrecision) {
  SvgCanvas svg(10, 10);
  svg.Line(0.123456, 1.0 / 3.0, 2, 3, "#000");
  const std::string out = svg.Finish();
  EXPECT_NE(out.find("0.12"), std::string::npos);
  EXPECT_NE(out.find("0.33"), std::string::npos);
  EXPECT_EQ(out.find("0.123"), std::string::npos);
  EXPECT_EQ(out.rfind("</svg>"), out.size() - 7);
}

TEST(Svg, ScaleMapsEndpoints) {
  const Scale s(2.0, 6.0, 100.0, 300.0);
  EXPECT_DOUBLE_EQ(s(2.0), 100.0);
  EXPECT_DOUBLE_EQ(s(6.0), 300.0);
  EXPECT_DOUBLE_EQ(s(4.0), 200.0);
  const Scale flat(1.0, 1.0, 0.0, 10.0);
  EXPECT_TRUE(std::isfinite(flat(1.0)));
}

TEST(Svg, NiceTicksAreRoundAndCover) {
  const std::vector<double> t = NiceTicks(0.13, 9.7, 5);
  ASSERT_GE(t.size(), 3u);
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_NEAR(t[i] - t[i - 1], t[1] - t[0], 1e-12);
  }
  EXPECT_LE(t.front(), 0.13 + (t[1] - t[0]));
  EXPECT_GE(t.back(), 9.7 - (t[1] - t[0]));
  EXPECT_EQ(NiceTicks(0.0, 10.0, 5), (std::vector<double>{0, 2, 4, 6, 8, 10}));
}

TEST(Svg, DivergingEndsAreBlueAndRed) {
  const std::string blue = Diverging(0.0);
  const std::string red = Diverging(1.0);
  ASSERT_EQ(blue.size(), 7u);
  EXPECT_LT(std::stoi(blue.substr(1, 2), nullptr, 16), std::stoi(blue.substr(5, 2), nullptr, 16));
  EXPECT_GT(std::stoi(red.substr(1, 2), nullptr, 16), std::stoi(red.substr(5, 2), nullptr, 16));
}

TEST(Plots, ImportanceBarHasOneBarPerFeatureAndIsStable) {
  explain::ShapMatrix sm;
  sm.feature_names = {"a", "b", "c"};
  sm.values = testing::UniformMatrix(20, 3, -1.0, 1.0, 4);
  sm.base_value = 0.5;
  const explain::GlobalImportance g = explain::ComputeGlobalImportance(sm);
  const std::string a = ImportanceBarSvg(g);
  EXPECT_EQ(a, ImportanceBarSvg(g));
  EXPECT_EQ(a.find("<svg"), 0u);
  for (const char* name : {">a<", ">b<", ">c<"}) EXPECT_NE(a.find(name), std::string::npos);
}

TEST(Plots, DistributionDrawsHistogramAndNormalCurve) {
  const Matrix m = testing::UniformMatrix(500, 1, 0.0, 1.0, 7);
  const Vector v = m.col(0);
  const std::string svg = DistributionSvg(v, "ln(GMV)", 25);
  EXPECT_GE(Count(svg, "<rect"), 25u);
  EXPECT_EQ(Count(svg, "<polyline"), 1u);
  EXPECT_NE(svg.find("ln(GMV)"), std::string::npos);
  EXPECT_EQ(svg, DistributionSvg(v, "ln(GMV)", 25));
}

}  // namespace
}  // namespace gmvx::report
