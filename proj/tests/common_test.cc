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

#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"
#include "gmvx/common/random.h"

namespace gmvx {
namespace {

TEST(CsvTest, SplitsQuotedFields) {
  EXPECT_EQ(SplitCsvLine(R"(a,"b,c","d""e",)"),
            (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
}

TEST(CsvTest, ParsesHeaderAndSkipsBlankLines) {
  const CsvTable t = ParseCsv("\xEF\xBB\xBFx,y\r\n1,2\n\n3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "4");
}

TEST(CsvTest, RaggedRowIsParseError) {
  try {
    ParseCsv("x,y\n1,2\n3\n");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(CsvTest, EmptyTextIsEmptyInput) {
  try {
    ParseCsv("\n\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(CsvTest, NumberParsing) {
  EXPECT_DOUBLE_EQ(*ParseCsvNumber(" 2.5 "), 2.5);
  EXPECT_DOUBLE_EQ(*ParseCsvNumber("-1e3"), -1000.0);
  EXPECT_TRUE(std::isnan(*ParseCsvNumber("")));
  EXPECT_TRUE(std::isnan(*ParseCsvNumber("NA")));
  EXPECT_FALSE(ParseCsvNumber("abc").has_value());
  EXPECT_FALSE(ParseCsvNumber("1.5x").has_value());
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(rng.Uniform(-1.0, 1.0), static_cast<int>(rng.Below(80)) - 40);
    EXPECT_EQ(*ParseCsvNumber(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatFixed(-0.001, 2), "0.00");
  EXPECT_EQ(FormatFixed(1.005, 1), "1.0");
}

TEST(CsvTest, FnvKnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(HexU64(255), "00000000000000ff");
}

TEST(ErrorTest, UserErrorClassification) {
  EXPECT_TRUE(IsUserError(ErrorCode::kSchema));
  EXPECT_TRUE(IsUserError(ErrorCode::kInvalidArgument));
  EXPECT_FALSE(IsUserError(ErrorCode::kInternal));
  EXPECT_FALSE(IsUserError(ErrorCode::kConvergence));
}

TEST(RandomTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomTest, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(DeriveSeed(5, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(DeriveSeed(5, 1, 2), DeriveSeed(5, 2, 1));
}

TEST(RandomTest, BelowStaysInRangeAndCoversIt) {
  Rng rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[rng.Below(7)];
  for (int c : counts) {
    EXPECT_GT(c, 850);
    EXPECT_LT(c, 1150);
  }
}

TEST(RandomTest, NormalMoments) {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(RandomTest, ShuffleIsPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
  rng.Shuffle(std::span<int>(v));
  std::set<int> s(v.begin(), v.end());
  EXPECT_EQ(s.size(), 50u);
}

TEST(ParallelTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  ParallelFor(1000, [&](std::size_t i) { hits[i]++; }, 4);
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelTest, RethrowsLowestIndexFailure) {
  try {
    ParallelFor(
        100,
        [](std::size_t i) {
          if (i == 30 || i == 70) throw std::runtime_error(std::to_string(i));
        },
        4);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "30");
  }
}

TEST(ParallelTest, NestedCallsComplete) {
  std::atomic<int> total{0};
  ParallelFor(8, [&](std::size_t) {
    ParallelFor(8, [&](std::size_t) { total++; });
  }, 4);
  EXPECT_EQ(total.load(), 64);
}

}  // namespace
}  // namespace gmvx
