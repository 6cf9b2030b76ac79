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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <gtest/gtest.h>

#include "gmvx/common/error.h"
#include "gmvx/common/random.h"
#include "gmvx/dataset/synthetic.h"
#include "gmvx/explain/ale.h"
#include "gmvx/explain/artifacts.h"
#include "gmvx/explain/importance.h"
#include "gmvx/explain/shap3d.h"
#include "gmvx/explain/shapley.h"
#include "gmvx/models/fitted_model.h"
#include "testing/fixtures.h"

namespace gmvx::explain {
namespace {

using models::Algorithm;
using models::ModelSpec;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInternal;
}

Predictor RowWise(std::function<double(std::span<const double>)> f) {
  return [f](const Matrix& x) {
    Vector out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = f(RowSpan(x, i));
    return out;
  };
}

// Shapley values by averaging marginal contributions over all p! orderings,
// with the coalition value as the background mean of the composite rows.
Vector PermutationOracle(const Predictor& f, const Vector& x, const Matrix& bg) {
  const auto p = static_cast<std::size_t>(x.size());
  auto value = [&](const std::vector<bool>& in) {
    Matrix m = bg;
    for (std::size_t j = 0; j < p; ++j) {
      if (in[j]) m.col(static_cast<Eigen::Index>(j)).setConstant(x[static_cast<Eigen::Index>(j)]);
    }
    return f(m).mean();
  };
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector phi = Vector::Zero(x.size());
  double count = 0;
  do {
    std::vector<bool> in(p, false);
    double prev = value(in);
    for (std::size_t j : order) {
      in[j] = true;
      const double next = value(in);
      phi[static_cast<Eigen::Index>(j)] += next - prev;
      prev = next;
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return phi / count;
}

struct Fitted {
  Matrix x;
  Vector y;
  models::FittedModel model;
};

Fitted FitOn(Algorithm a, models::Hyperparameters params, std::size_t n,
             std::size_t p, std::uint64_t seed) {
  auto d = testing::NoisySine(n, p, 0.2, seed);
  auto m = models::Fit({a, std::move(params), seed}, d.x, d.y);
  return {std::move(d.x), std::move(d.y), std::move(m)};
}

std::vector<std::string> Names(std::size_t p) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < p; ++j) out.push_back("f" + std::to_string(j));
  return out;
}

// ---------------------------------------------------------------- Shapley

TEST(ShapleyExactTest, AdditiveHandDerivation) {
  // v(empty) = 0, v({1}) = 3, v({2}) = 5, v({1, 2}) = 8 with a zero-mean
  // background; phi_1 = (3 - 0)/2 + (8 - 5)/2 = 3 and phi_2 = 5.
  const Predictor f = RowWise([](auto r) { return 3 * r[0] + 5 * r[1]; });
  Matrix bg(2, 2);
  bg << -1, -1, 1, 1;
  const std::vector<double> x = {1, 1};
  const ShapleyValues v = ShapleyExact(f, x, bg);
  EXPECT_NEAR(v.phi[0], 3.0, 1e-12);
  EXPECT_NEAR(v.phi[1], 5.0, 1e-12);
  EXPECT_EQ(v.base_value, 0.0);
}

TEST(ShapleyExactTest, ConstantModelAndDummyFeature) {
  const Matrix bg = testing::UniformMatrix(20, 4, -1, 1, 1);
  const std::vector<double> x = {0.3, -0.2, 0.9, 0.5};
  const ShapleyValues c = ShapleyExact(RowWise([](auto) { return 7.5; }), x, bg);
  EXPECT_EQ(c.phi, Vector::Zero(4));
  EXPECT_EQ(c.base_value, 7.5);
  const ShapleyValues d =
      ShapleyExact(RowWise([](auto r) { return std::sin(r[0]) * r[1] + r[3]; }), x, bg);
  EXPECT_EQ(d.phi[2], 0.0);
}

TEST(ShapleyExactTest, MatchesPermutationOracleOnInteractions) {
  const Predictor f = RowWise([](auto r) {
    return r[0] * r[1] + std::max(r[2], r[3]) - r[4] * r[4] * r[0];
  });
  const Matrix bg = testing::UniformMatrix(15, 5, -1, 1, 2);
  const Matrix xs = testing::UniformMatrix(5, 5, -1, 1, 3);
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const Vector oracle = PermutationOracle(f, xs.row(i).transpose(), bg);
    const ShapleyValues v = ShapleyExact(f, RowSpan(xs, i), bg);
    for (Eigen::Index j = 0; j < 5; ++j) EXPECT_NEAR(v.phi[j], oracle[j], 1e-12);
  }
}

TEST(ShapleyExactTest, AxiomsOnTreeAndAdditiveModels) {
  const Fitted dt = FitOn(Algorithm::kDT, {{"max_depth", std::int64_t{6}}}, 300, 7, 4);
  const Fitted rf = FitOn(Algorithm::kRF, {{"n_estimators", std::int64_t{20}}}, 300, 7, 5);
  // Column 7 is a dummy; column 6 duplicates column 0 in values and use.
  auto with_dummy = [](const models::FittedModel& m) {
    return Predictor([&m](const Matrix& x) { return m.Predict(Matrix(x.leftCols(7))); });
  };
  const Predictor additive = RowWise([](auto r) {
    return 2 * r[0] + std::sin(r[1]) - r[2] * r[2] + 0.5 * r[3] + r[4] * r[5] + 2 * r[6];
  });
  Matrix bg = testing::UniformMatrix(60, 8, -2, 2, 6);
  Matrix xs = testing::UniformMatrix(50, 8, -2, 2, 7);
  bg.col(6) = bg.col(0);
  xs.col(6) = xs.col(0);
  for (const Predictor& f : {with_dummy(dt.model), with_dummy(rf.model), additive}) {
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      const ShapleyValues v = ShapleyExact(f, RowSpan(xs, i), bg);
      const double fx = f(Matrix(xs.row(i)))[0];
      EXPECT_LT(std::abs(v.base_value + v.phi.sum() - fx), 1e-6);
      EXPECT_LT(std::abs(v.phi[7]), 1e-9);
    }
  }
  // Symmetric use of the duplicated pair.
  const Predictor sym = RowWise([](auto r) {
    return std::tanh(r[0] * r[1]) + std::tanh(r[6] * r[1]) + r[2];
  });
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const ShapleyValues v = ShapleyExact(sym, RowSpan(xs, i), bg);
    EXPECT_LT(std::abs(v.phi[0] - v.phi[6]), 1e-9);
  }
}

TEST(ShapleyExactTest, TooManyFeaturesIsCapabilityError) {
  const Matrix bg = Matrix::Zero(2, 16);
  const std::vector<double> x(16, 1.0);
  EXPECT_EQ(CodeOf([&] { ShapleyExact(RowWise([](auto) { return 0.0; }), x, bg); }),
            ErrorCode::kCapability);
  EXPECT_EQ(CodeOf([&] {
              ShapleyExact(RowWise([](auto) { return 0.0; }), std::vector<double>{1},
                           Matrix(0, 1));
            }),
            ErrorCode::kEmptyInput);
}

class SampledVsExact : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fitted_ = new Fitted(FitOn(Algorithm::kRF, {{"n_estimators", std::int64_t{30}}}, 400, 8, 8));
    bg_ = new Matrix(SampleBackground(fitted_->x, 100, 1));
  }
  static void TearDownTestSuite() {
    delete fitted_;
    delete bg_;
  }
  static Fitted* fitted_;
  static Matrix* bg_;
};
Fitted* SampledVsExact::fitted_ = nullptr;
Matrix* SampledVsExact::bg_ = nullptr;

TEST_F(SampledVsExact, WithinFivePercentOfRangeAt2000Permutations) {
  const Predictor f = ModelPredictor(fitted_->model);
  for (Eigen::Index i : {0, 1, 2}) {
    const ShapleyValues exact = ShapleyExact(f, RowSpan(fitted_->x, i), *bg_);
    const ShapleyValues sampled = ShapleySampled(f, RowSpan(fitted_->x, i), *bg_, 2000, 9);
    const double range = exact.phi.maxCoeff() - exact.phi.minCoeff();
    EXPECT_LT((sampled.phi - exact.phi).cwiseAbs().maxCoeff(), 0.05 * range);
  }
}

TEST_F(SampledVsExact, ErrorShrinksWithPermutations) {
  const Predictor f = ModelPredictor(fitted_->model);
  const auto x = RowSpan(fitted_->x, 3);
  const ShapleyValues exact = ShapleyExact(f, x, *bg_);
  std::vector<double> err;
  for (std::size_t m : {100, 500, 2000}) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      total += (ShapleySampled(f, x, *bg_, m, 100 + s).phi - exact.phi).cwiseAbs().maxCoeff();
    }
    err.push_back(total / 10);
  }
  EXPECT_GT(err[0], err[1]);
  EXPECT_GT(err[1], err[2]);
}

TEST(ShapleySampledTest, DummyWithinThreeStandardErrorsAndDeterministic) {
  const Predictor f = RowWise([](auto r) { return r[0] * r[1] + std::exp(r[2]); });
  const Matrix bg = testing::UniformMatrix(50, 4, -1, 1, 10);
  const std::vector<double> x = {0.5, -0.7, 0.2, 0.9};
  const ShapleyValues a = ShapleySampled(f, x, bg, 300, 11);
  EXPECT_LE(std::abs(a.phi[3]), 3 * a.std_error[3]);
  const ShapleyValues b = ShapleySampled(f, x, bg, 300, 11);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.std_error, b.std_error);
  // Sample-path efficiency: each permutation telescopes to f(x) - f(b).
  EXPECT_EQ(CodeOf([&] { ShapleySampled(f, x, bg, 0, 1); }), ErrorCode::kInvalidArgument);
}

TEST(ShapMatrixTest, ExactRowsMatchSingleSampleCalls) {
  const Predictor f = RowWise([](auto r) { return 3 * r[0] + 5 * r[1] - r[2]; });
  const Matrix bg = testing::UniformMatrix(10, 3, -1, 1, 12);
  const Matrix x = testing::UniformMatrix(3, 3, -1, 1, 13);
  const ShapMatrix sm = ComputeShapMatrix(f, x, bg, Names(3), {ShapMethod::kExact, 0, 0, 0});
  for (Eigen::Index i = 0; i < 3; ++i) {
    const ShapleyValues v = ShapleyExact(f, RowSpan(x, i), bg);
    EXPECT_EQ(Vector(sm.values.row(i).transpose()), v.phi);
    EXPECT_LT(std::abs(sm.base_value + v.phi.sum() - f(Matrix(x.row(i)))[0]), 1e-6);
  }
  EXPECT_EQ(CodeOf([&] {
              ComputeShapMatrix(f, Matrix::Zero(1, 16), Matrix::Zero(1, 16), Names(16),
                                {ShapMethod::kExact, 0, 0, 0});
            }),
            ErrorCode::kCapability);
}

TEST(ShapMatrixTest, SampledIsBitIdenticalAcrossRunsAndThreads) {
  const Fitted rf = FitOn(Algorithm::kRF, {{"n_estimators", std::int64_t{10}}}, 150, 5, 14);
  const Matrix bg = SampleBackground(rf.x, 40, 2);
  const Matrix x = rf.x.topRows(100);
  const ShapMatrix a = ComputeShapMatrix(ModelPredictor(rf.model), x, bg, Names(5),
                                         {ShapMethod::kSampled, 50, 3, 1});
  const ShapMatrix b = ComputeShapMatrix(ModelPredictor(rf.model), x, bg, Names(5),
                                         {ShapMethod::kSampled, 50, 3, 4});
  EXPECT_EQ(ShapMatrixToCsv(a), ShapMatrixToCsv(b));
  EXPECT_EQ(a.std_errors, b.std_errors);
  // Row seeds depend only on the row position.
  const ShapMatrix tail = ComputeShapMatrix(ModelPredictor(rf.model), x, bg, Names(5),
                                            {ShapMethod::kSampled, 50, 3, 1});
  EXPECT_EQ(tail.values.row(57), a.values.row(57));
}

TEST(BackgroundTest, SubsampleIsSeededSortedAndCapped) {
  const Matrix x = testing::UniformMatrix(1000, 2, 0, 1, 15);
  const Matrix a = SampleBackground(x, 500, 4);
  EXPECT_EQ(a.rows(), 500);
  EXPECT_EQ(a, SampleBackground(x, 500, 4));
  EXPECT_NE(a, SampleBackground(x, 500, 5));
  EXPECT_EQ(SampleBackground(x, 2000, 4), x);
}

// ---------------------------------------------------------------- importance

TEST(ImportanceTest, SumOfAbsoluteValuesAndRanking) {
  ShapMatrix sm;
  sm.feature_names = {"a", "b"};
  sm.values.resize(1, 2);
  sm.values << -2, 1;
  GlobalImportance g = ComputeGlobalImportance(sm);
  EXPECT_EQ(g.sum_abs, (Vector(2) << 2, 1).finished());
  EXPECT_EQ(g.ranking, (std::vector<std::size_t>{0, 1}));

  sm.feature_names = {"a", "b", "c"};
  sm.values.resize(2, 3);
  sm.values << 0, 1, -1, 0, -1, 1;
  g = ComputeGlobalImportance(sm);
  EXPECT_EQ(g.ranking, (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_EQ(g.mean_abs[1], 1.0);
}

dataset::Dataset Transformed(std::size_t n, std::uint64_t seed) {
  return dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), n, seed));
}

dataset::Dataset WithTarget(const dataset::Dataset& ds, Vector y) {
  return dataset::Dataset(ds.schema(), ds.features(), std::move(y), ds.row_ids(),
                          dataset::Scale::kTransformed);
}

TEST(ImportanceTest, PlantedDriversRankFirst) {
  const auto base = Transformed(500, 16);
  const auto c = static_cast<Eigen::Index>(base.Column("Comments"));
  const auto v = static_cast<Eigen::Index>(base.Column("Page_Views"));
  Rng rng(17);
  Vector y(base.features().rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y[i] = 1.5 * base.features()(i, c) + std::sin(base.features()(i, v)) * 2.0 +
           base.features()(i, v) + 0.05 * rng.Normal();
  }
  const auto ds = WithTarget(base, y);
  const auto model = models::Fit({Algorithm::kRF, {{"n_estimators", std::int64_t{40}}}, 1},
                                 ds.features(), ds.target());
  const Matrix bg = SampleBackground(ds.features(), 100, 2);
  const Matrix x = ds.features().topRows(30);
  const ShapMatrix sm = ComputeShapMatrix(ModelPredictor(model), x, bg,
                                          ds.schema().predictor_names(),
                                          {ShapMethod::kSampled, 60, 3, 0});
  const GlobalImportance g = ComputeGlobalImportance(sm);
  std::vector<std::size_t> top = {g.ranking[0], g.ranking[1]};
  std::sort(top.begin(), top.end());
  std::vector<std::size_t> want = {static_cast<std::size_t>(std::min(c, v)),
                                   static_cast<std::size_t>(std::max(c, v))};
  EXPECT_EQ(top, want);
}

TEST(GroupImportanceTest, IdenticalGroupsGiveIdenticalPair) {
  const auto ds = Transformed(120, 18);
  dataset::GroupSplit split;
  for (std::size_t i = 0; i < 60; ++i) split.female.push_back(i);
  split.male = split.female;
  GroupImportanceOptions opt;
  opt.shap = {ShapMethod::kSampled, 10, 1, 0};
  const GroupImportance g = ComputeGroupImportance(
      {Algorithm::kDT, {{"max_depth", std::int64_t{5}}}, 0}, ds, split, opt);
  EXPECT_EQ(g.female.sum_abs, g.male.sum_abs);
  EXPECT_EQ(g.female_test_rows, 6u);
  split.male.resize(9);
  EXPECT_EQ(CodeOf([&] {
              ComputeGroupImportance({Algorithm::kLR, {}, 0}, ds, split, opt);
            }),
            ErrorCode::kDegenerate);
}

TEST(GroupImportanceTest, EachGroupRecoversItsPlantedDriver) {
  const auto base = Transformed(900, 19);
  const auto split = dataset::SplitByGender(base);
  ASSERT_GE(split.male.size(), 60u);
  const auto c = static_cast<Eigen::Index>(base.Column("Comments"));
  const auto np = static_cast<Eigen::Index>(base.Column("Num_Pul"));
  Vector y = Vector::Constant(base.features().rows(), 5.0);
  for (std::size_t i : split.female) {
    y[static_cast<Eigen::Index>(i)] += 2.0 * base.features()(static_cast<Eigen::Index>(i), c);
  }
  for (std::size_t i : split.male) {
    y[static_cast<Eigen::Index>(i)] += 4.0 * base.features()(static_cast<Eigen::Index>(i), np);
  }
  const auto ds = WithTarget(base, y);
  GroupImportanceOptions opt;
  opt.background_rows = 80;
  opt.shap = {ShapMethod::kSampled, 40, 5, 0};
  const GroupImportance g = ComputeGroupImportance(
      {Algorithm::kRF, {{"n_estimators", std::int64_t{30}}}, 3}, ds, split, opt);
  EXPECT_EQ(g.female.ranking[0], static_cast<std::size_t>(c));
  EXPECT_EQ(g.male.ranking[0], static_cast<std::size_t>(np));
}

TEST(SummaryPointsTest, RankQuantileConvention) {
  EXPECT_EQ(RankQuantiles((Vector(3) << 1, 2, 3).finished()),
            (Vector(3) << 0, 0.5, 1).finished());
  EXPECT_EQ(RankQuantiles(Vector::Constant(4, 2.0)), Vector::Constant(4, 0.5));
  EXPECT_EQ(RankQuantiles((Vector(4) << 5, 1, 5, 0).finished()),
            (Vector(4) << 2.5 / 3, 1.0 / 3, 2.5 / 3, 0).finished());
}

TEST(SummaryPointsTest, OnePointPerCellOrderedByImportance) {
  ShapMatrix sm;
  sm.feature_names = {"a", "b"};
  sm.values.resize(3, 2);
  sm.values << 0.1, -3, 0.2, 1, 0.0, 2;
  Matrix x(3, 2);
  x << 1, 9, 2, 8, 3, 7;
  const SummaryPoints s = ComputeSummaryPoints(sm, x);
  ASSERT_EQ(s.points.size(), 6u);
  EXPECT_EQ(s.feature_order, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.points[0].feature, 1u);
  EXPECT_EQ(s.points[0].quantile, 1.0);
  EXPECT_EQ(s.points[0].phi, -3.0);
  for (const auto& pt : s.points) {
    EXPECT_GE(pt.quantile, 0.0);
    EXPECT_LE(pt.quantile, 1.0);
  }
  EXPECT_EQ(CodeOf([&] { ComputeSummaryPoints(sm, Matrix(2, 2)); }),
            ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------- ALE

double Type7(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * q;
  const auto lo = static_cast<std::size_t>(h);
  return lo + 1 < v.size() ? v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo])
                           : v.back();
}

double WeightedMean(const AleCurve& c) {
  double s = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < c.bins(); ++k) {
    s += static_cast<double>(c.counts[k]) * c.centered[static_cast<Eigen::Index>(k)];
    n += c.counts[k];
  }
  return s / static_cast<double>(n);
}

TEST(AleTest, ConstantModelGivesZeroCurve) {
  const Matrix x = testing::UniformMatrix(200, 3, 0, 1, 20);
  const AleCurve c = ComputeAle(RowWise([](auto) { return 4.0; }), x, 1, {});
  EXPECT_EQ(c.bins(), 20u);
  EXPECT_EQ(c.centered, Vector::Zero(20));
}

TEST(AleTest, LinearSlopeRecoveredAndCentered) {
  const Matrix x = testing::UniformMatrix(5000, 4, 0, 1, 21);
  const Predictor f = RowWise([](auto r) {
    return 2 * r[1] + std::sin(3 * r[0]) + r[2] * r[3];
  });
  const AleCurve c = ComputeAle(f, x, 1, {});
  ASSERT_EQ(c.bins(), 20u);
  // Least-squares slope of the centered curve against the upper edges.
  const Vector u = c.edges.tail(20);
  const double mu = u.mean();
  const double slope = ((u.array() - mu) * (c.centered.array() - c.centered.mean())).sum() /
                       (u.array() - mu).square().sum();
  EXPECT_NEAR(slope, 2.0, 0.1);
  EXPECT_LT(std::abs(WeightedMean(c)), 1e-9);
  std::size_t total = 0;
  for (auto k : c.counts) total += k;
  EXPECT_EQ(total, 5000u);
  // Independent edge and count computation.
  std::vector<double> col(5000);
  for (Eigen::Index i = 0; i < 5000; ++i) col[static_cast<std::size_t>(i)] = x(i, 1);
  for (int k = 0; k <= 20; ++k) EXPECT_EQ(c.edges[k], Type7(col, k / 20.0));
  for (int k = 0; k < 20; ++k) {
    const auto in = std::count_if(col.begin(), col.end(), [&](double v) {
      return (v > c.edges[k] || (k == 0 && v == c.edges[0])) && v <= c.edges[k + 1];
    });
    EXPECT_EQ(static_cast<std::size_t>(in), c.counts[static_cast<std::size_t>(k)]);
  }
}

TEST(AleTest, AdditiveComponentRecoveredUpToConstant) {
  const Matrix x = testing::UniformMatrix(5000, 3, -1, 2, 22);
  auto g = [](double v) { return v * v * v - 2 * v * v + v; };
  const Predictor f = RowWise([&](auto r) { return g(r[0]) + std::cos(r[1]) * r[2]; });
  const AleCurve c = ComputeAle(f, x, 0, {});
  // The curve is reported at each bin's upper edge.
  const Eigen::Index k = static_cast<Eigen::Index>(c.bins());
  Vector truth(k);
  for (Eigen::Index b = 0; b < k; ++b) truth[b] = g(c.edges[b + 1]);
  const Vector diff = (c.centered - truth).array() - (c.centered - truth).mean();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 0.05 * (truth.maxCoeff() - truth.minCoeff()));
}

TEST(AleTest, EqualBinCountsOnDistinctValues) {
  // 19175 distinct values over 20 bins: 958 or 959 rows per bin.
  Matrix x(19175, 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = static_cast<double>((i * 7919) % 19175);
  const AleCurve c = ComputeAle(RowWise([](auto r) { return r[0]; }), x, 0, {});
  ASSERT_EQ(c.bins(), 20u);
  for (auto k : c.counts) {
    EXPECT_GE(k, 958u);
    EXPECT_LE(k, 959u);
  }
}

TEST(AleTest, TiesCollapseEdgesAndEmptyBinsMerge) {
  Matrix x(100, 1);
  for (Eigen::Index i = 0; i < 100; ++i) x(i, 0) = i < 80 ? 0.0 : static_cast<double>(i - 79);
  const Predictor f = RowWise([](auto r) { return r[0] * r[0]; });
  const AleCurve c = ComputeAle(f, x, 0, {});
  EXPECT_FALSE(c.notes.empty());
  EXPECT_LT(c.bins(), 20u);
  std::size_t total = 0;
  for (std::size_t k = 0; k < c.bins(); ++k) {
    EXPECT_GT(c.counts[k], 0u);
    EXPECT_LT(c.edges[static_cast<Eigen::Index>(k)], c.edges[static_cast<Eigen::Index>(k + 1)]);
    total += c.counts[k];
  }
  EXPECT_EQ(total, 100u);
  EXPECT_LT(std::abs(WeightedMean(c)), 1e-9);

  Matrix two(8, 1);
  two << 0, 0, 0, 0, 10, 10, 10, 10;
  const AleCurve m = ComputeAle(f, two, 0, {});
  EXPECT_EQ(m.bins(), 1u);
  EXPECT_EQ(m.counts[0], 8u);
  EXPECT_EQ(m.local_effects[0], 100.0);

  Matrix three(30, 1);
  for (Eigen::Index i = 0; i < 30; ++i) three(i, 0) = static_cast<double>(i % 3);
  EXPECT_NE(ComputeAle(f, three, 0, {}).notes.front().find("distinct"), std::string::npos);

  EXPECT_EQ(CodeOf([&] { ComputeAle(f, Matrix::Ones(5, 1), 0, {}); }), ErrorCode::kDegenerate);
  EXPECT_EQ(CodeOf([&] { ComputeAle(f, x, 0, {1, 0}); }), ErrorCode::kInvalidArgument);
}

TEST(AleTest, TrajectoriesOfAdditiveModelEqualTheCurve) {
  const Matrix x = testing::UniformMatrix(400, 2, 0, 1, 23);
  const Predictor f = RowWise([](auto r) { return std::exp(r[0]) + 3 * r[1]; });
  AleOptions opt;
  opt.trajectory_rows = 5;
  const AleCurve c = ComputeAle(f, x, 0, opt);
  ASSERT_EQ(c.trajectories.rows(), 5);
  EXPECT_EQ(c.trajectory_row_ids, (std::vector<std::size_t>{0, 80, 160, 240, 320}));
  for (Eigen::Index r = 0; r < 5; ++r) {
    for (Eigen::Index k = 1; k <= 20; ++k) {
      EXPECT_NEAR(c.trajectories(r, k), c.centered[k - 1], 1e-9);
    }
  }
}

// ---------------------------------------------------------------- 3D-SHAP

// O(n^2) smoothing with the same conventions: standardized axes, k nearest
// by (distance, row) with the point itself always included.
Vector BruteSmooth(const Vector& x, const Vector& y, const Vector& z, std::size_t k) {
  auto standardize = [](const Vector& v) {
    const double m = v.mean();
    const double sd = std::sqrt((v.array() - m).square().mean());
    return Vector((v.array() - m) / (sd > 0 ? sd : 1.0));
  };
  const Vector sx = standardize(x), sy = standardize(y);
  const auto n = x.size();
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Eigen::Index>> d;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double dx = sx[t] - sx[i], dy = sy[t] - sy[i];
      d.push_back({t == i ? -1.0 : dx * dx + dy * dy, t});
    }
    std::sort(d.begin(), d.end());
    double s = 0;
    for (std::size_t t = 0; t < k; ++t) s += z[d[t].second];
    out[i] = s / static_cast<double>(k);
  }
  return out;
}

TEST(Shap3DTest, SmoothingMatchesBruteForce) {
  Rng rng(24);
  Vector x(200), y(200), z(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    x[i] = std::round(rng.Uniform(0, 10));  // ties on purpose
    y[i] = x[i] + rng.Normal();
    z[i] = rng.Normal();
  }
  const Shap3DSurface s = ComputeShap3D(x, y, z, {7, 100});
  const Vector oracle = BruteSmooth(x, y, z, 7);
  EXPECT_LT((s.z_smoothed - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Shap3DTest, NeighborhoodExtremes) {
  Rng rng(25);
  Vector x(50), y(50), z(50);
  for (Eigen::Index i = 0; i < 50; ++i) {
    x[i] = rng.Uniform();
    y[i] = rng.Uniform();
    z[i] = rng.Normal();
  }
  x[7] = x[3];
  y[7] = y[3];
  EXPECT_EQ(ComputeShap3D(x, y, z, {1, 100}).z_smoothed, z);
  const Shap3DSurface all = ComputeShap3D(x, y, z, {50, 100});
  for (Eigen::Index i = 0; i < 50; ++i) EXPECT_NEAR(all.z_smoothed[i], z.mean(), 1e-12);
  EXPECT_EQ(ComputeShap3D(x, y, z, {0, 100}).k_neighbors, 7u);
  EXPECT_EQ(CodeOf([&] { ComputeShap3D(x, y, z, {51, 100}); }), ErrorCode::kInvalidArgument);
}

TEST(Shap3DTest, SmoothedValuesStayInRawRange) {
  Rng rng(26);
  Vector x(300), y(300), z(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    x[i] = rng.Normal();
    y[i] = rng.Normal();
    z[i] = rng.Normal() * 3;
  }
  const Shap3DSurface s = ComputeShap3D(x, y, z, {});
  EXPECT_GE(s.z_smoothed.minCoeff(), z.minCoeff());
  EXPECT_LE(s.z_smoothed.maxCoeff(), z.maxCoeff());
  EXPECT_GE(s.grid_z.minCoeff(), z.minCoeff());
  EXPECT_LE(s.grid_z.maxCoeff(), z.maxCoeff());
  EXPECT_EQ(s.grid_x.size(), 100);
}

TEST(Shap3DTest, SigmoidRelationGivesMonotoneGrid) {
  Rng rng(27);
  const Eigen::Index n = 2000;
  Vector x(n), y(n), z(n);
  const double noise = 0.1;
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = rng.Uniform(0, 15);
    y[i] = 0.8 * x[i] + rng.Normal();
    z[i] = 2.0 / (1.0 + std::exp(-(x[i] - 7.0))) + noise * rng.Normal();
  }
  const Shap3DSurface s = ComputeShap3D(x, y, z, {});
  // Averages of k noisy values: allow a few standard errors of slack.
  const double band = 4.0 * noise / std::sqrt(static_cast<double>(s.k_neighbors));
  for (Eigen::Index g = 1; g < s.grid_z.size(); ++g) {
    EXPECT_GE(s.grid_z[g], s.grid_z[g - 1] - band) << g;
  }
}

Vector Grid(double lo, double hi, Eigen::Index n) {
  return Vector::LinSpaced(n, lo, hi);
}

TEST(DetectThresholdsTest, KnotsOnGridAreExact) {
  const Vector gx = Grid(0, 10, 51);
  Vector gz(51);
  for (Eigen::Index i = 0; i < 51; ++i) {
    const double v = gx[i];
    gz[i] = 0.1 * v + 1.5 * std::max(0.0, v - gx[12]) - 1.4 * std::max(0.0, v - gx[33]);
  }
  const ThresholdFit t = DetectThresholds(gx, gz);
  EXPECT_EQ(t.first_index, 12u);
  EXPECT_EQ(t.second_index, 33u);
  EXPECT_NEAR(t.slopes[0], 0.1, 1e-9);
  EXPECT_NEAR(t.slopes[1], 1.6, 1e-9);
  EXPECT_NEAR(t.slopes[2], 0.2, 1e-9);
  EXPECT_LT(t.sse, 1e-18);
  EXPECT_FALSE(t.degenerate);
}

TEST(DetectThresholdsTest, OffGridBreaksWithinOneCell) {
  const Vector gx = Grid(0, 15, 100);
  const double cell = gx[1] - gx[0];
  Vector gz(100);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const double v = gx[i];
    gz[i] = v < 4.2 ? 0.05 * v : v < 9.5 ? 0.21 + 0.8 * (v - 4.2) : 0.21 + 0.8 * 5.3 + 0.1 * (v - 9.5);
  }
  const ThresholdFit t = DetectThresholds(gx, gz);
  EXPECT_LE(std::abs(t.first - 4.2), cell);
  EXPECT_LE(std::abs(t.second - 9.5), cell);
  EXPECT_GT(t.slopes[1], t.slopes[0]);
  EXPECT_GT(t.slopes[1], t.slopes[2]);
  EXPECT_FALSE(t.declining_tail);
}

TEST(DetectThresholdsTest, StraightLineIsDegenerate) {
  const Vector gx = Grid(0, 5, 40);
  const ThresholdFit t = DetectThresholds(gx, 3.0 * gx.array() - 1.0);
  EXPECT_TRUE(t.degenerate);
  EXPECT_NEAR(t.slopes[0], 3.0, 1e-9);
  EXPECT_NEAR(t.slopes[2], 3.0, 1e-9);
}

TEST(DetectThresholdsTest, InvertedUFlagsDecliningTail) {
  const Vector gx = Grid(0, 15, 100);
  const Vector gz = -(gx.array() - 10.0).square() / 10.0;
  const ThresholdFit t = DetectThresholds(gx, gz);
  EXPECT_LT(t.slopes[2], 0.0);
  EXPECT_TRUE(t.declining_tail);
  EXPECT_FALSE(t.degenerate);
}

TEST(DetectThresholdsTest, ShortGridIsInsufficient) {
  EXPECT_EQ(CodeOf([] { DetectThresholds(Grid(0, 1, 5), Grid(0, 1, 5)); }),
            ErrorCode::kInsufficientData);
  // Six points: exactly one admissible breakpoint pair.
  const ThresholdFit t = DetectThresholds(Grid(0, 5, 6), Grid(0, 5, 6));
  EXPECT_EQ(t.first_index, 1u);
  EXPECT_EQ(t.second_index, 3u);
}

// ---------------------------------------------------------------- artifacts

TEST(ArtifactsTest, CsvRoundTrips) {
  ShapMatrix sm;
  sm.feature_names = {"a", "b"};
  sm.values.resize(2, 2);
  sm.values << 0.1, -1.0 / 3, 1e-300, 2.5;
  sm.base_value = M_PI;
  const ShapMatrix back = ShapMatrixFromCsv(ShapMatrixToCsv(sm));
  EXPECT_EQ(back.values, sm.values);
  EXPECT_EQ(back.base_value, sm.base_value);
  EXPECT_EQ(back.feature_names, sm.feature_names);
  EXPECT_EQ(ShapMatrixToCsv(back), ShapMatrixToCsv(sm));

  const GlobalImportance g = ComputeGlobalImportance(sm);
  EXPECT_EQ(ImportanceToCsv(ImportanceFromCsv(ImportanceToCsv(g))), ImportanceToCsv(g));

  const Matrix x = testing::UniformMatrix(300, 2, 0, 1, 28);
  const AleCurve c = ComputeAle(RowWise([](auto r) { return std::sqrt(r[0]) * r[1]; }), x, 0, {});
  const AleCurve cb = AleFromCsv(AleToCsv(c));
  EXPECT_EQ(cb.edges, c.edges);
  EXPECT_EQ(cb.counts, c.counts);
  EXPECT_EQ(cb.centered, c.centered);
  EXPECT_EQ(AleToCsv(cb), AleToCsv(c));

  Rng rng(29);
  Vector px(40), py(40), pz(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    px[i] = rng.Normal();
    py[i] = rng.Normal();
    pz[i] = rng.Normal();
  }
  const Shap3DSurface s = ComputeShap3D(px, py, pz, {});
  const Shap3DSurface sb = Shap3DFromCsv(Shap3DPointsToCsv(s), Shap3DGridToCsv(s));
  EXPECT_EQ(sb.z_smoothed, s.z_smoothed);
  EXPECT_EQ(sb.grid_z, s.grid_z);
  EXPECT_EQ(Shap3DPointsToCsv(sb), Shap3DPointsToCsv(s));
  EXPECT_TRUE(Shap3DMetaJson(s)["thresholds"].is_object());
}

TEST(ArtifactsTest, MalformedInputsAreParseErrors) {
  EXPECT_EQ(CodeOf([] { ShapMatrixFromCsv("a,b\n1,2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ShapMatrixFromCsv("a,base_value\nx,2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] {
              AleFromCsv(
                  "bin_index,left_edge,right_edge,count,local_effect,accumulated_centered\n"
                  "0,0,1,3,1,0\n1,2,3,3,1,0\n");
            }),
            ErrorCode::kParse);
}

}  // namespace
}  // namespace gmvx::explain
