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

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "gmvx/common/error.h"
#include "gmvx/common/random.h"
#include "gmvx/dataset/synthetic.h"
#include "gmvx/models/fitted_model.h"
#include "gmvx/tuning/benchmark.h"
#include "gmvx/tuning/cross_validation.h"
#include "gmvx/tuning/grid_search.h"
#include "gmvx/tuning/metrics.h"
#include "testing/fixtures.h"

namespace gmvx::tuning {
namespace {

using models::Algorithm;
using models::Hyperparameters;
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

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

dataset::FoldPlan Plan(std::vector<std::vector<std::size_t>> folds) {
  dataset::FoldPlan plan;
  plan.k = folds.size();
  for (const auto& f : folds) plan.n += f.size();
  plan.folds = std::move(folds);
  return plan;
}

// ---------------------------------------------------------------- metrics

TEST(MetricsTest, HandArithmeticIsExact) {
  const Metrics m = ComputeMetrics(Vec({1, 2}), Vec({2, 4}));
  EXPECT_EQ(m.mae, 1.5);
  EXPECT_EQ(m.mse, 2.5);
  EXPECT_EQ(m.mape, 100.0);
}

TEST(MetricsTest, PerfectPredictionIsZero) {
  const Vector y = Vec({3, -1, 7.5});
  EXPECT_EQ(ComputeMetrics(y, y), (Metrics{0, 0, 0}));
}

TEST(MetricsTest, ZeroTargetIsDomainErrorNamingRow) {
  try {
    ComputeMetrics(Vec({1, 0, 2}), Vec({1, 1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
  EXPECT_TRUE(std::isnan(ComputeMetrics(Vec({1, 0}), Vec({1, 1}), false).mape));
}

TEST(MetricsTest, LengthMismatchIsArgumentError) {
  EXPECT_EQ(CodeOf([] { ComputeMetrics(Vec({1, 2}), Vec({1})); }), ErrorCode::kInvalidArgument);
}

TEST(MetricsTest, JensenAndScaleProperties) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + rng.Below(40));
    Vector y(n), yhat(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = rng.Uniform(0.5, 20.0) * (rng.Below(2) ? 1 : -1);
      yhat[i] = y[i] + rng.Normal() * 3.0;
    }
    const Metrics m = ComputeMetrics(y, yhat);
    EXPECT_LE(m.mae * m.mae, m.mse * (1 + 1e-12));
    double c = rng.Uniform(-10.0, 10.0);
    if (std::abs(c) < 1e-3) c = 2.0;
    const Metrics s = ComputeMetrics(c * y, c * yhat);
    EXPECT_NEAR(s.mae, std::abs(c) * m.mae, 1e-9 * (1 + s.mae));
    EXPECT_NEAR(std::sqrt(s.mse), std::abs(c) * std::sqrt(m.mse), 1e-9 * (1 + s.mse));
    EXPECT_NEAR(s.mape, m.mape, 1e-9 * (1 + m.mape));
  }
}

// ---------------------------------------------------------------- CV

TEST(CrossValidateTest, ConstantPredictorHandTrace) {
  Matrix x(4, 1);
  x << 0, 1, 2, 3;
  const CvResult r = CrossValidate({Algorithm::kDT, {{"max_depth", std::int64_t{0}}}, 0}, x,
                                   Vec({0, 0, 10, 10}), Plan({{0, 1}, {2, 3}}));
  ASSERT_EQ(r.folds.size(), 2u);
  EXPECT_EQ(r.folds[0].mae, 10.0);
  EXPECT_EQ(r.folds[1].mae, 10.0);
  EXPECT_EQ(r.mean.mae, 10.0);
  EXPECT_EQ(r.out_of_fold, Vec({10, 10, 0, 0}));
}

TEST(CrossValidateTest, OneNeighborOnDuplicatedRowsIsExact) {
  const auto d = testing::NoisySine(30, 3, 0.3, 1);
  Matrix x(60, 3);
  x << d.x, d.x;
  Vector y(60);
  y << d.y, d.y;
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < 30; ++i) {
    a.push_back(i);
    b.push_back(i + 30);
  }
  const CvResult r = CrossValidate({Algorithm::kKNN, {{"n_neighbors", std::int64_t{1}}}, 0}, x, y,
                                   Plan({a, b}));
  EXPECT_EQ(r.mean.mae, 0.0);
}

TEST(CrossValidateTest, EveryRowPredictedOnceAndDeterministic) {
  const auto d = testing::NoisySine(97, 3, 0.3, 2);
  const auto plan = dataset::MakeFolds(97, 10, 3);
  const ModelSpec spec{Algorithm::kRF, {{"n_estimators", std::int64_t{10}}}, 4};
  const CvResult r = CrossValidate(spec, d.x, d.y, plan);
  ASSERT_EQ(r.out_of_fold.size(), 97);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const Vector direct = FitPredictFold(spec, d.x, d.y, plan, f);
    for (std::size_t i = 0; i < plan.folds[f].size(); ++i) {
      EXPECT_EQ(r.out_of_fold[static_cast<Eigen::Index>(plan.folds[f][i])],
                direct[static_cast<Eigen::Index>(i)]);
    }
  }
  const CvResult again = CrossValidate(spec, d.x, d.y, plan, 1);
  EXPECT_EQ(again.out_of_fold, r.out_of_fold);
  for (std::size_t f = 0; f < r.folds.size(); ++f) EXPECT_EQ(again.folds[f], r.folds[f]);
}

TEST(CrossValidateTest, EmptyFoldIsPlanError) {
  Matrix x(3, 1);
  x << 0, 1, 2;
  EXPECT_EQ(CodeOf([&] {
              CrossValidate({Algorithm::kLR, {}, 0}, x, Vec({1, 2, 3}), Plan({{0, 1, 2}, {}}));
            }),
            ErrorCode::kPlan);
  EXPECT_EQ(CodeOf([&] {
              CrossValidate({Algorithm::kLR, {}, 0}, x, Vec({1, 2, 3}), dataset::MakeFolds(4, 2, 0));
            }),
            ErrorCode::kPlan);
}

TEST(CrossValidateTest, RawDatasetIsRejected) {
  const auto raw = dataset::Synthesize(dataset::SyntheticSpec::Default(), 40, 1);
  EXPECT_EQ(CodeOf([&] {
              CrossValidate({Algorithm::kLR, {}, 0}, raw, dataset::MakeFolds(40, 4, 0));
            }),
            ErrorCode::kInvalidArgument);
}

// ---------------------------------------------------------------- grids

TEST(GridSpecTest, EnumerationOrderLastNameFastest) {
  GridSpec g{Algorithm::kDT,
             {{"max_depth", {std::int64_t{5}, std::int64_t{10}}},
              {"min_samples_leaf", {std::int64_t{1}, std::int64_t{2}, std::int64_t{4}}}}};
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g.Config(0).ToString(), "max_depth=5, min_samples_leaf=1");
  EXPECT_EQ(g.Config(1).ToString(), "max_depth=5, min_samples_leaf=2");
  EXPECT_EQ(g.Config(3).ToString(), "max_depth=10, min_samples_leaf=1");
  EXPECT_EQ(g.Config(5).ToString(), "max_depth=10, min_samples_leaf=4");
}

TEST(GridSpecTest, ShippedGridsRespectTuningRanges) {
  for (const GridSet& set : {DefaultGrids(), FullGrids()}) {
    EXPECT_EQ(set.size(), 8u);
    for (const auto& [a, grid] : set) {
      EXPECT_TRUE(GridViolations(grid).empty()) << models::AlgorithmName(a);
    }
  }
}

TEST(GridSpecTest, ConfigFilesMatchBuiltIns) {
  const std::string dir = GMVX_SOURCE_DIR "/config/";
  EXPECT_EQ(GridsToJson(LoadGrids(dir + "grids.json")), GridsToJson(DefaultGrids()));
  EXPECT_EQ(GridsToJson(LoadGrids(dir + "grids_full.json")), GridsToJson(FullGrids()));
}

TEST(GridSpecTest, OutOfRangeValuesRejectedUnlessRelaxed) {
  const auto doc = nlohmann::json::parse(R"({"grids": {"DT": {"max_depth": [1, 8]}}})");
  EXPECT_EQ(CodeOf([&] { GridsFromJson(doc); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(GridsFromJson(doc, false).at(Algorithm::kDT).size(), 2u);
  const auto bad = nlohmann::json::parse(R"({"grids": {"SVR": {"kernel": ["cubic"]}}})");
  EXPECT_EQ(CodeOf([&] { GridsFromJson(bad, false); }), ErrorCode::kInvalidArgument);
  const auto unknown = nlohmann::json::parse(R"({"grids": {"XGB": {}}})");
  EXPECT_EQ(CodeOf([&] { GridsFromJson(unknown); }), ErrorCode::kInvalidArgument);
}

TEST(GridSpecTest, JsonRoundTrip) {
  EXPECT_EQ(GridsToJson(GridsFromJson(GridsToJson(FullGrids()))), GridsToJson(FullGrids()));
}

// ---------------------------------------------------------------- search

TEST(GridSearchTest, SingleConfigIsBest) {
  const auto d = testing::NoisySine(60, 2, 0.2, 5);
  const GridSpec g{Algorithm::kLR, {{"fit_intercept", {true}}}};
  const SearchResult r = GridSearch(g, d.x, d.y.array() + 5.0, dataset::MakeFolds(60, 5, 1),
                                    MetricKind::kMape, 0);
  EXPECT_EQ(r.configs.size(), 1u);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best_config.params, g.Config(0));
}

TEST(GridSearchTest, XorNeedsDepthBeyondOne) {
  Rng rng(6);
  Matrix x(200, 2);
  Vector y(200);
  for (Eigen::Index i = 0; i < 200; ++i) {
    x(i, 0) = rng.Uniform();
    x(i, 1) = rng.Uniform();
    y[i] = 1.0 + 9.0 * (((x(i, 0) > 0.5) != (x(i, 1) > 0.5)) ? 1.0 : 0.0);
  }
  const GridSpec g{Algorithm::kDT, {{"max_depth", {std::int64_t{1}, std::int64_t{8}}}}};
  const SearchResult r = GridSearch(g, x, y, dataset::MakeFolds(200, 5, 2), MetricKind::kMape, 0);
  EXPECT_EQ(r.best_config.params.GetInt("max_depth", 0), 8);
  EXPECT_LT(r.configs[1].mean.mae, r.configs[0].mean.mae);
}

TEST(GridSearchTest, FailedConfigsRecordedAndSkipped) {
  const auto d = testing::NoisySine(60, 2, 0.2, 7);
  const GridSpec g{Algorithm::kSVR,
                   {{"C", {100.0}}, {"max_iter", {std::int64_t{2}, std::int64_t{100000}}}}};
  const SearchResult r = GridSearch(g, d.x, d.y.array() + 5.0, dataset::MakeFolds(60, 3, 1),
                                    MetricKind::kMae, 0);
  EXPECT_FALSE(r.configs[0].ok);
  EXPECT_NE(r.configs[0].error.find("convergence"), std::string::npos) << r.configs[0].error;
  EXPECT_TRUE(r.configs[1].ok);
  EXPECT_EQ(r.best_index, 1u);
  const GridSpec all_bad{Algorithm::kSVR, {{"C", {100.0}}, {"max_iter", {std::int64_t{2}}}}};
  EXPECT_EQ(CodeOf([&] {
              GridSearch(all_bad, d.x, d.y, dataset::MakeFolds(60, 3, 1), MetricKind::kMae, 0);
            }),
            ErrorCode::kSearch);
}

TEST(GridSearchTest, BestIsMinimalAndParallelMatchesSerial) {
  const auto d = testing::NoisySine(120, 3, 0.3, 8);
  const Vector y = d.y.array() + 5.0;
  const auto plan = dataset::MakeFolds(120, 5, 9);
  const GridSet grids = DefaultGrids();
  for (Algorithm a : {Algorithm::kDT, Algorithm::kKNN, Algorithm::kAdaBoost}) {
    const SearchResult serial = GridSearch(grids.at(a), d.x, y, plan, MetricKind::kMape, 3, 1);
    const SearchResult parallel = GridSearch(grids.at(a), d.x, y, plan, MetricKind::kMape, 3, 4);
    EXPECT_EQ(SearchToJson(serial), SearchToJson(parallel));
    for (const auto& c : serial.configs) {
      ASSERT_TRUE(c.ok);
      EXPECT_LE(serial.best().mean.mape, c.mean.mape);
    }
  }
}

// ---------------------------------------------------------------- benchmark

GridSet OneConfigEach() {
  GridSet g;
  for (Algorithm a : models::kAllAlgorithms) g[a] = GridSpec{a, {}};
  g[Algorithm::kRF].values["n_estimators"] = {std::int64_t{20}};
  g[Algorithm::kET].values["n_estimators"] = {std::int64_t{20}};
  g[Algorithm::kAdaBoost].values["n_estimators"] = {std::int64_t{10}};
  g[Algorithm::kGBRT].values["n_estimators"] = {std::int64_t{20}};
  return g;
}

TEST(BenchmarkTest, OneConfigGridsEqualPlainCrossValidation) {
  const auto ds = dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 150, 10));
  BenchmarkOptions opt;
  opt.seed = 11;
  opt.folds = 5;
  const BenchmarkReport report = BenchmarkAll(ds, OneConfigEach(), opt);
  ASSERT_EQ(report.rows.size(), 8u);
  const auto plan = dataset::MakeFolds(150, 5, 11);
  for (std::size_t i = 0; i < 8; ++i) {
    const Algorithm a = models::kAllAlgorithms[i];
    EXPECT_EQ(report.rows[i].algorithm, a);
    ASSERT_TRUE(report.rows[i].ok) << report.rows[i].error;
    const CvResult cv = CrossValidate({a, OneConfigEach().at(a).Config(0), 11}, ds, plan);
    EXPECT_EQ(report.rows[i].metrics, cv.mean) << models::AlgorithmName(a);
  }
  // The best algorithm has rank 1.
  EXPECT_EQ(report.RankOf(*report.best), 1u);
}

TEST(BenchmarkTest, SameSeedSameReportAndTableLayout) {
  const auto ds = dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 120, 12));
  BenchmarkOptions opt;
  opt.folds = 4;
  const BenchmarkReport a = BenchmarkAll(ds, OneConfigEach(), opt);
  const BenchmarkReport b = BenchmarkAll(ds, OneConfigEach(), opt);
  EXPECT_EQ(BenchmarkCsv(a), BenchmarkCsv(b));
  EXPECT_EQ(BenchmarkToJson(a).dump(), BenchmarkToJson(b).dump());
  const std::string csv = BenchmarkCsv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,DT,RF,SVR,ET,LR,KNN,AdaBoost,GBRT");
  EXPECT_NE(csv.find("\nMAPE,"), std::string::npos);
}

TEST(BenchmarkTest, HoldoutModeScoresUnseenRows) {
  const auto ds = dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 200, 13));
  BenchmarkOptions opt;
  opt.folds = 4;
  opt.holdout_fraction = 0.25;
  opt.algorithms = {Algorithm::kLR, Algorithm::kDT};
  const BenchmarkReport r = BenchmarkAll(ds, OneConfigEach(), opt);
  EXPECT_EQ(r.holdout_rows, 50u);
  EXPECT_EQ(r.rows_used, 150u);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].algorithm, Algorithm::kDT);
}

TEST(BenchmarkTest, FailuresAreAnnotated) {
  const auto ds = dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 80, 14));
  GridSet g = OneConfigEach();
  g[Algorithm::kSVR].values["max_iter"] = {std::int64_t{1}};
  g[Algorithm::kSVR].values["C"] = {1000.0};
  BenchmarkOptions opt;
  opt.folds = 3;
  opt.algorithms = {Algorithm::kSVR, Algorithm::kLR};
  const BenchmarkReport r = BenchmarkAll(ds, g, opt);
  EXPECT_FALSE(r.Find(Algorithm::kSVR)->ok);
  EXPECT_EQ(*r.best, Algorithm::kLR);
  EXPECT_EQ(r.RankOf(Algorithm::kSVR), 0u);
  const std::string csv = BenchmarkCsv(r);
  EXPECT_NE(csv.find("MAE,,"), std::string::npos) << csv;
}

TEST(BenchmarkTest, MissingGridIsArgumentError) {
  const auto ds = dataset::ApplyTransforms(
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 40, 15));
  GridSet g = OneConfigEach();
  g.erase(Algorithm::kKNN);
  EXPECT_EQ(CodeOf([&] { BenchmarkAll(ds, g, {}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace gmvx::tuning
