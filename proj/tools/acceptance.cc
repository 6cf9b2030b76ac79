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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// here and nowhere else. Usage: gmvx_acceptance [criterion ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmvx/cli/commands.h"
#include "gmvx/common/csv.h"
#include "gmvx/common/random.h"
#include "gmvx/dataset/dataset.h"
#include "gmvx/dataset/synthetic.h"
#include "gmvx/explain/ale.h"
#include "gmvx/explain/shap3d.h"
#include "gmvx/explain/shapley.h"
#include "gmvx/models/adaboost.h"
#include "gmvx/models/fitted_model.h"
#include "gmvx/tuning/benchmark.h"
#include "gmvx/tuning/grid_search.h"
#include "gmvx/tuning/metrics.h"

namespace gmvx {
namespace {

namespace fs = std::filesystem;
using models::Algorithm;
using models::Hyperparameters;

// Pinned tolerances.
constexpr double kRuntimeLimitSeconds = 600.0;
constexpr double kEfficiencyTol = 1e-6;
constexpr double kDummyTol = 1e-9;
constexpr double kDuplicateTol = 1e-9;
constexpr double kSamplerRangeFraction = 0.05;
constexpr double kAleSlopeRelTol = 0.05;
constexpr double kAleMeanTol = 1e-9;
constexpr double kFoldSpread = 1.0;
constexpr double kCalibrationMeanRelTol = 0.10;
constexpr double kCalibrationCorrTol = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Matrix Uniform(std::size_t n, std::size_t p, double lo, double hi, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.Uniform(lo, hi);
  return x;
}

// y = sin(x0) + 0.5 x1^2 - 0.3 x2 + x3 x4 + noise
Vector Response(const Matrix& x, double noise, std::uint64_t seed) {
  Rng rng(seed);
  Vector y(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double v = std::sin(x(r, 0)) + 0.5 * x(r, 1) * x(r, 1) - 0.3 * x(r, 2);
    if (x.cols() > 4) v += x(r, 3) * x(r, 4);
    y[r] = v + noise * rng.Normal();
  }
  return y;
}

explain::Predictor RowWise(std::function<double(const double*)> f) {
  return [f](const Matrix& x) {
    Vector out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const Eigen::RowVectorXd row = x.row(r);
      out[r] = f(row.data());
    }
    return out;
  };
}

std::string Num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

// ------------------------------------------------------------------ 1

Outcome BenchmarkOrdering() {
  const auto start = std::chrono::steady_clock::now();
  const dataset::Dataset raw =
      dataset::Synthesize(dataset::SyntheticSpec::Default(), 2000, 2024);
  const dataset::Dataset ds = dataset::ApplyTransforms(raw);
  tuning::BenchmarkOptions opt;
  opt.seed = 2024;
  const tuning::BenchmarkReport report =
      tuning::BenchmarkAll(ds, tuning::DefaultGrids(), opt);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto* rf = report.Find(Algorithm::kRF);
  const auto* lr = report.Find(Algorithm::kLR);
  if (!rf || !lr || !rf->ok || !lr->ok) return {false, "RF or LR failed"};
  const std::size_t rank = report.RankOf(Algorithm::kRF);
  std::string detail = "RF MAPE " + Num(rf->metrics.mape) + "% < LR " +
                       Num(lr->metrics.mape) + "%, RF rank " + std::to_string(rank) +
                       "/8, " + Num(seconds) + " s; ranking:";
  std::vector<std::pair<std::size_t, std::string>> order;
  for (const auto& row : report.rows) {
    order.emplace_back(report.RankOf(row.algorithm),
                       std::string(models::AlgorithmName(row.algorithm)));
  }
  std::sort(order.begin(), order.end());
  for (const auto& [r, name] : order) detail += " " + name;
  return {rf->metrics.mape < lr->metrics.mape && rank >= 1 && rank <= 2 &&
              seconds < kRuntimeLimitSeconds,
          detail};
}

// ------------------------------------------------------------------ 2

Outcome ShapleyAxioms() {
  const Matrix train = Uniform(300, 6, -2, 2, 4);
  const Vector y = Response(train, 0.2, 5);
  const models::FittedModel dt =
      models::Fit({Algorithm::kDT, {{"max_depth", std::int64_t{6}}}, 4}, train, y);
  const models::FittedModel rf =
      models::Fit({Algorithm::kRF, {{"n_estimators", std::int64_t{20}}}, 5}, train, y);

  Matrix bg = Uniform(60, 8, -2, 2, 6);
  Matrix xs = Uniform(50, 8, -2, 2, 7);
  bg.col(6) = bg.col(0);
  xs.col(6) = xs.col(0);

  // Column 7 never reaches the model. Columns 0 and 6 are interchangeable:
  // the six-input model is averaged over feeding either as its first input.
  auto symmetric = [](const models::FittedModel& m) {
    return explain::Predictor([&m](const Matrix& x) {
      Matrix a = x.leftCols(6);
      Matrix b = a;
      b.col(0) = x.col(6);
      return Vector(0.5 * (m.Predict(a) + m.Predict(b)));
    });
  };
  const explain::Predictor additive = RowWise([](const double* r) {
    return 2 * r[0] + std::sin(r[1]) - r[2] * r[2] + 0.5 * r[3] + r[4] + 2 * r[6];
  });
  const std::vector<std::pair<std::string, explain::Predictor>> cases = {
      {"DT", symmetric(dt)}, {"RF", symmetric(rf)}, {"additive", additive}};
  double eff = 0.0, dummy = 0.0, dup = 0.0;
  for (const auto& [name, f] : cases) {
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      const explain::ShapleyValues v = explain::ShapleyExact(f, RowSpan(xs, i), bg);
      const double fx = f(Matrix(xs.row(i)))[0];
      eff = std::max(eff, std::abs(v.base_value + v.phi.sum() - fx));
      dummy = std::max(dummy, std::abs(v.phi[7]));
      dup = std::max(dup, std::abs(v.phi[0] - v.phi[6]));
    }
  }
  return {eff < kEfficiencyTol && dummy < kDummyTol && dup < kDuplicateTol,
          "3 models x 50 samples, p = 8: max efficiency gap " + Num(eff) +
              ", max |dummy| " + Num(dummy) + ", max |duplicate gap| " + Num(dup)};
}

// ------------------------------------------------------------------ 3

Outcome SamplerVsExact() {
  const Matrix train = Uniform(400, 8, -2, 2, 8);
  const Vector y = Response(train, 0.2, 9);
  const models::FittedModel rf =
      models::Fit({Algorithm::kRF, {{"n_estimators", std::int64_t{30}}}, 8}, train, y);
  const explain::Predictor f = explain::ModelPredictor(rf);
  const Matrix bg = explain::SampleBackground(train, 100, 1);
  double worst_ratio = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto exact = explain::ShapleyExact(f, RowSpan(train, i), bg);
    const auto sampled = explain::ShapleySampled(f, RowSpan(train, i), bg, 2000, 9);
    const double range = exact.phi.maxCoeff() - exact.phi.minCoeff();
    worst_ratio = std::max(worst_ratio,
                           (sampled.phi - exact.phi).cwiseAbs().maxCoeff() / range);
  }
  const auto x = RowSpan(train, 3);
  const auto exact = explain::ShapleyExact(f, x, bg);
  std::vector<double> err;
  for (std::size_t m : {100, 500, 2000}) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      total += (explain::ShapleySampled(f, x, bg, m, 100 + s).phi - exact.phi)
                   .cwiseAbs()
                   .maxCoeff();
    }
    err.push_back(total / 10);
  }
  return {worst_ratio < kSamplerRangeFraction && err[0] > err[1] && err[1] > err[2],
          "max error / range at 2000 permutations " + Num(worst_ratio) +
              "; mean max error over 10 seeds at 100/500/2000: " + Num(err[0]) + " > " +
              Num(err[1]) + " > " + Num(err[2])};
}

// ------------------------------------------------------------------ 4

Outcome AleSlope() {
  const Matrix x = Uniform(5000, 4, 0, 1, 11);
  const explain::Predictor f = RowWise([](const double* r) {
    return 2 * r[1] + std::sin(3 * r[0]) * r[2] + r[3] * r[3];
  });
  const explain::AleCurve c = explain::ComputeAle(f, x, 1, {20, 0}, "x1");
  // Least squares of the centered curve against the bin upper edges.
  const auto k = static_cast<Eigen::Index>(c.bins());
  const Vector u = c.edges.tail(k);
  const double um = u.mean();
  const double zm = c.centered.mean();
  const double slope = ((u.array() - um) * (c.centered.array() - zm)).sum() /
                       (u.array() - um).square().sum();
  double weighted = 0.0;
  for (Eigen::Index b = 0; b < k; ++b) {
    weighted += static_cast<double>(c.counts[static_cast<std::size_t>(b)]) * c.centered[b];
  }
  weighted /= static_cast<double>(x.rows());
  return {std::abs(slope - 2.0) / 2.0 < kAleSlopeRelTol && std::abs(weighted) < kAleMeanTol &&
              c.bins() == 20,
          "slope " + Num(slope) + " (target 2), count-weighted mean " + Num(weighted) +
              ", bins " + std::to_string(c.bins())};
}

// ------------------------------------------------------------------ 5

Outcome MetricExactness() {
  Vector y(2), yhat(2);
  y << 1, 2;
  yhat << 2, 4;
  const tuning::Metrics m = tuning::ComputeMetrics(y, yhat);
  const tuning::Metrics perfect = tuning::ComputeMetrics(y, y);
  const bool ok = m.mae == 1.5 && m.mse == 2.5 && m.mape == 100.0 && perfect.mae == 0.0 &&
                  perfect.mse == 0.0 && perfect.mape == 0.0;
  return {ok, "([1,2],[2,4]) -> (" + FormatDouble(m.mae) + ", " + FormatDouble(m.mse) + ", " +
                  FormatDouble(m.mape) + "%); perfect -> (" + FormatDouble(perfect.mae) +
                  ", " + FormatDouble(perfect.mse) + ", " + FormatDouble(perfect.mape) + "%)"};
}

// ------------------------------------------------------------------ 6

Outcome ModelEquivalences() {
  const Matrix x = Uniform(200, 5, -2, 2, 12);
  const Vector y = Response(x, 0.3, 13);
  const Matrix probe = Uniform(300, 5, -3, 3, 14);
  std::vector<std::string> notes;
  bool ok = true;

  const Hyperparameters limits{{"max_depth", std::int64_t{6}},
                               {"min_samples_leaf", std::int64_t{2}},
                               {"max_features", std::string("all")}};
  Hyperparameters rf = limits;
  rf.Set("n_estimators", std::int64_t{1});
  rf.Set("bootstrap", false);
  const bool rf_dt = models::Fit({Algorithm::kDT, limits, 1}, x, y).Predict(probe) ==
                     models::Fit({Algorithm::kRF, rf, 99}, x, y).Predict(probe);
  ok = ok && rf_dt;
  notes.push_back(std::string("RF(1 tree) == DT ") + (rf_dt ? "exact" : "DIFFERS"));

  const Hyperparameters depth{{"max_depth", std::int64_t{3}}};
  Hyperparameters gb = depth;
  gb.Set("n_estimators", std::int64_t{1});
  gb.Set("learning_rate", 1.0);
  const Vector g = models::Fit({Algorithm::kGBRT, gb, 1}, x, y).Predict(probe);
  const Vector residual = y.array() - y.mean();
  const Vector t = models::Fit({Algorithm::kDT, depth, 1}, x, residual).Predict(probe);
  const Vector expected = t.array() + y.mean();
  const bool gb_ok = g == expected;
  ok = ok && gb_ok;
  notes.push_back(std::string("GBRT(M=1, lr=1) == mean + residual DT ") +
                  (gb_ok ? "exact" : "DIFFERS by " + Num((g - expected).cwiseAbs().maxCoeff())));

  const models::FittedModel ada = models::Fit(
      {Algorithm::kAdaBoost, {{"n_estimators", std::int64_t{1}}}, 1}, x, y);
  const auto& stages = ada.as<models::AdaBoostModel>().stages;
  const bool ada_ok = stages.size() == 1 && ada.Predict(probe) == stages[0].Predict(probe);
  ok = ok && ada_ok;
  notes.push_back(std::string("AdaBoost(K=1) == its stump ") + (ada_ok ? "exact" : "DIFFERS"));

  Rng rng(15);
  Matrix grid(400, 3);
  for (Eigen::Index r = 0; r < grid.rows(); ++r)
    for (Eigen::Index c = 0; c < 3; ++c) grid(r, c) = static_cast<double>(rng.Below(8));
  Vector gy(400);
  for (Eigen::Index r = 0; r < 400; ++r) gy[r] = rng.Normal();
  Matrix queries(1000, 3);
  for (Eigen::Index r = 0; r < 1000; ++r)
    for (Eigen::Index c = 0; c < 3; ++c)
      queries(r, c) = r % 2 ? rng.Uniform(-1, 9) : static_cast<double>(rng.Below(8));
  bool knn_ok = true;
  for (const char* w : {"uniform", "distance"}) {
    std::vector<Vector> out;
    for (const char* backend : {"brute", "kd_tree", "ball_tree"}) {
      out.push_back(models::Fit({Algorithm::kKNN,
                                 {{"n_neighbors", std::int64_t{5}},
                                  {"weights", std::string(w)},
                                  {"algorithm", std::string(backend)},
                                  {"leaf_size", std::int64_t{10}}},
                                 1},
                                grid, gy)
                        .Predict(queries));
    }
    knn_ok = knn_ok && out[0] == out[1] && out[0] == out[2];
  }
  ok = ok && knn_ok;
  notes.push_back(std::string("KNN brute/kd_tree/ball_tree on 1000 queries ") +
                  (knn_ok ? "identical" : "DIFFER"));

  std::string detail;
  for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
  return {ok, detail};
}

// ------------------------------------------------------------------ 7

Outcome FoldIntegrity() {
  Rng rng(16);
  std::size_t bad = 0;
  std::size_t worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.Below(19);
    const std::size_t n = k + rng.Below(3000);
    const std::uint64_t seed = rng.Below(1u << 30);
    const dataset::FoldPlan plan = dataset::MakeFolds(n, k, seed);
    std::vector<int> seen(n, 0);
    std::size_t lo = n, hi = 0;
    for (const auto& fold : plan.folds) {
      lo = std::min(lo, fold.size());
      hi = std::max(hi, fold.size());
      for (std::size_t i : fold) {
        if (i < n) ++seen[i];
      }
    }
    const bool partition =
        plan.folds.size() == k && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    worst = std::max(worst, hi - lo);
    if (!partition || static_cast<double>(hi - lo) > kFoldSpread) ++bad;
  }
  return {bad == 0, "200 random (n, k, seed): " + std::to_string(bad) +
                        " violations, largest size spread " + std::to_string(worst)};
}

// ------------------------------------------------------------------ 8

Outcome ThresholdDetector() {
  const std::size_t g = 100;
  Vector gx(static_cast<Eigen::Index>(g)), gz(gx.size()), iu(gx.size());
  for (std::size_t i = 0; i < g; ++i) {
    const double x = 15.0 * static_cast<double>(i) / static_cast<double>(g - 1);
    const auto e = static_cast<Eigen::Index>(i);
    gx[e] = x;
    gz[e] = x <= 4.2 ? 0.1 * x
                     : x <= 9.5 ? 0.42 + 0.8 * (x - 4.2) : 0.42 + 0.8 * 5.3 + 0.05 * (x - 9.5);
    iu[e] = -(x - 7.5) * (x - 7.5);
  }
  const double cell = gx[1] - gx[0];
  const explain::ThresholdFit fit = explain::DetectThresholds(gx, gz);
  const double e1 = std::abs(fit.first - 4.2);
  const double e2 = std::abs(fit.second - 9.5);
  const explain::ThresholdFit hump = explain::DetectThresholds(gx, iu);
  return {e1 <= cell && e2 <= cell && hump.slopes[2] < 0.0 && hump.declining_tail,
          "breaks " + Num(fit.first) + ", " + Num(fit.second) + " vs 4.2, 9.5 (cell " +
              Num(cell) + "); inverted U final slope " + Num(hump.slopes[2]) +
              (hump.declining_tail ? " flagged" : " NOT flagged")};
}

// ------------------------------------------------------------------ 9

std::map<std::string, std::string> DirContents(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    files[e.path().filename().string()] = ReadTextFile(e.path().string());
  }
  return files;
}

Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "gmvx_acceptance";
  fs::remove_all(root);
  std::ostringstream sink;
  auto cli = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "gmvx");
    return cli::RunCli(args, sink, sink);
  };
  const std::string data = (root / "data" / "data.csv").string();
  if (cli({"generate", "--rows", "300", "--seed", "5", "--out", (root / "data").string()}) != 0) {
    return {false, "generate failed"};
  }
  std::size_t files = 0;
  std::vector<std::string> differing;
  for (const std::string cmd : {"benchmark", "explain"}) {
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* tag : {"a", "b"}) {
      const std::string out = (root / (cmd + "_" + tag)).string();
      std::vector<std::string> args = {cmd, "--data", data, "--seed", "7", "--out", out};
      if (cmd == "benchmark") {
        args.insert(args.end(), {"--folds", "5"});
      } else {
        args.insert(args.end(), {"--permutations", "20", "--background", "50", "--ale",
                                 "Comments", "--shap3d", "Likes", "--group-split"});
      }
      if (cli(args) != 0) return {false, cmd + " failed: " + sink.str()};
      runs.push_back(DirContents(out));
    }
    files += runs[0].size();
    for (const auto& [name, text] : runs[0]) {
      const auto it = runs[1].find(name);
      if (it == runs[1].end() || it->second != text) differing.push_back(name);
    }
    if (runs[0].size() != runs[1].size()) differing.push_back(cmd + " file set");
  }
  fs::remove_all(root);
  std::string detail = std::to_string(files) + " files compared across two runs each";
  for (const auto& d : differing) detail += "; differs: " + d;
  return {differing.empty(), detail};
}

// ------------------------------------------------------------------ 10

Outcome Calibration() {
  const dataset::SyntheticSpec spec = dataset::SyntheticSpec::Default();
  const dataset::Dataset raw = dataset::Synthesize(spec, 5000, 77);
  const dataset::CalibrationReport rep = dataset::MeasureCalibration(spec, raw);
  double worst_mean = 0.0;
  std::string worst_mean_name;
  for (const auto& m : rep.moments) {
    const double rel = std::abs(m.achieved_mean - m.target_mean) / std::abs(m.target_mean);
    if (rel > worst_mean) {
      worst_mean = rel;
      worst_mean_name = m.name;
    }
  }
  double worst_corr = 0.0;
  std::string worst_corr_name;
  for (const auto& c : rep.correlations) {
    const double d = std::abs(c.achieved - c.target);
    if (d > worst_corr) {
      worst_corr = d;
      worst_corr_name = c.a + "/" + c.b;
    }
  }
  return {worst_mean <= kCalibrationMeanRelTol && worst_corr <= kCalibrationCorrTol,
          std::to_string(rep.moments.size()) + " means, worst relative gap " + Num(worst_mean) +
              " (" + worst_mean_name + "); " + std::to_string(rep.correlations.size()) +
              " correlations, worst gap " + Num(worst_corr) + " (" + worst_corr_name + ")"};
}

}  // namespace
}  // namespace gmvx

int main(int argc, char** argv) {
  using Check = std::function<gmvx::Outcome()>;
  const std::vector<std::pair<std::string, Check>> criteria = {
      {"benchmark ordering on planted data", gmvx::BenchmarkOrdering},
      {"Shapley axioms (exact)", gmvx::ShapleyAxioms},
      {"sampled vs exact SHAP", gmvx::SamplerVsExact},
      {"ALE slope recovery", gmvx::AleSlope},
      {"metric exactness", gmvx::MetricExactness},
      {"model equivalences", gmvx::ModelEquivalences},
      {"fold integrity", gmvx::FoldIntegrity},
      {"3D-SHAP threshold detector", gmvx::ThresholdDetector},
      {"determinism of benchmark and explain", gmvx::Determinism},
      {"synthetic calibration", gmvx::Calibration},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(static_cast<std::size_t>(std::stoul(argv[i])));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    gmvx::Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += r.pass ? 0 : 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << r.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
