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

#include "gmvx/models/adaboost.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::models {

namespace {

constexpr double kMinAlpha = 1e-10;
constexpr double kMaxAlpha = 1.0 - 1e-10;

}  // namespace

BoostLoss ParseBoostLoss(const std::string& name) {
  if (name == "linear") return BoostLoss::kLinear;
  if (name == "square") return BoostLoss::kSquare;
  if (name == "exponential") return BoostLoss::kExponential;
  Fail(ErrorCode::kInvalidArgument, "unknown loss '" + name + "'");
}

std::string_view BoostLossName(BoostLoss loss) {
  switch (loss) {
    case BoostLoss::kSquare: return "square";
    case BoostLoss::kExponential: return "exponential";
    case BoostLoss::kLinear: break;
  }
  return "linear";
}

double AdaBoostModel::Predict(std::span<const double> x) const {
  const std::size_t k = stages.size();
  std::vector<std::pair<double, std::size_t>> outputs(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    outputs[i] = {stages[i].Predict(x), i};
    total += stage_weights[i];
  }
  std::sort(outputs.begin(), outputs.end());
  double cumulative = 0.0;
  for (const auto& [value, stage] : outputs) {
    cumulative += stage_weights[stage];
    if (cumulative >= 0.5 * total) return value;
  }
  return outputs.back().first;
}

Vector AdaBoostModel::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

AdaBoostModel FitAdaBoost(const Matrix& x, const Vector& y,
                          const Hyperparameters& params, std::uint64_t seed,
                          std::vector<std::string>* warnings,
                          AdaBoostTrace* trace) {
  const std::int64_t count = params.GetInt("n_estimators", 50);
  if (count < 1) Fail(ErrorCode::kInvalidArgument, "n_estimators must be >= 1");
  const double lr = params.GetDouble("learning_rate", 1.0);
  if (!(lr > 0.0)) Fail(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  const BoostLoss loss = ParseBoostLoss(params.GetString("loss", "linear"));
  TreeGrowthParams growth;
  growth.max_depth = static_cast<int>(params.GetInt("max_depth", 1));
  if (growth.max_depth < 1) {
    Fail(ErrorCode::kInvalidArgument, "max_depth must be >= 1");
  }

  const auto n = static_cast<std::size_t>(x.rows());
  Vector w = Vector::Constant(x.rows(), 1.0 / static_cast<double>(n));
  std::vector<double> cumulative(n);
  std::vector<std::size_t> sample(n);
  Vector err(x.rows());
  AdaBoostModel model;
  for (std::int64_t k = 0; k < count; ++k) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(k)));
    std::partial_sum(w.begin(), w.end(), cumulative.begin());
    const double total = cumulative.back();
    for (auto& s : sample) {
      const double u = rng.Uniform() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      s = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), n - 1);
    }
    RegressionTree tree = GrowTree(x, y, sample, growth, rng);

    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      err[r] = std::abs(tree.Predict(RowSpan(x, r)) - y[r]);
    }
    const double max_err = err.maxCoeff();
    if (max_err > 0.0) err /= max_err;
    switch (loss) {
      case BoostLoss::kSquare: err = err.array().square(); break;
      case BoostLoss::kExponential:
        err = 1.0 - (-err.array()).exp();
        break;
      case BoostLoss::kLinear: break;
    }
    const double mean_loss = w.dot(err);

    if (mean_loss >= 0.5) {
      if (k == 0) {
        if (warnings != nullptr) {
          warnings->push_back(
              "first boosting stage has weighted error >= 0.5; kept alone");
        }
        model.stages.push_back(std::move(tree));
        model.alphas.push_back(kMaxAlpha);
        model.stage_weights.push_back(lr * std::log(1.0 / kMaxAlpha));
        model.capped.push_back(true);
      }
      break;
    }
    double alpha = mean_loss / (1.0 - mean_loss);
    bool capped = false;
    if (alpha < kMinAlpha) {
      alpha = kMinAlpha;
      capped = true;
      if (warnings != nullptr) {
        warnings->push_back("stage " + std::to_string(k) +
                            " fit exactly; alpha capped at 1e-10");
      }
    }
    model.stages.push_back(std::move(tree));
    model.alphas.push_back(alpha);
    model.stage_weights.push_back(lr * std::log(1.0 / alpha));
    model.capped.push_back(capped);
    if (mean_loss <= 0.0) break;

    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      w[r] *= std::pow(alpha, lr * (1.0 - err[r]));
    }
    w /= w.sum();
    if (trace != nullptr) trace->weights.push_back(w);
  }
  return model;
}

nlohmann::json AdaBoostToJson(const AdaBoostModel& model) {
  nlohmann::json stages = nlohmann::json::array();
  for (const RegressionTree& t : model.stages) stages.push_back(TreeToJson(t));
  return {{"alphas", model.alphas},
          {"stage_weights", model.stage_weights},
          {"capped", model.capped},
          {"stages", std::move(stages)}};
}

AdaBoostModel AdaBoostFromJson(const nlohmann::json& doc) {
  AdaBoostModel model;
  try {
    model.alphas = doc.at("alphas").get<std::vector<double>>();
    model.stage_weights = doc.at("stage_weights").get<std::vector<double>>();
    model.capped = doc.at("capped").get<std::vector<bool>>();
    for (const auto& t : doc.at("stages")) {
      model.stages.push_back(TreeFromJson(t));
    }
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad adaboost model: ") + ex.what());
  }
  const std::size_t k = model.stages.size();
  if (k == 0 || model.alphas.size() != k || model.stage_weights.size() != k ||
      model.capped.size() != k) {
    Fail(ErrorCode::kParse, "adaboost stage arrays differ in length");
  }
  return model;
}

}  // namespace gmvx::models
