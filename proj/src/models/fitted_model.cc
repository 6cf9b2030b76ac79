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

#include "gmvx/models/fitted_model.h"

#include <cmath>
#include <numeric>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::models {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "gmvx-model";

void CheckWidth(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    Fail(ErrorCode::kInvalidArgument,
         "model expects " + std::to_string(expected) + " features, got " +
             std::to_string(actual));
  }
}

RegressionTree FitTree(const Matrix& x, const Vector& y,
                       const Hyperparameters& params, std::uint64_t seed,
                       std::vector<std::string>* warnings) {
  TreeGrowthParams growth = TreeParamsFromSpec(params, MaxFeatures::kAll, warnings);
  const auto n = static_cast<std::size_t>(x.rows());
  if (static_cast<std::size_t>(growth.min_samples_leaf) > n) {
    warnings->push_back("min_samples_leaf=" +
                        std::to_string(growth.min_samples_leaf) +
                        " exceeds the " + std::to_string(n) +
                        " training rows; fitted a single leaf");
    growth.max_depth = 0;
  }
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng rng(seed);
  return GrowTree(x, y, rows, growth, rng);
}

}  // namespace

FittedModel::FittedModel(ModelSpec spec, std::size_t num_features,
                         ModelPayload payload, std::vector<std::string> warnings)
    : spec_(std::move(spec)),
      num_features_(num_features),
      payload_(std::move(payload)),
      warnings_(std::move(warnings)) {}

Vector FittedModel::Predict(const Matrix& x) const {
  CheckWidth(num_features_, static_cast<std::size_t>(x.cols()));
  return std::visit([&](const auto& m) -> Vector { return m.Predict(x); },
                    payload_);
}

double FittedModel::PredictRow(std::span<const double> x) const {
  CheckWidth(num_features_, x.size());
  return std::visit([&](const auto& m) { return m.Predict(x); }, payload_);
}

FittedModel Fit(const ModelSpec& spec, const Matrix& x, const Vector& y) {
  if (x.rows() < 1) Fail(ErrorCode::kInvalidArgument, "training set is empty");
  if (x.cols() < 1) Fail(ErrorCode::kInvalidArgument, "training set has no features");
  if (x.rows() != y.size()) {
    Fail(ErrorCode::kInvalidArgument, "X has " + std::to_string(x.rows()) +
                                          " rows but y has " +
                                          std::to_string(y.size()));
  }
  if (!x.allFinite() || !y.allFinite()) {
    Fail(ErrorCode::kInvalidArgument, "training data contains non-finite values");
  }
  ValidateSpec(spec);
  std::vector<std::string> warnings;
  const Hyperparameters& hp = spec.params;
  ModelPayload payload = [&]() -> ModelPayload {
    switch (spec.algorithm) {
      case Algorithm::kDT: return FitTree(x, y, hp, spec.seed, &warnings);
      case Algorithm::kRF:
        return FitForest(x, y, hp, spec.seed, SplitMode::kBest, &warnings);
      case Algorithm::kET:
        return FitForest(x, y, hp, spec.seed, SplitMode::kRandom, &warnings);
      case Algorithm::kSVR: return FitSvr(x, y, hp, &warnings);
      case Algorithm::kLR: return FitLinear(x, y, hp, &warnings);
      case Algorithm::kKNN: return FitKnn(x, y, hp);
      case Algorithm::kAdaBoost:
        return FitAdaBoost(x, y, hp, spec.seed, &warnings);
      case Algorithm::kGBRT: return FitGbrt(x, y, hp, spec.seed, &warnings);
    }
    Fail(ErrorCode::kInternal, "unhandled algorithm");
  }();
  return FittedModel(spec, static_cast<std::size_t>(x.cols()),
                     std::move(payload), std::move(warnings));
}

nlohmann::json ModelToJson(const FittedModel& model) {
  nlohmann::json payload = std::visit(
      [](const auto& m) -> nlohmann::json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RegressionTree>) return TreeToJson(m);
        else if constexpr (std::is_same_v<T, ForestModel>) return ForestToJson(m);
        else if constexpr (std::is_same_v<T, SvrModel>) return SvrToJson(m);
        else if constexpr (std::is_same_v<T, LinearModel>) return LinearToJson(m);
        else if constexpr (std::is_same_v<T, KnnModel>) return KnnToJson(m);
        else if constexpr (std::is_same_v<T, AdaBoostModel>) return AdaBoostToJson(m);
        else return GbrtToJson(m);
      },
      model.payload());
  return {{"format", kFormatName},
          {"version", kFormatVersion},
          {"spec", SpecToJson(model.spec())},
          {"num_features", model.num_features()},
          {"warnings", model.warnings()},
          {"payload", std::move(payload)}};
}

FittedModel ModelFromJson(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormatName) {
      Fail(ErrorCode::kParse, "not a gmvx model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kFormatVersion) {
      Fail(ErrorCode::kParse,
           "unsupported model format version " + std::to_string(version));
    }
    ModelSpec spec = SpecFromJson(doc.at("spec"));
    const auto p = doc.at("num_features").get<std::size_t>();
    auto warnings = doc.at("warnings").get<std::vector<std::string>>();
    const auto& body = doc.at("payload");
    ModelPayload payload = [&]() -> ModelPayload {
      switch (spec.algorithm) {
        case Algorithm::kDT: return TreeFromJson(body);
        case Algorithm::kRF:
        case Algorithm::kET: return ForestFromJson(body);
        case Algorithm::kSVR: return SvrFromJson(body);
        case Algorithm::kLR: return LinearFromJson(body);
        case Algorithm::kKNN: return KnnFromJson(body);
        case Algorithm::kAdaBoost: return AdaBoostFromJson(body);
        case Algorithm::kGBRT: return GbrtFromJson(body);
      }
      Fail(ErrorCode::kInternal, "unhandled algorithm");
    }();
    return FittedModel(std::move(spec), p, std::move(payload),
                       std::move(warnings));
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad model document: ") + ex.what());
  }
}

void SaveModel(const FittedModel& model, const std::string& path) {
  WriteTextFile(path, ModelToJson(model).dump(1) + "\n");
}

FittedModel LoadModel(const std::string& path) {
  const std::string text = ReadTextFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, path + ": " + ex.what());
  }
  return ModelFromJson(doc);
}

}  // namespace gmvx::models
