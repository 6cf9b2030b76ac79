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

#include "gmvx/models/knn.h"

#include <cmath>

#include "gmvx/common/error.h"

namespace gmvx::models {

double KnnModel::Predict(std::span<const double> x) const {
  const std::vector<Neighbor> found = index->Query(x, k);
  if (weights == KnnWeights::kDistance) {
    if (found.front().dist2 == 0.0) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const Neighbor& nb : found) {
        if (nb.dist2 != 0.0) break;
        sum += targets[static_cast<Eigen::Index>(nb.index)];
        ++count;
      }
      return sum / static_cast<double>(count);
    }
    double num = 0.0;
    double den = 0.0;
    for (const Neighbor& nb : found) {
      const double w = 1.0 / std::sqrt(nb.dist2);
      num += w * targets[static_cast<Eigen::Index>(nb.index)];
      den += w;
    }
    return num / den;
  }
  double sum = 0.0;
  for (const Neighbor& nb : found) {
    sum += targets[static_cast<Eigen::Index>(nb.index)];
  }
  return sum / static_cast<double>(found.size());
}

Vector KnnModel::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

bool KnnModel::operator==(const KnnModel& other) const {
  return k == other.k && weights == other.weights &&
         targets == other.targets &&
         index->backend() == other.index->backend() &&
         index->leaf_size() == other.index->leaf_size() &&
         index->points() == other.index->points();
}

namespace {

KnnWeights ParseWeights(const std::string& name) {
  if (name == "uniform") return KnnWeights::kUniform;
  if (name == "distance") return KnnWeights::kDistance;
  Fail(ErrorCode::kInvalidArgument, "unknown weights '" + name + "'");
}

}  // namespace

KnnModel FitKnn(const Matrix& x, const Vector& y, const Hyperparameters& params) {
  KnnModel model;
  const std::int64_t k = params.GetInt("n_neighbors", 5);
  if (k < 1 || k > x.rows()) {
    Fail(ErrorCode::kInvalidArgument,
         "n_neighbors=" + std::to_string(k) + " must be in [1, " +
             std::to_string(x.rows()) + "]");
  }
  model.k = static_cast<std::size_t>(k);
  model.weights = ParseWeights(params.GetString("weights", "uniform"));
  model.targets = y;
  model.index = std::make_shared<const NeighborIndex>(
      x, ParseNeighborBackend(params.GetString("algorithm", "kd_tree")),
      static_cast<int>(params.GetInt("leaf_size", 30)));
  return model;
}

nlohmann::json KnnToJson(const KnnModel& model) {
  const Matrix& pts = model.index->points();
  std::vector<std::vector<double>> rows;
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    const auto row = RowSpan(pts, r);
    rows.emplace_back(row.begin(), row.end());
  }
  return {{"k", model.k},
          {"weights",
           model.weights == KnnWeights::kDistance ? "distance" : "uniform"},
          {"algorithm", NeighborBackendName(model.index->backend())},
          {"leaf_size", model.index->leaf_size()},
          {"num_features", pts.cols()},
          {"points", rows},
          {"targets", std::vector<double>(model.targets.begin(),
                                          model.targets.end())}};
}

KnnModel KnnFromJson(const nlohmann::json& doc) {
  KnnModel model;
  try {
    model.k = doc.at("k").get<std::size_t>();
    model.weights = ParseWeights(doc.at("weights").get<std::string>());
    const auto p = doc.at("num_features").get<Eigen::Index>();
    const auto rows = doc.at("points").get<std::vector<std::vector<double>>>();
    const auto targets = doc.at("targets").get<std::vector<double>>();
    if (rows.size() != targets.size() || rows.empty()) {
      Fail(ErrorCode::kParse, "knn points and targets differ in length");
    }
    Matrix pts(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<Eigen::Index>(rows[r].size()) != p) {
        Fail(ErrorCode::kParse, "knn point has the wrong width");
      }
      for (Eigen::Index c = 0; c < p; ++c) {
        pts(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
      }
    }
    model.targets = Eigen::Map<const Vector>(
        targets.data(), static_cast<Eigen::Index>(targets.size()));
    model.index = std::make_shared<const NeighborIndex>(
        std::move(pts),
        ParseNeighborBackend(doc.at("algorithm").get<std::string>()),
        doc.at("leaf_size").get<int>());
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad knn model: ") + ex.what());
  }
  if (model.k < 1 || model.k > static_cast<std::size_t>(model.targets.size())) {
    Fail(ErrorCode::kParse, "knn k out of range");
  }
  return model;
}

}  // namespace gmvx::models
