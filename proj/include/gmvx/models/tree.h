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

#ifndef GMVX_MODELS_TREE_H_
#define GMVX_MODELS_TREE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/common/random.h"
#include "gmvx/models/model_spec.h"

namespace gmvx::models {

// Flat node storage. Internal nodes send x[feature] <= threshold to `left`.
// Every node keeps the mean target and row count of the training rows that
// reached it; for leaves that mean is the prediction.
struct TreeNode {
  std::int32_t feature = -1;  // -1 for leaves
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
  std::int32_t count = 0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  // Checks that child links form a tree rooted at node 0.
  explicit RegressionTree(std::vector<TreeNode> nodes);

  double Predict(std::span<const double> x) const {
    std::int32_t i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }
  Vector Predict(const Matrix& x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;
  std::size_t num_leaves() const;

  bool operator==(const RegressionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

enum class MaxFeatures { kAll, kSqrt, kLog2 };
MaxFeatures ParseMaxFeatures(const std::string& name);
std::string_view MaxFeaturesName(MaxFeatures mode);
// Number of candidate features per node: sqrt -> floor(sqrt(p)), log2 ->
// floor(log2(p)), both at least 1.
std::size_t ResolveMaxFeatures(MaxFeatures mode, std::size_t num_features);

enum class SplitMode {
  kBest,    // scan every midpoint between consecutive distinct values
  kRandom,  // one uniform threshold in the node's range per candidate feature
};

struct TreeGrowthParams {
  int max_depth = std::numeric_limits<int>::max();
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::kAll;
  SplitMode split_mode = SplitMode::kBest;
};

// Reads max_depth/min_samples_split/min_samples_leaf/max_features. A
// min_samples_split of 1 cannot split anything differently from 2 and is
// raised to 2 with a warning.
TreeGrowthParams TreeParamsFromSpec(const Hyperparameters& params,
                                    MaxFeatures default_max_features,
                                    std::vector<std::string>* warnings);

// Greedy CART on the given rows of (x, y); rows may repeat (bootstrap). The
// split minimizes the summed squared error of the two children; ties go to
// the lowest feature index, then the smallest threshold. The rng is consumed
// only for feature subsampling and random thresholds.
RegressionTree GrowTree(const Matrix& x, const Vector& y,
                        std::span<const std::size_t> rows,
                        const TreeGrowthParams& params, Rng& rng);

nlohmann::json TreeToJson(const RegressionTree& tree);
RegressionTree TreeFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_TREE_H_
