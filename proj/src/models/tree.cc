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

#include "gmvx/models/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "gmvx/common/error.h"

namespace gmvx::models {

RegressionTree::RegressionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) Fail(ErrorCode::kInvalidArgument, "tree has no nodes");
  const auto size = static_cast<std::int32_t>(nodes_.size());
  std::vector<int> parents(nodes_.size(), 0);
  for (std::int32_t i = 0; i < size; ++i) {
    const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
    if (n.is_leaf()) continue;
    if (n.left <= i || n.left >= size || n.right <= i || n.right >= size ||
        n.left == n.right) {
      Fail(ErrorCode::kInvalidArgument,
           "tree node " + std::to_string(i) + " has invalid children");
    }
    ++parents[static_cast<std::size_t>(n.left)];
    ++parents[static_cast<std::size_t>(n.right)];
  }
  for (std::size_t i = 1; i < parents.size(); ++i) {
    if (parents[i] != 1) {
      Fail(ErrorCode::kInvalidArgument,
           "tree node " + std::to_string(i) + " is not reachable exactly once");
    }
  }
}

Vector RegressionTree::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (nodes_[i].is_leaf()) continue;
    d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
    d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
  }
  return deepest;
}

std::size_t RegressionTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const TreeNode& n) { return n.is_leaf(); }));
}

MaxFeatures ParseMaxFeatures(const std::string& name) {
  if (name == "sqrt") return MaxFeatures::kSqrt;
  if (name == "log2") return MaxFeatures::kLog2;
  if (name == "all" || name == "auto" || name == "none") return MaxFeatures::kAll;
  Fail(ErrorCode::kInvalidArgument, "unknown max_features '" + name + "'");
}

std::string_view MaxFeaturesName(MaxFeatures mode) {
  switch (mode) {
    case MaxFeatures::kSqrt: return "sqrt";
    case MaxFeatures::kLog2: return "log2";
    case MaxFeatures::kAll: break;
  }
  return "all";
}

std::size_t ResolveMaxFeatures(MaxFeatures mode, std::size_t num_features) {
  const double p = static_cast<double>(num_features);
  std::size_t m = num_features;
  switch (mode) {
    case MaxFeatures::kSqrt: m = static_cast<std::size_t>(std::sqrt(p)); break;
    case MaxFeatures::kLog2:
      m = num_features > 0 ? static_cast<std::size_t>(std::log2(p)) : 0;
      break;
    case MaxFeatures::kAll: break;
  }
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(num_features, 1));
}

TreeGrowthParams TreeParamsFromSpec(const Hyperparameters& params,
                                    MaxFeatures default_max_features,
                                    std::vector<std::string>* warnings) {
  TreeGrowthParams out;
  if (params.Has("max_depth")) {
    const std::int64_t depth = params.GetInt("max_depth", 0);
    if (depth < 0) Fail(ErrorCode::kInvalidArgument, "max_depth must be >= 0");
    out.max_depth = static_cast<int>(
        std::min<std::int64_t>(depth, std::numeric_limits<int>::max()));
  }
  const std::int64_t split = params.GetInt("min_samples_split", 2);
  if (split < 1) {
    Fail(ErrorCode::kInvalidArgument, "min_samples_split must be >= 1");
  }
  if (split == 1) {
    if (warnings != nullptr) {
      warnings->push_back("min_samples_split=1 raised to 2");
    }
    out.min_samples_split = 2;
  } else {
    out.min_samples_split = static_cast<int>(
        std::min<std::int64_t>(split, std::numeric_limits<int>::max()));
  }
  const std::int64_t leaf = params.GetInt("min_samples_leaf", 1);
  if (leaf < 1) Fail(ErrorCode::kInvalidArgument, "min_samples_leaf must be >= 1");
  out.min_samples_leaf = static_cast<int>(
      std::min<std::int64_t>(leaf, std::numeric_limits<int>::max()));
  out.max_features =
      params.Has("max_features")
          ? ParseMaxFeatures(params.GetString("max_features", "all"))
          : default_max_features;
  return out;
}

namespace {

struct Split {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();
};

// Larger score wins; equal scores go to the lower feature, then the lower
// threshold.
void Offer(Split& best, std::int32_t feature, double threshold, double score) {
  if (!best.found || score > best.score ||
      (score == best.score &&
       (feature < best.feature ||
        (feature == best.feature && threshold < best.threshold)))) {
    best = {true, feature, threshold, score};
  }
}

class Grower {
 public:
  Grower(const Matrix& x, const Vector& y, const TreeGrowthParams& params,
         Rng& rng)
      : x_(x), y_(y), params_(params), rng_(rng),
        p_(static_cast<std::size_t>(x.cols())),
        mtry_(ResolveMaxFeatures(params.max_features, p_)),
        order_(p_) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  RegressionTree Grow(std::span<const std::size_t> rows) {
    idx_.assign(rows.begin(), rows.end());
    nodes_.clear();
    nodes_.emplace_back();
    struct Work {
      std::size_t begin, end;
      int depth;
      std::int32_t node;
    };
    std::vector<Work> stack{{0, idx_.size(), 0, 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      const std::size_t n = w.end - w.begin;
      double sum = 0.0;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t i = w.begin; i < w.end; ++i) {
        const double v = y_[static_cast<Eigen::Index>(idx_[i])];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      TreeNode& node = nodes_[static_cast<std::size_t>(w.node)];
      node.value = sum / static_cast<double>(n);
      node.count = static_cast<std::int32_t>(n);
      if (w.depth >= params_.max_depth ||
          n < static_cast<std::size_t>(params_.min_samples_split) ||
          n < 2 * static_cast<std::size_t>(params_.min_samples_leaf) ||
          lo == hi) {
        continue;
      }
      const Split split = FindSplit(w.begin, w.end, sum);
      if (!split.found) continue;

      const auto j = static_cast<Eigen::Index>(split.feature);
      const auto mid = std::stable_partition(
          idx_.begin() + static_cast<std::ptrdiff_t>(w.begin),
          idx_.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](std::size_t r) {
            return x_(static_cast<Eigen::Index>(r), j) <= split.threshold;
          });
      const auto cut = static_cast<std::size_t>(mid - idx_.begin());
      const auto left = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_.emplace_back();
      TreeNode& parent = nodes_[static_cast<std::size_t>(w.node)];
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.left = left;
      parent.right = left + 1;
      stack.push_back({cut, w.end, w.depth + 1, left + 1});
      stack.push_back({w.begin, cut, w.depth + 1, left});
    }
    return RegressionTree(std::move(nodes_));
  }

 private:
  Split FindSplit(std::size_t begin, std::size_t end, double total) {
    Split best;
    // Candidate features: all of them, or a fresh random subset per node.
    // Constant features do not count toward the subset size.
    std::size_t visited = 0;
    const bool subsample = mtry_ < p_;
    for (std::size_t k = 0; k < p_ && visited < mtry_; ++k) {
      if (subsample) std::swap(order_[k], order_[k + rng_.Below(p_ - k)]);
      const std::size_t j = subsample ? order_[k] : k;
      if (params_.split_mode == SplitMode::kBest) {
        if (ScanFeature(j, begin, end, total, best)) ++visited;
      } else {
        if (RandomFeature(j, begin, end, total, best)) ++visited;
      }
    }
    if (subsample) std::iota(order_.begin(), order_.end(), std::size_t{0});
    return best;
  }

  // Returns false for a feature that is constant within the node.
  bool ScanFeature(std::size_t j, std::size_t begin, std::size_t end,
                   double total, Split& best) {
    const auto col = static_cast<Eigen::Index>(j);
    pairs_.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = static_cast<Eigen::Index>(idx_[i]);
      pairs_.emplace_back(x_(r, col), y_[r]);
    }
    std::sort(pairs_.begin(), pairs_.end());
    if (pairs_.front().first == pairs_.back().first) return false;
    const std::size_t n = pairs_.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += pairs_[i].second;
      const double a = pairs_[i].first;
      const double b = pairs_[i + 1].first;
      if (a == b) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double right_sum = total - left_sum;
      const double score = left_sum * left_sum / static_cast<double>(nl) +
                           right_sum * right_sum / static_cast<double>(nr);
      double s = a + (b - a) / 2.0;
      if (s >= b) s = a;
      Offer(best, static_cast<std::int32_t>(j), s, score);
    }
    return true;
  }

  bool RandomFeature(std::size_t j, std::size_t begin, std::size_t end,
                     double total, Split& best) {
    const auto col = static_cast<Eigen::Index>(j);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = x_(static_cast<Eigen::Index>(idx_[i]), col);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) return false;
    double s = rng_.Uniform(lo, hi);
    if (s >= hi) s = lo;
    double left_sum = 0.0;
    std::size_t nl = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = static_cast<Eigen::Index>(idx_[i]);
      if (x_(r, col) <= s) {
        left_sum += y_[r];
        ++nl;
      }
    }
    const std::size_t nr = (end - begin) - nl;
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (nl < min_leaf || nr < min_leaf) return true;
    const double right_sum = total - left_sum;
    Offer(best, static_cast<std::int32_t>(j), s,
          left_sum * left_sum / static_cast<double>(nl) +
              right_sum * right_sum / static_cast<double>(nr));
    return true;
  }

  const Matrix& x_;
  const Vector& y_;
  const TreeGrowthParams& params_;
  Rng& rng_;
  std::size_t p_;
  std::size_t mtry_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> idx_;
  std::vector<std::pair<double, double>> pairs_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree GrowTree(const Matrix& x, const Vector& y,
                        std::span<const std::size_t> rows,
                        const TreeGrowthParams& params, Rng& rng) {
  if (rows.empty()) Fail(ErrorCode::kInvalidArgument, "no training rows");
  if (x.rows() != y.size()) {
    Fail(ErrorCode::kInvalidArgument, "X and y row counts differ");
  }
  if (x.cols() < 1) Fail(ErrorCode::kInvalidArgument, "X has no columns");
  Grower grower(x, y, params, rng);
  return grower.Grow(rows);
}

nlohmann::json TreeToJson(const RegressionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : tree.nodes()) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.count});
  }
  return nodes;
}

RegressionTree TreeFromJson(const nlohmann::json& doc) {
  if (!doc.is_array()) Fail(ErrorCode::kParse, "tree must be a node array");
  std::vector<TreeNode> nodes;
  nodes.reserve(doc.size());
  try {
    for (const auto& e : doc) {
      if (!e.is_array() || e.size() != 6) {
        Fail(ErrorCode::kParse, "tree node must have 6 fields");
      }
      nodes.push_back({e[0].get<std::int32_t>(), e[1].get<double>(),
                       e[2].get<std::int32_t>(), e[3].get<std::int32_t>(),
                       e[4].get<double>(), e[5].get<std::int32_t>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad tree node: ") + ex.what());
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace gmvx::models
