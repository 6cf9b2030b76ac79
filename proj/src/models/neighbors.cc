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

#include "gmvx/models/neighbors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "gmvx/common/error.h"

namespace gmvx::models {

NeighborBackend ParseNeighborBackend(const std::string& name) {
  if (name == "brute" || name == "linear_scan") return NeighborBackend::kBrute;
  if (name == "kd_tree") return NeighborBackend::kKdTree;
  if (name == "ball_tree") return NeighborBackend::kBallTree;
  Fail(ErrorCode::kInvalidArgument, "unknown neighbor algorithm '" + name + "'");
}

std::string_view NeighborBackendName(NeighborBackend backend) {
  switch (backend) {
    case NeighborBackend::kKdTree: return "kd_tree";
    case NeighborBackend::kBallTree: return "ball_tree";
    case NeighborBackend::kBrute: break;
  }
  return "brute";
}

namespace {

bool Closer(const Neighbor& a, const Neighbor& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

// Max-heap of the best k candidates seen so far.
class Candidates {
 public:
  explicit Candidates(std::size_t k) : k_(k) {}

  void Offer(const Neighbor& c) {
    if (heap_.size() < k_) {
      heap_.push(c);
    } else if (Closer(c, heap_.top())) {
      heap_.pop();
      heap_.push(c);
    }
  }
  bool full() const { return heap_.size() >= k_; }
  double worst() const { return heap_.top().dist2; }

  std::vector<Neighbor> Sorted() {
    std::vector<Neighbor> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
      out.push_back(heap_.top());
      heap_.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  struct Order {
    bool operator()(const Neighbor& a, const Neighbor& b) const {
      return Closer(a, b);
    }
  };
  std::size_t k_;
  std::priority_queue<Neighbor, std::vector<Neighbor>, Order> heap_;
};

}  // namespace

NeighborIndex::NeighborIndex(Matrix points, NeighborBackend backend,
                             int leaf_size)
    : points_(std::move(points)), backend_(backend), leaf_size_(leaf_size) {
  if (points_.rows() < 1) Fail(ErrorCode::kInvalidArgument, "no points");
  if (leaf_size_ < 1) Fail(ErrorCode::kInvalidArgument, "leaf_size must be >= 1");
  order_.resize(static_cast<std::size_t>(points_.rows()));
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (backend_ != NeighborBackend::kBrute) Build(0, order_.size());
}

double NeighborIndex::Dist2(std::span<const double> query,
                            std::size_t row) const {
  const double* x = points_.data() + static_cast<Eigen::Index>(row) * points_.cols();
  double acc = 0.0;
  for (std::size_t j = 0; j < query.size(); ++j) {
    const double d = query[j] - x[j];
    acc += d * d;
  }
  return acc;
}

int NeighborIndex::Build(std::size_t begin, std::size_t end) {
  const auto id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  const auto p = static_cast<std::size_t>(points_.cols());
  Node node;
  node.begin = begin;
  node.end = end;
  auto at = [&](std::size_t i, std::size_t j) {
    return points_(static_cast<Eigen::Index>(order_[i]),
                   static_cast<Eigen::Index>(j));
  };
  node.lo.assign(p, std::numeric_limits<double>::infinity());
  node.hi.assign(p, -std::numeric_limits<double>::infinity());
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      node.lo[j] = std::min(node.lo[j], at(i, j));
      node.hi[j] = std::max(node.hi[j], at(i, j));
    }
  }
  if (backend_ == NeighborBackend::kBallTree) {
    node.center.assign(p, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < p; ++j) node.center[j] += at(i, j);
    }
    for (double& c : node.center) c /= static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      node.radius = std::max(node.radius, Dist2(node.center, order_[i]));
    }
    node.radius = std::sqrt(node.radius);
    node.lo.clear();
    node.hi.clear();
  }

  if (end - begin > static_cast<std::size_t>(leaf_size_)) {
    // Split at the median of the widest dimension.
    std::size_t dim = 0;
    double spread = -1.0;
    for (std::size_t j = 0; j < p; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t i = begin; i < end; ++i) {
        lo = std::min(lo, at(i, j));
        hi = std::max(hi, at(i, j));
      }
      if (hi - lo > spread) {
        spread = hi - lo;
        dim = j;
      }
    }
    if (spread > 0.0) {
      const std::size_t mid = begin + (end - begin) / 2;
      const auto d = static_cast<Eigen::Index>(dim);
      std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                       order_.begin() + static_cast<std::ptrdiff_t>(mid),
                       order_.begin() + static_cast<std::ptrdiff_t>(end),
                       [&](std::size_t a, std::size_t b) {
                         const double va = points_(static_cast<Eigen::Index>(a), d);
                         const double vb = points_(static_cast<Eigen::Index>(b), d);
                         return va < vb || (va == vb && a < b);
                       });
      node.left = Build(begin, mid);
      node.right = Build(mid, end);
    }
  }
  nodes_[static_cast<std::size_t>(id)] = std::move(node);
  return id;
}

double NeighborIndex::LowerBound(const Node& node,
                                 std::span<const double> query) const {
  if (backend_ == NeighborBackend::kKdTree) {
    // Same summation order as Dist2, so the bound never exceeds the rounded
    // distance of any point inside the box.
    double acc = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      double d = 0.0;
      if (query[j] < node.lo[j]) d = query[j] - node.lo[j];
      else if (query[j] > node.hi[j]) d = query[j] - node.hi[j];
      acc += d * d;
    }
    return acc;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < query.size(); ++j) {
    const double d = query[j] - node.center[j];
    acc += d * d;
  }
  // Shrink slightly to absorb rounding in the triangle inequality.
  const double gap = std::sqrt(acc) - node.radius;
  if (gap <= 0.0) return 0.0;
  const double shrunk = gap * (1.0 - 1e-9);
  return shrunk * shrunk;
}

std::vector<Neighbor> NeighborIndex::Query(std::span<const double> query,
                                           std::size_t k) const {
  const auto n = static_cast<std::size_t>(points_.rows());
  if (query.size() != static_cast<std::size_t>(points_.cols())) {
    Fail(ErrorCode::kInvalidArgument, "query has the wrong dimension");
  }
  if (k < 1 || k > n) {
    Fail(ErrorCode::kInvalidArgument,
         "k=" + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
  }
  Candidates best(k);
  if (backend_ == NeighborBackend::kBrute) {
    for (std::size_t i = 0; i < n; ++i) best.Offer({i, Dist2(query, i)});
    return best.Sorted();
  }
  std::vector<std::pair<int, double>> stack{{0, LowerBound(nodes_[0], query)}};
  while (!stack.empty()) {
    const auto [id, bound] = stack.back();
    stack.pop_back();
    // Strict comparison: a node at exactly the current worst distance may
    // still hold a tie with a lower index.
    if (best.full() && bound > best.worst()) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        best.Offer({order_[i], Dist2(query, order_[i])});
      }
      continue;
    }
    const double bl = LowerBound(nodes_[static_cast<std::size_t>(node.left)], query);
    const double br = LowerBound(nodes_[static_cast<std::size_t>(node.right)], query);
    // Push the farther child first so the nearer one is explored first.
    if (bl <= br) {
      stack.push_back({node.right, br});
      stack.push_back({node.left, bl});
    } else {
      stack.push_back({node.left, bl});
      stack.push_back({node.right, br});
    }
  }
  return best.Sorted();
}

}  // namespace gmvx::models
