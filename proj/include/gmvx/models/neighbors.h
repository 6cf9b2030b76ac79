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

#ifndef GMVX_MODELS_NEIGHBORS_H_
#define GMVX_MODELS_NEIGHBORS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gmvx/common/matrix.h"

namespace gmvx::models {

enum class NeighborBackend { kBrute, kKdTree, kBallTree };
NeighborBackend ParseNeighborBackend(const std::string& name);
std::string_view NeighborBackendName(NeighborBackend backend);

struct Neighbor {
  std::size_t index = 0;
  double dist2 = 0.0;  // squared Euclidean distance
};

// Exact k-nearest-neighbor search. Results are the first k points under the
// order (squared distance, index), so every backend returns the same set in
// the same order, ties included.
class NeighborIndex {
 public:
  NeighborIndex(Matrix points, NeighborBackend backend, int leaf_size = 30);

  std::vector<Neighbor> Query(std::span<const double> query,
                              std::size_t k) const;

  const Matrix& points() const { return points_; }
  NeighborBackend backend() const { return backend_; }
  int leaf_size() const { return leaf_size_; }

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int left = -1;
    int right = -1;
    std::vector<double> lo;      // kd-tree bounding box
    std::vector<double> hi;
    std::vector<double> center;  // ball tree
    double radius = 0.0;
  };

  int Build(std::size_t begin, std::size_t end);
  double LowerBound(const Node& node, std::span<const double> query) const;
  double Dist2(std::span<const double> query, std::size_t row) const;

  Matrix points_;
  NeighborBackend backend_;
  int leaf_size_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace gmvx::models

#endif  // GMVX_MODELS_NEIGHBORS_H_
