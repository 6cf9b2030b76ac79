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

#ifndef GMVX_TESTS_TESTING_FIXTURES_H_
#define GMVX_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gmvx/common/matrix.h"
#include "gmvx/dataset/dataset.h"

namespace gmvx::testing {

struct XY {
  Matrix x;
  Vector y;
};

// y = sin(x0) + 0.5 * x1^2 - 0.3 * x2 + noise on uniform [-2, 2] inputs.
XY NoisySine(std::size_t n, std::size_t p, double noise, std::uint64_t seed);

// Uniform [lo, hi) matrix.
Matrix UniformMatrix(std::size_t n, std::size_t p, double lo, double hi,
                     std::uint64_t seed);

// One CSV row per GMV value, other columns at the midpoint of their
// schema bounds. Columns in schema order.
std::string DefaultSchemaCsv(const std::vector<double>& gmv);

// A fresh directory under the system temp dir.
std::string TempDir(const std::string& tag);

}  // namespace gmvx::testing

#endif  // GMVX_TESTS_TESTING_FIXTURES_H_
