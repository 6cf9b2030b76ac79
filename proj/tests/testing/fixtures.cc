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

#include "testing/fixtures.h"

#include <cmath>
#include <unistd.h>

#include <filesystem>

#include "gmvx/common/csv.h"
#include "gmvx/common/random.h"
#include "gmvx/dataset/schema.h"

namespace gmvx::testing {

XY NoisySine(std::size_t n, std::size_t p, double noise, std::uint64_t seed) {
  Rng rng(seed);
  XY out{Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p)),
         Vector(static_cast<Eigen::Index>(n))};
  for (Eigen::Index r = 0; r < out.x.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.x.cols(); ++c) {
      out.x(r, c) = rng.Uniform(-2.0, 2.0);
    }
    double f = std::sin(out.x(r, 0));
    if (p > 1) f += 0.5 * out.x(r, 1) * out.x(r, 1);
    if (p > 2) f -= 0.3 * out.x(r, 2);
    out.y[r] = f + noise * rng.Normal();
  }
  return out;
}

Matrix UniformMatrix(std::size_t n, std::size_t p, double lo, double hi,
                     std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.Uniform(lo, hi);
  }
  return m;
}

std::string DefaultSchemaCsv(const std::vector<double>& gmv) {
  const auto& schema = dataset::FeatureSchema::Default();
  std::string text;
  for (std::size_t i = 0; i < schema.variables().size(); ++i) {
    if (i > 0) text += ",";
    text += schema.variables()[i].name;
  }
  text += "\n";
  for (double g : gmv) {
    for (std::size_t i = 0; i < schema.variables().size(); ++i) {
      const auto& v = schema.variables()[i];
      if (i > 0) text += ",";
      text += FormatDouble(v.role == dataset::Role::kTarget
                               ? g
                               : (v.lower_bound + v.upper_bound) / 2.0);
    }
    text += "\n";
  }
  return text;
}

std::string TempDir(const std::string& tag) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("gmvx_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace gmvx::testing
