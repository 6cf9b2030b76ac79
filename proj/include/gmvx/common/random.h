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

#ifndef GMVX_COMMON_RANDOM_H_
#define GMVX_COMMON_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace gmvx {

// Mixes a base seed with a stream index. Used to give every tree, row, fold
// or permutation its own reproducible stream independent of scheduling.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream_a,
                         std::uint64_t stream_b);

// Seeded generator whose output sequence is identical on every platform.
// The std:: distributions are implementation-defined, so the conversions to
// doubles, bounded integers and normals are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t Below(std::size_t n);

  // Standard normal draw (Marsaglia polar method).
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = Below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gmvx

#endif  // GMVX_COMMON_RANDOM_H_
