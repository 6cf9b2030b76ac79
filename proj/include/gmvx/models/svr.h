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

#ifndef GMVX_MODELS_SVR_H_
#define GMVX_MODELS_SVR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/common/matrix.h"
#include "gmvx/models/model_spec.h"

namespace gmvx::models {

struct Kernel {
  enum class Kind { kLinear, kPolynomial, kRbf, kSigmoid };
  Kind kind = Kind::kRbf;
  double gamma = 1.0;  // RBF: exp(-gamma * |x - x'|^2)
  int degree = 3;      // polynomial: (gamma * <x, x'> + coef0)^degree
  double coef0 = 0.0;  // sigmoid: tanh(gamma * <x, x'> + coef0)

  // Throws kInvalidArgument for gamma <= 0 or degree < 1.
  void Validate() const;
  double operator()(std::span<const double> a, std::span<const double> b) const;
  bool operator==(const Kernel&) const = default;
};

Kernel::Kind ParseKernelKind(const std::string& name);
std::string_view KernelKindName(Kernel::Kind kind);

// Builds the kernel from kernel/gamma/degree/coef0. gamma may be a number or
// "scale" (1 / (p * Var(X)) over all entries) or "auto" (1 / p).
Kernel KernelFromParams(const Hyperparameters& params, const Matrix& x);

struct SvrModel {
  Kernel kernel;
  Matrix support;             // rows of X with a non-zero coefficient
  std::vector<double> coef;   // alpha_i - alpha_i^*, each within [-C, C]
  double bias = 0.0;
  double epsilon = 0.1;
  double c = 1.0;
  double kkt_gap = 0.0;       // maximal KKT violation at termination
  std::int64_t iterations = 0;

  double Predict(std::span<const double> x) const;
  Vector Predict(const Matrix& x) const;
  bool operator==(const SvrModel&) const = default;
};

// Epsilon-insensitive support vector regression solved in the dual by SMO
// with second-order working-set selection. Stops when the maximal KKT
// violation drops below tol (default 1e-3); reaching max_iter (default 1e5)
// first is a kConvergence error.
SvrModel FitSvr(const Matrix& x, const Vector& y, const Hyperparameters& params,
                std::vector<std::string>* warnings);

nlohmann::json SvrToJson(const SvrModel& model);
SvrModel SvrFromJson(const nlohmann::json& doc);

}  // namespace gmvx::models

#endif  // GMVX_MODELS_SVR_H_
