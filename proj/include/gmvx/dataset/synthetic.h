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

#ifndef GMVX_DATASET_SYNTHETIC_H_
#define GMVX_DATASET_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmvx/dataset/dataset.h"
#include "gmvx/dataset/schema.h"

namespace gmvx::dataset {

// Synthetic broadcast data calibrated to published summary moments.
//
// Each predictor gets a marginal family:
//   normal      truncated normal on [min, max]
//   lognormal   truncated log-normal on [min, max] (heavy-tailed counts)
//   proportion  share of female hosts: Binomial(S, mean) / S where S is the
//               value of `denominator` in the same row (integer host count)
// Normal and log-normal marginals are calibrated so that the truncated
// distribution hits the target mean and std, then coupled through a Gaussian
// copula. Requested correlations are latent correlations; they are recovered
// on the transformed (model-input) scale, where log-normal columns become
// truncated normals.
enum class Marginal { kNormal, kLogNormal, kProportion };

struct MarginalTarget {
  std::string name;
  Marginal family = Marginal::kNormal;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool integer = false;         // round draws to whole numbers
  std::string denominator;      // kProportion only
};

struct CorrelationTarget {
  std::string a;
  std::string b;
  double rho = 0.0;
};

// One additive term of the planted log-GMV response. Inputs are predictor
// values on the transformed scale, standardized as u = (t - center) / scale.
struct ResponseTerm {
  enum class Kind {
    kLinear,       // coef * u
    kQuadratic,    // coef * u^2
    kSigmoid,      // coef / (1 + exp(-u))
    kBump,         // coef * exp(-u^2 / 2): rises then falls
    kStep,         // coef * [u > 0]
    kInteraction,  // coef * u_a * u_b (two variables; shared center/scale
                   // unless centers/scales lists are given)
  };
  enum class Gate { kNone, kFemale, kMale };

  Kind kind = Kind::kLinear;
  std::vector<std::string> variables;
  double coef = 1.0;
  std::vector<double> centers;  // one per variable; empty means 0
  std::vector<double> scales;   // one per variable; empty means 1
  Gate gate = Gate::kNone;      // multiply by [Female > 0.5] / [Female < 0.5]
};

// ln(GMV) = intercept + sum(terms) + N(0, noise_std^2); GMV = exp(.) clamped
// to the schema bounds.
struct ResponseSpec {
  double intercept = 0.0;
  std::vector<ResponseTerm> terms;
};

struct SyntheticSpec {
  std::vector<MarginalTarget> marginals;
  std::vector<CorrelationTarget> correlations;
  ResponseSpec response;
  double noise_std = 0.0;

  // Throws kCalibration for non-finite targets, min > mean > max, negative
  // std, |rho| > 1, or references to unknown variables.
  void Validate(const FeatureSchema& schema) const;

  // Table-3 calibrated marginals, the popularity correlations, and a
  // nonlinear popularity response (sigmoid Comments and Page_Views, an
  // inverted-U in Likes, a Comments x Page_Views interaction).
  static SyntheticSpec Default();
};

nlohmann::json SyntheticSpecToJson(const SyntheticSpec& spec);
SyntheticSpec SyntheticSpecFromJson(const nlohmann::json& doc);
SyntheticSpec LoadSyntheticSpec(const std::string& path);

// Evaluates the planted response (without noise) for one transformed
// feature row.
double EvaluateResponse(const ResponseSpec& response,
                        const FeatureSchema& schema,
                        std::span<const double> transformed_row);

// Deterministic per (spec, n, seed). Non-PSD correlation targets are a
// kCalibration error.
Dataset Synthesize(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed,
                   const FeatureSchema& schema = FeatureSchema::Default());

struct MomentRow {
  std::string name;
  double target_mean = 0.0;
  double achieved_mean = 0.0;
  double target_std = 0.0;
  double achieved_std = 0.0;
};

struct CorrelationRow {
  std::string a;
  std::string b;
  double target = 0.0;
  double achieved = 0.0;  // measured on the transformed scale
};

struct CalibrationReport {
  std::vector<MomentRow> moments;
  std::vector<CorrelationRow> correlations;
  std::string Format() const;
};

CalibrationReport MeasureCalibration(const SyntheticSpec& spec,
                                     const Dataset& raw);

}  // namespace gmvx::dataset

#endif  // GMVX_DATASET_SYNTHETIC_H_
