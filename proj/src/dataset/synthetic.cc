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

#include "gmvx/dataset/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/normal.hpp>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::dataset {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const boost::math::normal& StdNormal() {
  static const boost::math::normal dist(0.0, 1.0);
  return dist;
}

double Phi(double z) {
  if (z == kInf) return 1.0;
  if (z == -kInf) return 0.0;
  return boost::math::cdf(StdNormal(), z);
}

double PhiComplement(double z) {
  if (z == kInf) return 0.0;
  if (z == -kInf) return 1.0;
  return boost::math::cdf(boost::math::complement(StdNormal(), z));
}

double PhiInverse(double p) {
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  return boost::math::quantile(StdNormal(), p);
}

double Density(double z) {
  if (!std::isfinite(z)) return 0.0;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

// Probability mass of the standard normal on [lo, hi], computed on the side
// that keeps precision in the tails.
double Mass(double lo, double hi) {
  if (lo > 0.0) return PhiComplement(lo) - PhiComplement(hi);
  return Phi(hi) - Phi(lo);
}

// Latent-space truncation interval and continuous-support adjustments.
struct Support {
  double lo;  // latent lower bound (log scale for log-normal)
  double hi;
};

Support LatentSupport(const MarginalTarget& m) {
  double lo = m.min;
  double hi = m.max;
  if (m.integer) {
    // Rounding a draw from [min - 0.5, max + 0.5) lands on every integer in
    // [min, max] with its own unit-width cell.
    lo -= 0.5;
    hi += 0.5;
  }
  if (m.family == Marginal::kLogNormal) {
    return {lo > 0.0 ? std::log(lo) : -kInf, std::log(hi)};
  }
  return {lo, hi};
}

struct Moments {
  double mean;
  double std;
};

// Mean and std of the truncated marginal in raw units.
Moments TruncatedMoments(Marginal family, double mu, double sigma,
                         Support support) {
  const double a = (support.lo - mu) / sigma;
  const double b = (support.hi - mu) / sigma;
  const double z = Mass(a, b);
  if (!(z > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
  if (family == Marginal::kNormal) {
    const double da = Density(a);
    const double db = Density(b);
    const double ta = std::isfinite(a) ? a * da : 0.0;
    const double tb = std::isfinite(b) ? b * db : 0.0;
    const double shift = (da - db) / z;
    const double var = sigma * sigma * (1.0 + (ta - tb) / z - shift * shift);
    return {mu + sigma * shift, std::sqrt(std::max(var, 0.0))};
  }
  // E[X^k] = exp(k mu + k^2 sigma^2 / 2) * P(a - k sigma, b - k sigma) / P(a, b)
  auto raw_moment = [&](double k) {
    return std::exp(k * mu + 0.5 * k * k * sigma * sigma) *
           Mass(a - k * sigma, b - k * sigma) / z;
  };
  const double m1 = raw_moment(1.0);
  const double m2 = raw_moment(2.0);
  return {m1, std::sqrt(std::max(m2 - m1 * m1, 0.0))};
}

struct Calibrated {
  double mu;
  double sigma;
  Support support;
};

// Finds latent (mu, sigma) whose truncation matches the target mean and std.
// Infeasible targets end at the best iterate; MeasureCalibration reports the
// achieved moments.
Calibrated CalibrateMarginal(const MarginalTarget& m) {
  const Support support = LatentSupport(m);
  double mu;
  double sigma;
  if (m.family == Marginal::kLogNormal) {
    const double ratio = m.std / m.mean;
    const double s2 = std::log1p(ratio * ratio);
    sigma = std::sqrt(std::max(s2, 1e-12));
    mu = std::log(m.mean) - 0.5 * s2;
  } else {
    mu = m.mean;
    sigma = std::max(m.std, 1e-12 * std::max(1.0, std::abs(m.mean)));
  }
  if (m.std == 0.0) return {mu, sigma, support};

  Calibrated best{mu, sigma, support};
  double best_err = kInf;
  for (int iter = 0; iter < 400; ++iter) {
    const Moments got = TruncatedMoments(m.family, mu, sigma, support);
    if (!std::isfinite(got.mean) || !(got.std > 0.0)) break;
    const double err = std::abs(got.mean - m.mean) / std::abs(m.mean + 1e-300) +
                       std::abs(got.std - m.std) / m.std;
    if (err < best_err) {
      best_err = err;
      best = {mu, sigma, support};
    }
    if (err < 1e-10) break;
    if (m.family == Marginal::kLogNormal) {
      mu += std::log(m.mean / got.mean);
    } else {
      mu += m.mean - got.mean;
    }
    sigma *= std::clamp(m.std / got.std, 0.5, 2.0);
  }
  if (best_err < 1e-8) return best;

  // Tight bounds close to the mean can push the latent mean far outside the
  // support, where the fixed-point step stalls. Nested bisection: for each
  // sigma the truncated mean is increasing in mu; the truncated std at that
  // matched mean is then increasing in sigma.
  const double scale = m.family == Marginal::kLogNormal ? best.sigma : m.std;
  const double anchor = m.family == Marginal::kLogNormal ? std::log(m.mean) : m.mean;
  auto match_mean = [&](double s) {
    double lo = anchor - 60.0 * std::max(s, scale);
    double hi = anchor + 60.0 * std::max(s, scale);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const Moments got = TruncatedMoments(m.family, mid, s, support);
      if (!std::isfinite(got.mean)) {
        // All mass vanished; step toward the support.
        if (mid < anchor) lo = mid; else hi = mid;
        continue;
      }
      if (got.mean < m.mean) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  double log_lo = std::log(scale) - 8.0;
  double log_hi = std::log(scale) + 8.0;
  for (int i = 0; i < 120; ++i) {
    const double s = std::exp(0.5 * (log_lo + log_hi));
    const double mu_s = match_mean(s);
    const Moments got = TruncatedMoments(m.family, mu_s, s, support);
    if (!std::isfinite(got.mean)) {
      log_hi = std::log(s);
      continue;
    }
    const double err = std::abs(got.mean - m.mean) / std::abs(m.mean + 1e-300) +
                       std::abs(got.std - m.std) / m.std;
    if (err < best_err) {
      best_err = err;
      best = {mu_s, s, support};
    }
    if (got.std < m.std) log_lo = std::log(s); else log_hi = std::log(s);
  }
  return best;
}

double SampleMarginal(const MarginalTarget& m, const Calibrated& c,
                      double latent_normal) {
  double x;
  if (m.std == 0.0) {
    x = m.mean;
  } else {
    // Inverse-CDF sampling of the truncated latent distribution, driven by
    // the copula's uniform Phi(latent_normal).
    const double a = (c.support.lo - c.mu) / c.sigma;
    const double b = (c.support.hi - c.mu) / c.sigma;
    double z;
    if (a > 0.0) {
      // Entirely in the upper tail: work with upper-tail probabilities.
      const double pa = PhiComplement(a);
      const double pb = PhiComplement(b);
      z = -PhiInverse(pb + PhiComplement(latent_normal) * (pa - pb));
    } else {
      const double fa = Phi(a);
      const double fb = Phi(b);
      z = PhiInverse(fa + Phi(latent_normal) * (fb - fa));
    }
    z = std::clamp(z, a, b);
    const double latent = c.mu + c.sigma * z;
    x = m.family == Marginal::kLogNormal ? std::exp(latent) : latent;
  }
  if (m.integer) x = std::round(x);
  return std::clamp(x, m.min, m.max);
}

std::string_view FamilyName(Marginal family) {
  switch (family) {
    case Marginal::kNormal:
      return "normal";
    case Marginal::kLogNormal:
      return "lognormal";
    case Marginal::kProportion:
      return "proportion";
  }
  return "normal";
}

Marginal ParseFamily(const std::string& name) {
  for (Marginal f :
       {Marginal::kNormal, Marginal::kLogNormal, Marginal::kProportion}) {
    if (FamilyName(f) == name) return f;
  }
  Fail(ErrorCode::kCalibration, "unknown marginal family '" + name + "'");
}

using Kind = ResponseTerm::Kind;
using Gate = ResponseTerm::Gate;

const std::vector<std::pair<Kind, std::string_view>>& KindNames() {
  static const std::vector<std::pair<Kind, std::string_view>> names = {
      {Kind::kLinear, "linear"},       {Kind::kQuadratic, "quadratic"},
      {Kind::kSigmoid, "sigmoid"},     {Kind::kBump, "bump"},
      {Kind::kStep, "step"},           {Kind::kInteraction, "interaction"},
  };
  return names;
}

std::string_view KindName(Kind kind) {
  for (const auto& [k, name] : KindNames()) {
    if (k == kind) return name;
  }
  return "linear";
}

Kind ParseKind(const std::string& name) {
  for (const auto& [k, n] : KindNames()) {
    if (n == name) return k;
  }
  Fail(ErrorCode::kCalibration, "unknown response term kind '" + name + "'");
}

std::string_view GateName(Gate gate) {
  switch (gate) {
    case Gate::kNone:
      return "none";
    case Gate::kFemale:
      return "female";
    case Gate::kMale:
      return "male";
  }
  return "none";
}

Gate ParseGate(const std::string& name) {
  for (Gate g : {Gate::kNone, Gate::kFemale, Gate::kMale}) {
    if (GateName(g) == name) return g;
  }
  Fail(ErrorCode::kCalibration, "unknown response gate '" + name + "'");
}

double Mean(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.mean(); }

double StdDev(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double mean = v.mean();
  const double ss = (v.array() - mean).square().sum();
  return v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

void SyntheticSpec::Validate(const FeatureSchema& schema) const {
  std::map<std::string, const MarginalTarget*> by_name;
  for (const auto& m : marginals) {
    if (!schema.PredictorColumn(m.name)) {
      Fail(ErrorCode::kCalibration,
           "marginal '" + m.name + "' is not a predictor in the schema");
    }
    if (!by_name.emplace(m.name, &m).second) {
      Fail(ErrorCode::kCalibration, "duplicate marginal '" + m.name + "'");
    }
    if (!std::isfinite(m.mean) || !std::isfinite(m.std) ||
        !std::isfinite(m.min) || !std::isfinite(m.max)) {
      Fail(ErrorCode::kCalibration,
           "marginal '" + m.name + "' has non-finite moment targets");
    }
    if (!(m.min <= m.mean && m.mean <= m.max) || m.std < 0.0) {
      Fail(ErrorCode::kCalibration,
           "marginal '" + m.name +
               "' must satisfy min <= mean <= max and std >= 0");
    }
    if (m.family == Marginal::kLogNormal && !(m.mean > 0.0)) {
      Fail(ErrorCode::kCalibration,
           "log-normal marginal '" + m.name + "' needs a positive mean");
    }
    if (m.family == Marginal::kProportion && (m.min < 0.0 || m.max > 1.0)) {
      Fail(ErrorCode::kCalibration,
           "proportion marginal '" + m.name + "' must lie within [0, 1]");
    }
  }
  for (const auto& name : schema.predictor_names()) {
    if (!by_name.count(name)) {
      Fail(ErrorCode::kCalibration, "no marginal declared for '" + name + "'");
    }
  }
  for (const auto& m : marginals) {
    if (m.family != Marginal::kProportion) continue;
    auto it = by_name.find(m.denominator);
    if (it == by_name.end() || !it->second->integer ||
        it->second->family == Marginal::kProportion || it->second->min < 1.0) {
      Fail(ErrorCode::kCalibration,
           "proportion '" + m.name +
               "' needs an integer denominator marginal with min >= 1");
    }
  }
  for (const auto& c : correlations) {
    if (!std::isfinite(c.rho) || std::abs(c.rho) > 1.0) {
      Fail(ErrorCode::kCalibration,
           "correlation " + c.a + "/" + c.b + " must satisfy |rho| <= 1");
    }
    for (const auto* name : {&c.a, &c.b}) {
      auto it = by_name.find(*name);
      if (it == by_name.end()) {
        Fail(ErrorCode::kCalibration,
             "correlation references unknown variable '" + *name + "'");
      }
      if (it->second->family == Marginal::kProportion) {
        Fail(ErrorCode::kCalibration,
             "correlation targets cannot involve proportion marginal '" +
                 *name + "'");
      }
    }
    if (c.a == c.b) {
      Fail(ErrorCode::kCalibration, "correlation of '" + c.a + "' with itself");
    }
  }
  for (const auto& term : response.terms) {
    const std::size_t want = term.kind == Kind::kInteraction ? 2 : 1;
    if (term.variables.size() != want) {
      Fail(ErrorCode::kCalibration,
           std::string("response term '") + std::string(KindName(term.kind)) +
               "' needs " + std::to_string(want) + " variable(s)");
    }
    for (const auto& v : term.variables) {
      if (!schema.PredictorColumn(v)) {
        Fail(ErrorCode::kCalibration,
             "response references unknown variable '" + v + "'");
      }
    }
    if ((!term.centers.empty() && term.centers.size() != want) ||
        (!term.scales.empty() && term.scales.size() != want)) {
      Fail(ErrorCode::kCalibration,
           "response term centers/scales must match its variables");
    }
    for (const double s : term.scales) {
      if (!(s > 0.0)) {
        Fail(ErrorCode::kCalibration, "response term scales must be positive");
      }
    }
    if (term.gate != Gate::kNone && !schema.PredictorColumn("Female")) {
      Fail(ErrorCode::kCalibration, "gated response terms need 'Female'");
    }
  }
  if (!std::isfinite(response.intercept) || !std::isfinite(noise_std) ||
      noise_std < 0.0) {
    Fail(ErrorCode::kCalibration,
         "response intercept and noise_std must be finite, noise_std >= 0");
  }
}

SyntheticSpec SyntheticSpec::Default() {
  SyntheticSpec spec;
  const auto N = Marginal::kNormal;
  const auto L = Marginal::kLogNormal;
  // name, family, mean, std, min, max, integer
  spec.marginals = {
      {"Live_Counts", N, 1.76, 0.93, 1, 9, true, ""},
      {"Views", L, 15183.24, 24585.63, 4, 798267, true, ""},
      {"Likes", L, 53141.91, 112198.80, 6, 3759455, true, ""},
      {"Comments", L, 3547.18, 3914.48, 2, 58389, true, ""},
      {"Page_Views", L, 55304.30, 90681.31, 16, 2412945, true, ""},
      {"Fan_Growth", L, 151.90, 285.87, 0, 9218, true, ""},
      {"Wisdom", N, 16.74, 12.10, 2, 45, false, ""},
      {"Distance", N, 32.27, 1.59, 29, 36, false, ""},
      {"Youth", N, 14.80, 1.46, 11, 18, false, ""},
      {"Golden_Triangle", N, 66.93, 3.90, 58.20, 80.80, false, ""},
      {"Num_Pul", N, 1207.10, 315.55, 410, 2052, true, ""},
      {"Num_P", N, 1170.62, 313.00, 391, 2011, true, ""},
      {"Mean_P", N, 0.0045, 0.00090, 0.003, 0.0078, false, ""},
      {"SD_P", N, 0.0013, 0.00045, 0.00063, 0.0027, false, ""},
      {"Bw_1", L, 235.76, 429.19, 8.24, 3522.10, false, ""},
      {"Bw_2", L, 378.94, 336.50, 13.98, 1822.55, false, ""},
      {"Bw_3", L, 716.54, 716.11, 46.80, 4717.90, false, ""},
      {"Bw_4", L, 852.78, 853.92, 68.58, 3968.12, false, ""},
      {"Mean_I", N, 71.91, 3.51, 58.55, 77.64, false, ""},
      {"Min_I", N, 37.34, 3.21, 29.40, 51.86, false, ""},
      {"Max_I", N, 82.14, 2.74, 70.72, 87.18, false, ""},
      {"Service", N, 4.83, 0.076, 4.5, 4.9, false, ""},
      {"Logistics", N, 4.83, 0.076, 4.5, 4.9, false, ""},
      {"Activeness", N, 0.63, 0.19, 0.10, 1.00, false, ""},
      {"Favorite", L, 3036.55, 4348.70, 105, 36500, true, ""},
      {"Enthusiasm", N, 86.16, 8.41, 60, 95, false, ""},
      {"Elegance", N, 82.06, 10.14, 60, 95, false, ""},
      {"Appearance", N, 80.32, 9.01, 60, 95, false, ""},
      {"Streamers", N, 1.46, 0.63, 1, 3, true, ""},
      {"Female", Marginal::kProportion, 0.74, 0.39, 0.0, 1.0, false,
       "Streamers"},
  };
  spec.correlations = {
      {"Page_Views", "Likes", 0.71},
      {"Likes", "Comments", 0.65},
      {"Page_Views", "Comments", 0.50},
      {"Views", "Page_Views", 0.60},
      {"Num_Pul", "Num_P", 0.90},
  };
  spec.response.intercept = 8.0;
  spec.response.terms = {
      {Kind::kSigmoid, {"Comments"}, 2.5, {7.8}, {0.45}, Gate::kNone},
      {Kind::kSigmoid, {"Page_Views"}, 1.8, {10.3}, {0.55}, Gate::kNone},
      {Kind::kBump, {"Likes"}, 1.2, {10.3}, {1.0}, Gate::kNone},
      {Kind::kInteraction,
       {"Comments", "Page_Views"},
       0.35,
       {7.8, 10.3},
       {0.9, 1.15},
       Gate::kNone},
  };
  spec.noise_std = 0.35;
  return spec;
}

nlohmann::json SyntheticSpecToJson(const SyntheticSpec& spec) {
  nlohmann::json marginals = nlohmann::json::array();
  for (const auto& m : spec.marginals) {
    nlohmann::json item = {{"name", m.name},
                           {"family", FamilyName(m.family)},
                           {"mean", m.mean},
                           {"std", m.std},
                           {"min", m.min},
                           {"max", m.max},
                           {"integer", m.integer}};
    if (!m.denominator.empty()) item["denominator"] = m.denominator;
    marginals.push_back(std::move(item));
  }
  nlohmann::json correlations = nlohmann::json::array();
  for (const auto& c : spec.correlations) {
    correlations.push_back({{"a", c.a}, {"b", c.b}, {"rho", c.rho}});
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : spec.response.terms) {
    terms.push_back({{"kind", KindName(t.kind)},
                     {"variables", t.variables},
                     {"coef", t.coef},
                     {"centers", t.centers},
                     {"scales", t.scales},
                     {"gate", GateName(t.gate)}});
  }
  return {{"marginals", marginals},
          {"correlations", correlations},
          {"response", {{"intercept", spec.response.intercept}, {"terms", terms}}},
          {"noise_std", spec.noise_std}};
}

SyntheticSpec SyntheticSpecFromJson(const nlohmann::json& doc) {
  try {
    SyntheticSpec spec;
    for (const auto& item : doc.at("marginals")) {
      MarginalTarget m;
      m.name = item.at("name").get<std::string>();
      m.family = ParseFamily(item.value("family", std::string("normal")));
      m.mean = item.at("mean").get<double>();
      m.std = item.at("std").get<double>();
      m.min = item.at("min").get<double>();
      m.max = item.at("max").get<double>();
      m.integer = item.value("integer", false);
      m.denominator = item.value("denominator", std::string());
      spec.marginals.push_back(std::move(m));
    }
    if (doc.contains("correlations")) {
      for (const auto& item : doc.at("correlations")) {
        spec.correlations.push_back({item.at("a").get<std::string>(),
                                     item.at("b").get<std::string>(),
                                     item.at("rho").get<double>()});
      }
    }
    if (doc.contains("response")) {
      const auto& r = doc.at("response");
      spec.response.intercept = r.value("intercept", 0.0);
      if (r.contains("terms")) {
        for (const auto& item : r.at("terms")) {
          ResponseTerm t;
          t.kind = ParseKind(item.at("kind").get<std::string>());
          t.variables = item.at("variables").get<std::vector<std::string>>();
          t.coef = item.value("coef", 1.0);
          t.centers = item.value("centers", std::vector<double>{});
          t.scales = item.value("scales", std::vector<double>{});
          t.gate = ParseGate(item.value("gate", std::string("none")));
          spec.response.terms.push_back(std::move(t));
        }
      }
    }
    spec.noise_std = doc.value("noise_std", 0.0);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kCalibration,
         std::string("malformed synthetic spec: ") + e.what());
  }
}

SyntheticSpec LoadSyntheticSpec(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse,
         "synthetic spec '" + path + "' is not valid JSON: " + e.what());
  }
  return SyntheticSpecFromJson(doc);
}

double EvaluateResponse(const ResponseSpec& response,
                        const FeatureSchema& schema,
                        std::span<const double> row) {
  double total = response.intercept;
  const auto female_col = schema.PredictorColumn("Female");
  for (const auto& term : response.terms) {
    if (term.gate != Gate::kNone) {
      const double cut =
          ApplyTransform(schema.predictor(*female_col).transform, 0.5);
      const double share = row[*female_col];
      if (term.gate == Gate::kFemale && !(share > cut)) continue;
      if (term.gate == Gate::kMale && !(share < cut)) continue;
    }
    auto u = [&](std::size_t i) {
      const double center = term.centers.empty() ? 0.0 : term.centers[i];
      const double scale = term.scales.empty() ? 1.0 : term.scales[i];
      return (row[*schema.PredictorColumn(term.variables[i])] - center) / scale;
    };
    const double u0 = u(0);
    switch (term.kind) {
      case Kind::kLinear:
        total += term.coef * u0;
        break;
      case Kind::kQuadratic:
        total += term.coef * u0 * u0;
        break;
      case Kind::kSigmoid:
        total += term.coef / (1.0 + std::exp(-u0));
        break;
      case Kind::kBump:
        total += term.coef * std::exp(-0.5 * u0 * u0);
        break;
      case Kind::kStep:
        total += u0 > 0.0 ? term.coef : 0.0;
        break;
      case Kind::kInteraction:
        total += term.coef * u0 * u(1);
        break;
    }
  }
  return total;
}

Dataset Synthesize(const SyntheticSpec& spec, std::size_t n, std::uint64_t seed,
                   const FeatureSchema& schema) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "synthesize needs n >= 1");
  spec.Validate(schema);

  const std::size_t p = schema.num_predictors();
  std::vector<const MarginalTarget*> by_column(p, nullptr);
  for (const auto& m : spec.marginals) by_column[*schema.PredictorColumn(m.name)] = &m;

  // Copula variables: every non-proportion marginal, in column order.
  std::vector<std::size_t> copula_cols;
  std::vector<int> copula_slot(p, -1);
  for (std::size_t c = 0; c < p; ++c) {
    if (by_column[c]->family != Marginal::kProportion) {
      copula_slot[c] = static_cast<int>(copula_cols.size());
      copula_cols.push_back(c);
    }
  }
  const auto m = static_cast<Eigen::Index>(copula_cols.size());
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(m, m);
  for (const auto& c : spec.correlations) {
    const int a = copula_slot[*schema.PredictorColumn(c.a)];
    const int b = copula_slot[*schema.PredictorColumn(c.b)];
    corr(a, b) = c.rho;
    corr(b, a) = c.rho;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10) {
    Fail(ErrorCode::kCalibration,
         "correlation targets do not form a positive semi-definite matrix "
         "(smallest eigenvalue " +
             FormatDouble(eig.eigenvalues().minCoeff()) + ")");
  }
  const Eigen::MatrixXd mixing =
      eig.eigenvectors() *
      eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

  std::vector<Calibrated> calibrated(p);
  for (std::size_t c = 0; c < p; ++c) {
    if (by_column[c]->family != Marginal::kProportion) {
      calibrated[c] = CalibrateMarginal(*by_column[c]);
    }
  }

  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Vector target(static_cast<Eigen::Index>(n));
  std::vector<std::string> ids(n);
  const double log_lo = std::log(schema.target().lower_bound);
  const double log_hi = std::log(schema.target().upper_bound);

  Rng rng(seed);
  Eigen::VectorXd eps(m);
  std::vector<double> transformed(p);
  for (std::size_t r = 0; r < n; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (Eigen::Index i = 0; i < m; ++i) eps[i] = rng.Normal();
    const Eigen::VectorXd latent = mixing * eps;
    for (std::size_t c = 0; c < p; ++c) {
      if (copula_slot[c] < 0) continue;
      features(ri, static_cast<Eigen::Index>(c)) =
          SampleMarginal(*by_column[c], calibrated[c], latent[copula_slot[c]]);
    }
    for (std::size_t c = 0; c < p; ++c) {
      const auto& marginal = *by_column[c];
      if (marginal.family != Marginal::kProportion) continue;
      const auto hosts = static_cast<int>(features(
          ri, static_cast<Eigen::Index>(
                  *schema.PredictorColumn(marginal.denominator))));
      int female = 0;
      for (int h = 0; h < hosts; ++h) {
        if (rng.Uniform() < marginal.mean) ++female;
      }
      features(ri, static_cast<Eigen::Index>(c)) =
          static_cast<double>(female) / static_cast<double>(hosts);
    }
    for (std::size_t c = 0; c < p; ++c) {
      transformed[c] = ApplyTransform(schema.predictor(c).transform,
                                      features(ri, static_cast<Eigen::Index>(c)));
    }
    const double noise = spec.noise_std > 0.0 ? spec.noise_std * rng.Normal() : 0.0;
    const double log_gmv = std::clamp(
        EvaluateResponse(spec.response, schema, transformed) + noise, log_lo,
        log_hi);
    target[ri] = std::exp(log_gmv);
    ids[r] = std::to_string(r + 1);
  }
  return Dataset(schema, std::move(features), std::move(target), std::move(ids),
                 Scale::kRaw);
}

CalibrationReport MeasureCalibration(const SyntheticSpec& spec,
                                     const Dataset& raw) {
  CalibrationReport report;
  const auto& schema = raw.schema();
  for (const auto& m : spec.marginals) {
    const auto col = static_cast<Eigen::Index>(raw.Column(m.name));
    const Eigen::VectorXd values = raw.features().col(col);
    report.moments.push_back(
        {m.name, m.mean, Mean(values), m.std, StdDev(values)});
  }
  for (const auto& c : spec.correlations) {
    const auto ca = raw.Column(c.a);
    const auto cb = raw.Column(c.b);
    Matrix pair(raw.features().rows(), 2);
    for (Eigen::Index r = 0; r < pair.rows(); ++r) {
      pair(r, 0) = ApplyTransform(schema.predictor(ca).transform,
                                  raw.features()(r, static_cast<Eigen::Index>(ca)));
      pair(r, 1) = ApplyTransform(schema.predictor(cb).transform,
                                  raw.features()(r, static_cast<Eigen::Index>(cb)));
    }
    const std::vector<std::string> names = {c.a, c.b};
    const Matrix corr = PearsonCorrelation(pair, names);
    report.correlations.push_back({c.a, c.b, c.rho, corr(0, 1)});
  }
  return report;
}

std::string CalibrationReport::Format() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %14s %14s %14s %14s\n", "variable",
                "target_mean", "mean", "target_std", "std");
  out << line;
  for (const auto& row : moments) {
    std::snprintf(line, sizeof(line), "%-16s %14.6g %14.6g %14.6g %14.6g\n",
                  row.name.c_str(), row.target_mean, row.achieved_mean,
                  row.target_std, row.achieved_std);
    out << line;
  }
  if (!correlations.empty()) {
    std::snprintf(line, sizeof(line), "%-28s %10s %10s\n", "correlation",
                  "target", "achieved");
    out << line;
    for (const auto& row : correlations) {
      const std::string pair = row.a + "/" + row.b;
      std::snprintf(line, sizeof(line), "%-28s %10.4f %10.4f\n", pair.c_str(),
                    row.target, row.achieved);
      out << line;
    }
  }
  return out.str();
}

}  // namespace gmvx::dataset
