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

#include "gmvx/models/svr.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>
#include <variant>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/parallel.h"

namespace gmvx::models {

void Kernel::Validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    Fail(ErrorCode::kInvalidArgument, "kernel gamma must be > 0");
  }
  if (kind == Kind::kPolynomial && degree < 1) {
    Fail(ErrorCode::kInvalidArgument, "polynomial degree must be >= 1");
  }
}

double Kernel::operator()(std::span<const double> a,
                          std::span<const double> b) const {
  double acc = 0.0;
  switch (kind) {
    case Kind::kRbf:
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
      }
      return std::exp(-gamma * acc);
    case Kind::kLinear:
    case Kind::kPolynomial:
    case Kind::kSigmoid:
      for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
      break;
  }
  if (kind == Kind::kLinear) return acc;
  if (kind == Kind::kSigmoid) return std::tanh(gamma * acc + coef0);
  return std::pow(gamma * acc + coef0, degree);
}

Kernel::Kind ParseKernelKind(const std::string& name) {
  if (name == "linear") return Kernel::Kind::kLinear;
  if (name == "poly" || name == "polynomial") return Kernel::Kind::kPolynomial;
  if (name == "rbf") return Kernel::Kind::kRbf;
  if (name == "sigmoid") return Kernel::Kind::kSigmoid;
  Fail(ErrorCode::kInvalidArgument, "unknown kernel '" + name + "'");
}

std::string_view KernelKindName(Kernel::Kind kind) {
  switch (kind) {
    case Kernel::Kind::kLinear: return "linear";
    case Kernel::Kind::kPolynomial: return "poly";
    case Kernel::Kind::kSigmoid: return "sigmoid";
    case Kernel::Kind::kRbf: break;
  }
  return "rbf";
}

Kernel KernelFromParams(const Hyperparameters& params, const Matrix& x) {
  Kernel k;
  k.kind = ParseKernelKind(params.GetString("kernel", "rbf"));
  k.degree = static_cast<int>(params.GetInt("degree", 3));
  k.coef0 = params.GetDouble("coef0", 0.0);
  const auto gamma = params.GetNumberOrKeyword("gamma", "scale");
  const double p = static_cast<double>(x.cols());
  if (const auto* number = std::get_if<double>(&gamma)) {
    k.gamma = *number;
  } else if (std::get<std::string>(gamma) == "auto") {
    k.gamma = 1.0 / p;
  } else if (std::get<std::string>(gamma) == "scale") {
    const double mean = x.mean();
    const double var =
        (x.array() - mean).square().sum() / static_cast<double>(x.size());
    k.gamma = var > 0.0 ? 1.0 / (p * var) : 1.0;
  } else {
    Fail(ErrorCode::kInvalidArgument,
         "gamma must be a number, 'scale' or 'auto'");
  }
  k.Validate();
  return k;
}

double SvrModel::Predict(std::span<const double> x) const {
  double f = bias;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    f += coef[i] * kernel(RowSpan(support, static_cast<Eigen::Index>(i)), x);
  }
  return f;
}

Vector SvrModel::Predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = Predict(RowSpan(x, r));
  return out;
}

namespace {

// Kernel rows K(i, .) over the training points. Small problems keep the
// whole matrix; larger ones keep the most recently used rows.
class KernelRows {
 public:
  static constexpr std::size_t kFullLimit = 4000;
  static constexpr std::size_t kCacheBytes = std::size_t{256} << 20;

  KernelRows(const Matrix& x, const Kernel& kernel)
      : x_(x), kernel_(kernel), n_(static_cast<std::size_t>(x.rows())) {
    if (n_ <= kFullLimit) {
      full_.resize(n_ * n_);
      ParallelFor(n_, [&](std::size_t i) { Fill(i, &full_[i * n_]); });
    } else {
      capacity_ = std::max<std::size_t>(2, kCacheBytes / (n_ * sizeof(double)));
    }
  }

  const double* Row(std::size_t i) {
    if (!full_.empty()) return &full_[i * n_];
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second.data();
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    lru_.emplace_front(i, std::vector<double>(n_));
    Fill(i, lru_.front().second.data());
    index_[i] = lru_.begin();
    return lru_.front().second.data();
  }

 private:
  void Fill(std::size_t i, double* out) const {
    const auto a = RowSpan(x_, static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n_; ++j) {
      out[j] = kernel_(a, RowSpan(x_, static_cast<Eigen::Index>(j)));
    }
  }

  const Matrix& x_;
  const Kernel& kernel_;
  std::size_t n_;
  std::vector<double> full_;
  std::size_t capacity_ = 0;
  using Entry = std::pair<std::size_t, std::vector<double>>;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

constexpr double kTau = 1e-12;

}  // namespace

SvrModel FitSvr(const Matrix& x, const Vector& y, const Hyperparameters& params,
                std::vector<std::string>* warnings) {
  SvrModel model;
  model.kernel = KernelFromParams(params, x);
  model.c = params.GetDouble("C", 1.0);
  model.epsilon = params.GetDouble("epsilon", 0.1);
  const double tol = params.GetDouble("tol", 1e-3);
  const std::int64_t max_iter = params.GetInt("max_iter", 100000);
  if (!(model.c > 0.0)) Fail(ErrorCode::kInvalidArgument, "C must be > 0");
  if (!(model.epsilon >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  if (!(tol > 0.0)) Fail(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (max_iter < 1) Fail(ErrorCode::kInvalidArgument, "max_iter must be >= 1");

  // Variables 0..n-1 are alpha (sign +1), n..2n-1 are alpha^* (sign -1):
  //   min 1/2 a'Qa + p'a,  0 <= a <= C,  s'a = 0,
  // with Q_tu = s_t s_u K(t mod n, u mod n) and p = eps -/+ y.
  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t m = 2 * n;
  const double c = model.c;
  KernelRows rows(x, model.kernel);
  std::vector<double> sign(m), alpha(m, 0.0), grad(m), diag(m);
  for (std::size_t t = 0; t < n; ++t) {
    const double yt = y[static_cast<Eigen::Index>(t)];
    sign[t] = 1.0;
    sign[t + n] = -1.0;
    grad[t] = model.epsilon - yt;
    grad[t + n] = model.epsilon + yt;
    const auto xt = RowSpan(x, static_cast<Eigen::Index>(t));
    diag[t] = diag[t + n] = model.kernel(xt, xt);
  }
  auto in_up = [&](std::size_t t) {
    return sign[t] > 0 ? alpha[t] < c : alpha[t] > 0.0;
  };
  auto in_low = [&](std::size_t t) {
    return sign[t] > 0 ? alpha[t] > 0.0 : alpha[t] < c;
  };

  bool converged = false;
  double gap = std::numeric_limits<double>::infinity();
  std::int64_t iter = 0;
  for (; iter < max_iter; ++iter) {
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (in_up(t) && -sign[t] * grad[t] >= gmax) {
        if (-sign[t] * grad[t] > gmax || i == m) i = t;
        gmax = -sign[t] * grad[t];
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t j = m;
    double best_obj = std::numeric_limits<double>::infinity();
    const double* ki = i < m ? rows.Row(i % n) : nullptr;
    for (std::size_t t = 0; t < m; ++t) {
      if (!in_low(t)) continue;
      const double yg = sign[t] * grad[t];
      gmax2 = std::max(gmax2, yg);
      if (ki == nullptr) continue;
      const double b = gmax + yg;
      if (b <= 0.0) continue;
      double a = diag[i] + diag[t] - 2.0 * ki[t % n];
      if (a <= 0.0) a = kTau;
      const double obj = -(b * b) / a;
      if (obj < best_obj) {
        best_obj = obj;
        j = t;
      }
    }
    gap = gmax + gmax2;
    if (gap < tol || i == m || j == m) {
      converged = true;
      if (!std::isfinite(gap)) gap = 0.0;
      break;
    }

    const double* kj = rows.Row(j % n);
    ki = rows.Row(i % n);
    const double qij = sign[i] * sign[j] * ki[j % n];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (sign[i] != sign[j]) {
      double quad = diag[i] + diag[j] + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = diag[i] + diag[j] - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = (alpha[i] - old_i) * sign[i];
    const double dj = (alpha[j] - old_j) * sign[j];
    for (std::size_t t = 0; t < m; ++t) {
      grad[t] += sign[t] * (di * ki[t % n] + dj * kj[t % n]);
    }
  }
  if (!converged) {
    Fail(ErrorCode::kConvergence,
         "SVR solver did not converge in " + std::to_string(max_iter) +
             " iterations (KKT violation " + FormatDouble(gap) + ")");
  }

  double upper = std::numeric_limits<double>::infinity();
  double lower = -upper;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double yg = sign[t] * grad[t];
    if (alpha[t] >= c) {
      if (sign[t] < 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (sign[t] > 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                    : (upper + lower) / 2.0;
  model.bias = -rho;
  model.kkt_gap = gap;
  model.iterations = iter;

  std::vector<Eigen::Index> support;
  for (std::size_t t = 0; t < n; ++t) {
    const double coef = alpha[t] - alpha[t + n];
    if (coef != 0.0) {
      support.push_back(static_cast<Eigen::Index>(t));
      model.coef.push_back(coef);
    }
  }
  model.support.resize(static_cast<Eigen::Index>(support.size()), x.cols());
  for (std::size_t s = 0; s < support.size(); ++s) {
    model.support.row(static_cast<Eigen::Index>(s)) = x.row(support[s]);
  }
  if (support.empty() && warnings != nullptr) {
    warnings->push_back("SVR has no support vectors; predictions are constant");
  }
  return model;
}

nlohmann::json SvrToJson(const SvrModel& model) {
  std::vector<std::vector<double>> support;
  for (Eigen::Index r = 0; r < model.support.rows(); ++r) {
    const auto row = RowSpan(model.support, r);
    support.emplace_back(row.begin(), row.end());
  }
  return {{"kernel",
           {{"kind", KernelKindName(model.kernel.kind)},
            {"gamma", model.kernel.gamma},
            {"degree", model.kernel.degree},
            {"coef0", model.kernel.coef0}}},
          {"num_features", model.support.cols()},
          {"support", support},
          {"coef", model.coef},
          {"bias", model.bias},
          {"epsilon", model.epsilon},
          {"C", model.c},
          {"kkt_gap", model.kkt_gap},
          {"iterations", model.iterations}};
}

SvrModel SvrFromJson(const nlohmann::json& doc) {
  SvrModel model;
  try {
    const auto& k = doc.at("kernel");
    model.kernel.kind = ParseKernelKind(k.at("kind").get<std::string>());
    model.kernel.gamma = k.at("gamma").get<double>();
    model.kernel.degree = k.at("degree").get<int>();
    model.kernel.coef0 = k.at("coef0").get<double>();
    const auto p = doc.at("num_features").get<Eigen::Index>();
    const auto support =
        doc.at("support").get<std::vector<std::vector<double>>>();
    model.support.resize(static_cast<Eigen::Index>(support.size()), p);
    for (std::size_t r = 0; r < support.size(); ++r) {
      if (static_cast<Eigen::Index>(support[r].size()) != p) {
        Fail(ErrorCode::kParse, "support vector has the wrong width");
      }
      for (Eigen::Index c = 0; c < p; ++c) {
        model.support(static_cast<Eigen::Index>(r), c) =
            support[r][static_cast<std::size_t>(c)];
      }
    }
    model.coef = doc.at("coef").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.epsilon = doc.at("epsilon").get<double>();
    model.c = doc.at("C").get<double>();
    model.kkt_gap = doc.at("kkt_gap").get<double>();
    model.iterations = doc.at("iterations").get<std::int64_t>();
  } catch (const nlohmann::json::exception& ex) {
    Fail(ErrorCode::kParse, std::string("bad svr model: ") + ex.what());
  }
  if (model.coef.size() != static_cast<std::size_t>(model.support.rows())) {
    Fail(ErrorCode::kParse, "svr coefficient count differs from support size");
  }
  model.kernel.Validate();
  return model;
}

}  // namespace gmvx::models
