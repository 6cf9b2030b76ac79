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

#include "gmvx/dataset/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"
#include "gmvx/common/random.h"

namespace gmvx::dataset {

Dataset::Dataset(FeatureSchema schema, Matrix features, Vector target,
                 std::vector<std::string> row_ids, Scale scale)
    : schema_(std::move(schema)),
      features_(std::move(features)),
      target_(std::move(target)),
      row_ids_(std::move(row_ids)),
      scale_(scale) {
  if (features_.rows() < 1) {
    Fail(ErrorCode::kEmptyInput, "dataset has no rows");
  }
  if (static_cast<std::size_t>(features_.cols()) != schema_.num_predictors()) {
    Fail(ErrorCode::kSchema,
         "feature matrix has " + std::to_string(features_.cols()) +
             " columns but the schema declares " +
             std::to_string(schema_.num_predictors()) + " predictors");
  }
  if (target_.size() != features_.rows() ||
      row_ids_.size() != static_cast<std::size_t>(features_.rows())) {
    Fail(ErrorCode::kInvalidArgument,
         "features, target and row ids disagree on the row count");
  }
}

std::size_t Dataset::Column(std::string_view name) const {
  const auto col = schema_.PredictorColumn(name);
  if (!col) {
    Fail(ErrorCode::kSchema,
         "'" + std::string(name) + "' is not a predictor in the schema");
  }
  return *col;
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (const auto r : rows) ids.push_back(row_ids_[r]);
  return Dataset(schema_, SelectRows(features_, rows), SelectRows(target_, rows),
                 std::move(ids), scale_);
}

Dataset ParseCsvDataset(std::string_view text, const FeatureSchema& schema) {
  const CsvTable table = ParseCsv(text);
  if (table.rows.empty()) {
    Fail(ErrorCode::kEmptyInput, "CSV has a header but no data rows");
  }

  std::map<std::string, std::size_t> position;
  std::vector<std::string> duplicated;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (!position.emplace(table.header[i], i).second) {
      duplicated.push_back(table.header[i]);
    }
  }
  std::vector<std::string> missing;
  for (const auto& v : schema.variables()) {
    if (!position.count(v.name)) missing.push_back(v.name);
  }
  std::vector<std::string> extra;
  for (const auto& h : table.header) {
    if (!schema.Find(h)) extra.push_back(h);
  }
  if (!missing.empty() || !extra.empty() || !duplicated.empty()) {
    std::ostringstream msg;
    msg << "CSV columns do not match the schema";
    auto list = [&msg](const char* label, const std::vector<std::string>& xs) {
      if (xs.empty()) return;
      msg << "; " << label << ":";
      for (const auto& x : xs) msg << " " << x;
    };
    list("missing", missing);
    list("extra", extra);
    list("duplicated", duplicated);
    Fail(ErrorCode::kSchema, msg.str());
  }

  const std::size_t n = table.rows.size();
  const std::size_t p = schema.num_predictors();
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Vector target(static_cast<Eigen::Index>(n));
  std::vector<std::string> ids(n);

  auto parse = [&](std::size_t row, const std::string& column) {
    const std::string& cell = table.rows[row][position.at(column)];
    const auto value = ParseCsvNumber(cell);
    if (!value) {
      Fail(ErrorCode::kParse, "row " + std::to_string(row + 1) + ", column " +
                                  column + ": '" + cell + "' is not a number");
    }
    return *value;
  };

  for (std::size_t r = 0; r < n; ++r) {
    ids[r] = std::to_string(r + 1);
    for (std::size_t c = 0; c < p; ++c) {
      features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse(r, schema.predictor(c).name);
    }
    target[static_cast<Eigen::Index>(r)] = parse(r, schema.target_name());
  }
  return Dataset(schema, std::move(features), std::move(target), std::move(ids),
                 Scale::kRaw);
}

Dataset LoadCsv(const std::string& path, const FeatureSchema& schema) {
  return ParseCsvDataset(ReadTextFile(path), schema);
}

std::string DatasetToCsv(const Dataset& ds) {
  const auto& schema = ds.schema();
  std::string out;
  bool first = true;
  for (const auto& v : schema.variables()) {
    if (!first) out += ',';
    out += v.name;
    first = false;
  }
  out += '\n';
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    std::size_t column = 0;
    first = true;
    for (const auto& v : schema.variables()) {
      if (!first) out += ',';
      first = false;
      const double value =
          v.role == Role::kTarget
              ? ds.target()[static_cast<Eigen::Index>(r)]
              : ds.features()(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(column++));
      out += FormatDouble(value);
    }
    out += '\n';
  }
  return out;
}

void WriteCsv(const std::string& path, const Dataset& ds) {
  WriteTextFile(path, DatasetToCsv(ds));
}

std::size_t ValidationReport::violation_count() const {
  std::size_t total = 0;
  for (const auto& issue : issues) {
    total += issue.out_of_bounds.size() + issue.non_finite.size();
  }
  return total;
}

std::string ValidationReport::Describe(std::size_t max_rows_listed) const {
  if (issues.empty()) return "no violations\n";
  std::ostringstream out;
  auto rows = [&](const std::vector<std::size_t>& xs) {
    for (std::size_t i = 0; i < xs.size() && i < max_rows_listed; ++i) {
      out << (i ? ", " : " rows ") << xs[i] + 1;
    }
    if (xs.size() > max_rows_listed) out << ", ...";
  };
  for (const auto& issue : issues) {
    out << issue.name << ":";
    if (!issue.out_of_bounds.empty()) {
      out << " " << issue.out_of_bounds.size() << " out of bounds";
      rows(issue.out_of_bounds);
      out << ";";
    }
    if (!issue.non_finite.empty()) {
      out << " " << issue.non_finite.size() << " missing/non-finite";
      rows(issue.non_finite);
      out << ";";
    }
    out << "\n";
  }
  return out.str();
}

ValidationReport Validate(const Dataset& ds, const ValidateOptions& options) {
  ValidationReport report;
  const auto& schema = ds.schema();
  const bool transformed = ds.scale() == Scale::kTransformed;
  std::size_t column = 0;
  for (const auto& v : schema.variables()) {
    VariableIssues issue{v.name, {}, {}};
    double lo = v.lower_bound;
    double hi = v.upper_bound;
    if (transformed) {
      lo = ApplyTransform(v.transform, lo);
      hi = ApplyTransform(v.transform, hi);
    }
    for (std::size_t r = 0; r < ds.rows(); ++r) {
      const double x = v.role == Role::kTarget
                           ? ds.target()[static_cast<Eigen::Index>(r)]
                           : ds.features()(static_cast<Eigen::Index>(r),
                                           static_cast<Eigen::Index>(column));
      if (!std::isfinite(x)) {
        issue.non_finite.push_back(r);
      } else if (x < lo || x > hi) {
        issue.out_of_bounds.push_back(r);
      }
    }
    if (v.role != Role::kTarget) ++column;
    if (!issue.out_of_bounds.empty() || !issue.non_finite.empty()) {
      report.issues.push_back(std::move(issue));
    }
  }
  if (options.strict && !report.empty()) {
    Fail(ErrorCode::kValidation, "strict validation failed:\n" +
                                     report.Describe());
  }
  return report;
}

namespace {

double CheckedTransform(const VariableSpec& v, double x, std::size_t row) {
  if (!std::isfinite(x)) {
    Fail(ErrorCode::kDomain, "row " + std::to_string(row + 1) + ", variable " +
                                 v.name + ": value is missing or non-finite");
  }
  if ((v.transform == Transform::kLog && !(x > 0.0)) ||
      (v.transform == Transform::kLog1p && !(x > -1.0))) {
    Fail(ErrorCode::kDomain,
         "row " + std::to_string(row + 1) + ", variable " + v.name + ": " +
             std::string(TransformName(v.transform)) + " of " + FormatDouble(x) +
             " is undefined");
  }
  return ApplyTransform(v.transform, x);
}

}  // namespace

Dataset ApplyTransforms(const Dataset& ds) {
  if (ds.scale() == Scale::kTransformed) {
    Fail(ErrorCode::kInvalidArgument, "dataset is already transformed");
  }
  const auto& schema = ds.schema();
  Matrix features = ds.features();
  Vector target = ds.target();
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      features(ri, ci) = CheckedTransform(schema.predictor(c), features(ri, ci), r);
    }
    target[ri] = CheckedTransform(schema.target(), target[ri], r);
  }
  return Dataset(schema, std::move(features), std::move(target), ds.row_ids(),
                 Scale::kTransformed);
}

Dataset InvertTransforms(const Dataset& ds) {
  if (ds.scale() != Scale::kTransformed) {
    Fail(ErrorCode::kInvalidArgument, "dataset is not transformed");
  }
  const auto& schema = ds.schema();
  Matrix features = ds.features();
  Vector target = ds.target();
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      const auto ci = static_cast<Eigen::Index>(c);
      features(ri, ci) =
          InvertTransform(schema.predictor(c).transform, features(ri, ci));
    }
    target[ri] = InvertTransform(schema.target().transform, target[ri]);
  }
  return Dataset(schema, std::move(features), std::move(target), ds.row_ids(),
                 Scale::kRaw);
}

Matrix PearsonCorrelation(const Matrix& columns,
                          std::span<const std::string> names) {
  const Eigen::Index n = columns.rows();
  const Eigen::Index p = columns.cols();
  if (n < 2) {
    Fail(ErrorCode::kInsufficientData, "correlation needs at least 2 rows");
  }
  const Eigen::RowVectorXd mean = columns.colwise().mean();
  Matrix centered = columns.rowwise() - mean;
  Eigen::VectorXd norms(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    norms[j] = centered.col(j).norm();
    if (!(norms[j] > 0.0)) {
      const std::string name = static_cast<std::size_t>(j) < names.size()
                                   ? names[static_cast<std::size_t>(j)]
                                   : std::to_string(j);
      Fail(ErrorCode::kDegenerate,
           "column '" + name + "' has zero variance; correlation undefined");
    }
  }
  Matrix corr(p, p);
  for (Eigen::Index a = 0; a < p; ++a) {
    corr(a, a) = 1.0;
    for (Eigen::Index b = a + 1; b < p; ++b) {
      double r = centered.col(a).dot(centered.col(b)) / (norms[a] * norms[b]);
      r = std::clamp(r, -1.0, 1.0);
      corr(a, b) = r;
      corr(b, a) = r;
    }
  }
  return corr;
}

CorrelationMatrix ComputeCorrelations(const Dataset& ds, bool include_target) {
  CorrelationMatrix out;
  out.names = ds.schema().predictor_names();
  Matrix columns = ds.features();
  if (include_target) {
    columns.conservativeResize(Eigen::NoChange, columns.cols() + 1);
    columns.col(columns.cols() - 1) = ds.target();
    out.names.push_back(ds.schema().target_name());
  }
  out.values = PearsonCorrelation(columns, out.names);
  return out;
}

std::vector<std::size_t> FoldPlan::TrainIndices(std::size_t f) const {
  std::vector<char> held_out(n, 0);
  for (const auto i : folds.at(f)) held_out[i] = 1;
  std::vector<std::size_t> train;
  train.reserve(n - folds[f].size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!held_out[i]) train.push_back(i);
  }
  return train;
}

FoldPlan MakeFolds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) {
    Fail(ErrorCode::kInvalidArgument,
         "fold count must satisfy 2 <= k <= n (k=" + std::to_string(k) +
             ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.n = n;
  plan.folds.resize(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    plan.folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                         order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return plan;
}

GroupSplit SplitByGender(const Dataset& ds, double threshold) {
  const auto col = ds.schema().PredictorColumn("Female");
  if (!col) {
    Fail(ErrorCode::kSchema,
         "gender split needs a 'Female' predictor column in the schema");
  }
  double cut = threshold;
  if (ds.scale() == Scale::kTransformed) {
    cut = ApplyTransform(ds.schema().predictor(*col).transform, threshold);
  }
  GroupSplit split;
  split.threshold = threshold;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    const double share = ds.features()(static_cast<Eigen::Index>(r),
                                       static_cast<Eigen::Index>(*col));
    if (share > cut) {
      split.female.push_back(r);
    } else if (share < cut) {
      split.male.push_back(r);
    } else {
      split.excluded.push_back(r);
    }
  }
  return split;
}

}  // namespace gmvx::dataset
