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

#ifndef GMVX_DATASET_DATASET_H_
#define GMVX_DATASET_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmvx/common/matrix.h"
#include "gmvx/dataset/schema.h"

namespace gmvx::dataset {

enum class Scale {
  kRaw,          // values as ingested
  kTransformed,  // per-variable transforms applied; target is ln(GMV)
};

// Broadcast table: n rows, one feature column per schema predictor in schema
// order, plus the target. Immutable after construction.
class Dataset {
 public:
  Dataset(FeatureSchema schema, Matrix features, Vector target,
          std::vector<std::string> row_ids, Scale scale = Scale::kRaw);

  const FeatureSchema& schema() const { return schema_; }
  const Matrix& features() const { return features_; }
  const Vector& target() const { return target_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  Scale scale() const { return scale_; }

  std::size_t rows() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(features_.cols()); }

  // Feature column by predictor name; throws kSchema for unknown names.
  std::size_t Column(std::string_view name) const;

  Dataset Subset(std::span<const std::size_t> rows) const;

 private:
  FeatureSchema schema_;
  Matrix features_;
  Vector target_;
  std::vector<std::string> row_ids_;
  Scale scale_;
};

// Reads a header-first CSV, matching columns to the schema by name. Values
// stay raw; empty/NA cells become NaN and are reported by Validate.
Dataset LoadCsv(const std::string& path, const FeatureSchema& schema);
Dataset ParseCsvDataset(std::string_view text, const FeatureSchema& schema);

// Writes columns in schema order (target included) with round-trip exact
// number formatting.
std::string DatasetToCsv(const Dataset& ds);
void WriteCsv(const std::string& path, const Dataset& ds);

struct VariableIssues {
  std::string name;
  std::vector<std::size_t> out_of_bounds;  // 0-based row indices
  std::vector<std::size_t> non_finite;
};

struct ValidationReport {
  std::vector<VariableIssues> issues;  // only variables with violations

  bool empty() const { return issues.empty(); }
  std::size_t violation_count() const;
  std::string Describe(std::size_t max_rows_listed = 5) const;
};

struct ValidateOptions {
  // Bounds violations are warnings unless strict; non-finite cells always
  // make the dataset unusable for Transform.
  bool strict = false;
};

// Throws kValidation when strict and the report is non-empty.
ValidationReport Validate(const Dataset& ds, const ValidateOptions& options = {});

// Applies each variable's transform; the target always gets the natural log.
// Requires finite values; a non-positive input to log is a kDomain error
// naming the row and variable.
Dataset ApplyTransforms(const Dataset& ds);
Dataset InvertTransforms(const Dataset& ds);

struct CorrelationMatrix {
  std::vector<std::string> names;
  Matrix values;
};

// Pearson correlations between predictor columns (and the target as the last
// column when include_target is set).
CorrelationMatrix ComputeCorrelations(const Dataset& ds,
                                      bool include_target = false);
Matrix PearsonCorrelation(const Matrix& columns,
                          std::span<const std::string> names);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> folds;

  // Complement of fold f, ascending.
  std::vector<std::size_t> TrainIndices(std::size_t f) const;
};

// Seeded Fisher-Yates shuffle of 0..n-1 followed by contiguous chunks; the
// first n % k folds get one extra element.
FoldPlan MakeFolds(std::size_t n, std::size_t k, std::uint64_t seed);

struct GroupSplit {
  std::vector<std::size_t> female;
  std::vector<std::size_t> male;
  std::vector<std::size_t> excluded;
  double threshold = 0.5;
};

// Female share above the threshold goes to `female`, below to `male`, equal
// to `excluded`. The Female column is compared on the dataset's own scale;
// for transformed data the threshold is mapped through the same transform.
GroupSplit SplitByGender(const Dataset& ds, double threshold = 0.5);

}  // namespace gmvx::dataset

#endif  // GMVX_DATASET_DATASET_H_
