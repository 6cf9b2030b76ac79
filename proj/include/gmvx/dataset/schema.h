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

#ifndef GMVX_DATASET_SCHEMA_H_
#define GMVX_DATASET_SCHEMA_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace gmvx::dataset {

enum class Role { kTarget, kPredictor };
enum class Group { kPopularity, kAppearance, kVoice, kMisc, kTarget };
enum class Transform { kLog, kLog1p, kNone };

std::string_view RoleName(Role role);
std::string_view GroupName(Group group);
std::string_view TransformName(Transform transform);
Role ParseRole(std::string_view name);
Group ParseGroup(std::string_view name);
Transform ParseTransform(std::string_view name);

// Maps a raw value to model scale and back.
double ApplyTransform(Transform transform, double value);
double InvertTransform(Transform transform, double value);

struct VariableSpec {
  std::string name;
  Role role = Role::kPredictor;
  Group group = Group::kMisc;
  Transform transform = Transform::kNone;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
};

// Ordered list of broadcast variables. Exactly one variable is the target;
// predictor order defines the feature-matrix column order everywhere.
class FeatureSchema {
 public:
  // Throws kSchema if the invariants do not hold: unique names, exactly one
  // target, target transformed with the natural log, lower <= upper, and
  // log-transformed variables bounded below by a positive value.
  explicit FeatureSchema(std::vector<VariableSpec> variables);

  // The 31-variable broadcast table: 30 predictors plus GMV, with the
  // observed min/max as soft bounds.
  static const FeatureSchema& Default();

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const VariableSpec& target() const { return variables_[target_index_]; }
  const std::string& target_name() const { return target().name; }

  std::size_t num_predictors() const { return predictor_indices_.size(); }
  const VariableSpec& predictor(std::size_t column) const {
    return variables_[predictor_indices_[column]];
  }
  std::vector<std::string> predictor_names() const;

  // Column index in the feature matrix, or nullopt when the name is not a
  // predictor.
  std::optional<std::size_t> PredictorColumn(std::string_view name) const;
  const VariableSpec* Find(std::string_view name) const;

  bool operator==(const FeatureSchema& other) const;

 private:
  std::vector<VariableSpec> variables_;
  std::vector<std::size_t> predictor_indices_;
  std::size_t target_index_ = 0;
};

// Schema file format: {"target": "GMV", "variables": [{"name": ..., "role":
// "predictor", "group": "voice", "transform": "log", "lower_bound": ...,
// "upper_bound": ...}, ...]}.
nlohmann::json SchemaToJson(const FeatureSchema& schema);
FeatureSchema SchemaFromJson(const nlohmann::json& doc);
FeatureSchema LoadSchema(const std::string& path);

}  // namespace gmvx::dataset

#endif  // GMVX_DATASET_SCHEMA_H_
