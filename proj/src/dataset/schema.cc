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

#include "gmvx/dataset/schema.h"

#include <cmath>
#include <set>
#include <utility>

#include "gmvx/common/csv.h"
#include "gmvx/common/error.h"

namespace gmvx::dataset {

std::string_view RoleName(Role role) {
  return role == Role::kTarget ? "target" : "predictor";
}

std::string_view GroupName(Group group) {
  switch (group) {
    case Group::kPopularity:
      return "popularity";
    case Group::kAppearance:
      return "appearance";
    case Group::kVoice:
      return "voice";
    case Group::kMisc:
      return "misc";
    case Group::kTarget:
      return "target";
  }
  return "misc";
}

std::string_view TransformName(Transform transform) {
  switch (transform) {
    case Transform::kLog:
      return "log";
    case Transform::kLog1p:
      return "log1p";
    case Transform::kNone:
      return "none";
  }
  return "none";
}

Role ParseRole(std::string_view name) {
  if (name == "target") return Role::kTarget;
  if (name == "predictor") return Role::kPredictor;
  Fail(ErrorCode::kSchema, "unknown role '" + std::string(name) + "'");
}

Group ParseGroup(std::string_view name) {
  for (Group g : {Group::kPopularity, Group::kAppearance, Group::kVoice,
                  Group::kMisc, Group::kTarget}) {
    if (GroupName(g) == name) return g;
  }
  Fail(ErrorCode::kSchema, "unknown group '" + std::string(name) + "'");
}

Transform ParseTransform(std::string_view name) {
  for (Transform t : {Transform::kLog, Transform::kLog1p, Transform::kNone}) {
    if (TransformName(t) == name) return t;
  }
  Fail(ErrorCode::kSchema, "unknown transform '" + std::string(name) + "'");
}

double ApplyTransform(Transform transform, double value) {
  switch (transform) {
    case Transform::kLog:
      return std::log(value);
    case Transform::kLog1p:
      return std::log1p(value);
    case Transform::kNone:
      return value;
  }
  return value;
}

double InvertTransform(Transform transform, double value) {
  switch (transform) {
    case Transform::kLog:
      return std::exp(value);
    case Transform::kLog1p:
      return std::expm1(value);
    case Transform::kNone:
      return value;
  }
  return value;
}

FeatureSchema::FeatureSchema(std::vector<VariableSpec> variables)
    : variables_(std::move(variables)) {
  std::set<std::string> names;
  std::size_t targets = 0;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& v = variables_[i];
    if (v.name.empty()) Fail(ErrorCode::kSchema, "variable with empty name");
    if (!names.insert(v.name).second) {
      Fail(ErrorCode::kSchema, "duplicate variable '" + v.name + "'");
    }
    if (!(v.lower_bound <= v.upper_bound)) {
      Fail(ErrorCode::kSchema,
           "variable '" + v.name + "' has lower_bound > upper_bound");
    }
    if (v.transform == Transform::kLog && !(v.lower_bound > 0.0)) {
      Fail(ErrorCode::kSchema, "variable '" + v.name +
                                   "' uses the log transform but its lower "
                                   "bound is not positive");
    }
    if (v.role == Role::kTarget) {
      ++targets;
      target_index_ = i;
      if (v.transform != Transform::kLog) {
        Fail(ErrorCode::kSchema,
             "target '" + v.name + "' must use the log transform");
      }
    } else {
      if (v.group == Group::kTarget) {
        Fail(ErrorCode::kSchema,
             "predictor '" + v.name + "' cannot carry the target group tag");
      }
      predictor_indices_.push_back(i);
    }
  }
  if (targets != 1) {
    Fail(ErrorCode::kSchema, "schema must declare exactly one target, found " +
                                 std::to_string(targets));
  }
  if (predictor_indices_.empty()) {
    Fail(ErrorCode::kSchema, "schema declares no predictors");
  }
}

const FeatureSchema& FeatureSchema::Default() {
  using G = Group;
  using T = Transform;
  static const FeatureSchema* schema = [] {
    auto p = [](const char* name, G group, T transform, double lo, double hi) {
      return VariableSpec{name, Role::kPredictor, group, transform, lo, hi};
    };
    std::vector<VariableSpec> vars = {
        {"GMV", Role::kTarget, G::kTarget, T::kLog, 20, 361000000},
        p("Live_Counts", G::kMisc, T::kNone, 1, 9),
        p("Views", G::kPopularity, T::kLog, 4, 798267),
        p("Likes", G::kPopularity, T::kLog, 6, 3759455),
        p("Comments", G::kPopularity, T::kLog, 2, 58389),
        p("Page_Views", G::kPopularity, T::kLog, 16, 2412945),
        p("Fan_Growth", G::kPopularity, T::kLog1p, 0, 9218),
        p("Wisdom", G::kAppearance, T::kNone, 2, 45),
        p("Distance", G::kAppearance, T::kNone, 29, 36),
        p("Youth", G::kAppearance, T::kNone, 11, 18),
        p("Golden_Triangle", G::kAppearance, T::kNone, 58.20, 80.80),
        p("Num_Pul", G::kVoice, T::kLog, 410, 2052),
        p("Num_P", G::kVoice, T::kLog, 391, 2011),
        p("Mean_P", G::kVoice, T::kNone, 0.003, 0.0078),
        p("SD_P", G::kVoice, T::kNone, 0.00063, 0.0027),
        p("Bw_1", G::kVoice, T::kLog, 8.24, 3522.10),
        p("Bw_2", G::kVoice, T::kLog, 13.98, 1822.55),
        p("Bw_3", G::kVoice, T::kLog, 46.80, 4717.90),
        p("Bw_4", G::kVoice, T::kLog, 68.58, 3968.12),
        p("Mean_I", G::kVoice, T::kNone, 58.55, 77.64),
        p("Min_I", G::kVoice, T::kNone, 29.40, 51.86),
        p("Max_I", G::kVoice, T::kNone, 70.72, 87.18),
        p("Service", G::kMisc, T::kNone, 4.5, 4.9),
        p("Logistics", G::kMisc, T::kNone, 4.5, 4.9),
        p("Activeness", G::kMisc, T::kNone, 0.10, 1.00),
        p("Favorite", G::kMisc, T::kLog, 105, 36500),
        p("Enthusiasm", G::kAppearance, T::kNone, 60, 95),
        p("Elegance", G::kAppearance, T::kNone, 60, 95),
        p("Appearance", G::kAppearance, T::kNone, 60, 95),
        p("Streamers", G::kMisc, T::kNone, 1, 3),
        p("Female", G::kMisc, T::kLog1p, 0.00, 1.00),
    };
    return new FeatureSchema(std::move(vars));
  }();
  return *schema;
}

std::vector<std::string> FeatureSchema::predictor_names() const {
  std::vector<std::string> names;
  names.reserve(predictor_indices_.size());
  for (const auto idx : predictor_indices_) names.push_back(variables_[idx].name);
  return names;
}

std::optional<std::size_t> FeatureSchema::PredictorColumn(
    std::string_view name) const {
  for (std::size_t c = 0; c < predictor_indices_.size(); ++c) {
    if (variables_[predictor_indices_[c]].name == name) return c;
  }
  return std::nullopt;
}

const VariableSpec* FeatureSchema::Find(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
  if (variables_.size() != other.variables_.size()) return false;
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& a = variables_[i];
    const auto& b = other.variables_[i];
    if (a.name != b.name || a.role != b.role || a.group != b.group ||
        a.transform != b.transform || a.lower_bound != b.lower_bound ||
        a.upper_bound != b.upper_bound) {
      return false;
    }
  }
  return true;
}

nlohmann::json SchemaToJson(const FeatureSchema& schema) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : schema.variables()) {
    vars.push_back({{"name", v.name},
                    {"role", RoleName(v.role)},
                    {"group", GroupName(v.group)},
                    {"transform", TransformName(v.transform)},
                    {"lower_bound", v.lower_bound},
                    {"upper_bound", v.upper_bound}});
  }
  return {{"target", schema.target_name()}, {"variables", vars}};
}

FeatureSchema SchemaFromJson(const nlohmann::json& doc) {
  try {
    std::vector<VariableSpec> vars;
    for (const auto& item : doc.at("variables")) {
      VariableSpec v;
      v.name = item.at("name").get<std::string>();
      v.role = ParseRole(item.value("role", std::string("predictor")));
      v.group = ParseGroup(item.value(
          "group", std::string(v.role == Role::kTarget ? "target" : "misc")));
      v.transform = ParseTransform(item.value("transform", std::string("none")));
      v.lower_bound = item.at("lower_bound").get<double>();
      v.upper_bound = item.at("upper_bound").get<double>();
      vars.push_back(std::move(v));
    }
    FeatureSchema schema(std::move(vars));
    if (doc.contains("target") &&
        doc.at("target").get<std::string>() != schema.target_name()) {
      Fail(ErrorCode::kSchema, "declared target '" +
                                   doc.at("target").get<std::string>() +
                                   "' does not match the target variable");
    }
    return schema;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kSchema, std::string("malformed schema: ") + e.what());
  }
}

FeatureSchema LoadSchema(const std::string& path) {
  const std::string text = ReadTextFile(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse,
         "schema file '" + path + "' is not valid JSON: " + e.what());
  }
  return SchemaFromJson(doc);
}

}  // namespace gmvx::dataset
