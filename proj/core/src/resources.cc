// Copyright 2026 The netfix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "netfix/resources.h"

#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace netfix {
namespace resources {
extern const absl::string_view kJudgePrompt;
extern const absl::string_view kReportSchema;
extern const absl::string_view kGrammar;
}  // namespace resources

namespace {

using nlohmann::json;

bool HasType(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

absl::Status Check(const json& v, const json& schema, const std::string& path) {
  if (auto t = schema.find("type"); t != schema.end()) {
    bool ok = false;
    if (t->is_array()) {
      for (const json& one : *t) ok = ok || HasType(v, one.get<std::string>());
    } else {
      ok = HasType(v, t->get<std::string>());
    }
    if (!ok) return absl::InvalidArgumentError(absl::StrCat(path, ": expected ", t->dump()));
  }
  if (auto e = schema.find("enum"); e != schema.end()) {
    bool found = false;
    for (const json& x : *e) found = found || x == v;
    if (!found) return absl::InvalidArgumentError(absl::StrCat(path, ": value not in enum"));
  }
  if (v.is_number()) {
    double x = v.get<double>();
    if (auto m = schema.find("minimum"); m != schema.end() && x < m->get<double>()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": below minimum"));
    }
    if (auto m = schema.find("maximum"); m != schema.end() && x > m->get<double>()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": above maximum"));
    }
  }
  if (v.is_object()) {
    if (auto r = schema.find("required"); r != schema.end()) {
      for (const json& key : *r) {
        if (!v.contains(key.get<std::string>())) {
          return absl::InvalidArgumentError(
              absl::StrCat(path, ": missing required '", key.get<std::string>(), "'"));
        }
      }
    }
    if (auto props = schema.find("properties"); props != schema.end()) {
      for (const auto& [key, sub] : props->items()) {
        if (auto it = v.find(key); it != v.end()) {
          if (absl::Status s = Check(*it, sub, absl::StrCat(path, ".", key)); !s.ok()) return s;
        }
      }
    }
  }
  if (v.is_array()) {
    if (auto items = schema.find("items"); items != schema.end()) {
      for (size_t i = 0; i < v.size(); ++i) {
        if (absl::Status s = Check(v[i], *items, absl::StrCat(path, "[", i, "]")); !s.ok()) {
          return s;
        }
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::string_view JudgePromptTemplate() { return resources::kJudgePrompt; }
absl::string_view ReportSchemaText() { return resources::kReportSchema; }
absl::string_view GrammarDocument() { return resources::kGrammar; }

const json& ReportSchema() {
  static const json* schema = new json(json::parse(std::string(ReportSchemaText())));
  return *schema;
}

absl::Status ValidateAgainstSchema(const json& instance, const json& schema) {
  return Check(instance, schema, "$");
}

}  // namespace netfix
