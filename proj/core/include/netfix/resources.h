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

#ifndef NETFIX_RESOURCES_H_
#define NETFIX_RESOURCES_H_

#include "absl/status/status.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"

namespace netfix {

// Documents shipped in core/resources, compiled in.
absl::string_view JudgePromptTemplate();
absl::string_view ReportSchemaText();
absl::string_view GrammarDocument();

const nlohmann::json& ReportSchema();

// Checks `instance` against the subset of JSON Schema the shipped schemas
// use: type, required, properties, items, enum, minimum, maximum.
absl::Status ValidateAgainstSchema(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace netfix

#endif  // NETFIX_RESOURCES_H_
