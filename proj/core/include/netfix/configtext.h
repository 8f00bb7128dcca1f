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

#ifndef NETFIX_CONFIGTEXT_H_
#define NETFIX_CONFIGTEXT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "netfix/device_model.h"
#include "absl/strings/string_view.h"

namespace netfix {

struct LogicalPlan;

// Grammar revision emitted by RenderDevice and accepted by ParseDevice.
inline constexpr absl::string_view kGrammarVersion = "ios-lite/1";

// router name -> configuration text.
using ConfigSet = std::map<std::string, std::string>;

std::string RenderDevice(const DeviceModel& model);
ConfigSet RenderDevices(const std::map<std::string, DeviceModel>& models);
// Renders DeviceView(plan).
ConfigSet Render(const LogicalPlan& plan);

struct DanglingReference {
  std::string kind;     // route-map | prefix-list | access-list | interface
  std::string name;
  std::string context;  // where the reference appears

  friend bool operator==(const DanglingReference&, const DanglingReference&) = default;
};

struct ParsedDevice {
  DeviceModel model;
  std::vector<std::string> warnings;
  std::vector<DanglingReference> dangling;
};

// Fails only on structurally corrupt text (e.g. missing `end`).
absl::StatusOr<ParsedDevice> ParseDevice(absl::string_view text);

struct ParsedConfigs {
  std::map<std::string, ParsedDevice> devices;
  // Routers whose text could not be parsed. Their entry in `devices` holds
  // an empty model carrying only the hostname.
  std::map<std::string, std::string> errors;

  std::map<std::string, DeviceModel> Models() const;
};

ParsedConfigs ParseConfigs(const ConfigSet& configs);

std::vector<std::string> SplitLines(absl::string_view text);
std::string JoinLines(const std::vector<std::string>& lines);

// One search/replace block against a router's file.
struct Edit {
  std::string router;
  std::vector<std::string> search;
  std::vector<std::string> replace;

  friend bool operator==(const Edit&, const Edit&) = default;
};

using EditScript = std::vector<Edit>;

// FILE: <router> / <<<<<<< SEARCH / ... / ======= / ... / >>>>>>> REPLACE
std::string FormatEditScript(const EditScript& script);
// Parses every block in `text`; text outside blocks is ignored.
absl::StatusOr<EditScript> ParseEditScript(absl::string_view text);

enum class MatchTier { kExact = 1, kWhitespace = 2, kFuzzy = 3 };

struct MatchFailure {
  std::string router;
  size_t edit_index = 0;
  std::string reason;   // not-found | ambiguous
  std::string nearest;  // closest candidate region in the file, if any

  std::string Message() const;
};

struct ApplyOutcome {
  ConfigSet configs;
  std::optional<MatchFailure> failure;
  // Tier used by each applied edit, in order.
  std::vector<MatchTier> tiers;

  bool ok() const { return !failure.has_value(); }
};

// Edits apply top to bottom; the first failing edit stops application and
// `configs` holds the state before it.
ApplyOutcome ApplyEdits(const ConfigSet& configs, const EditScript& script);

// Fuzzy acceptance bound for a search block of `chars` characters.
size_t FuzzyThreshold(size_t chars);

size_t Levenshtein(absl::string_view a, absl::string_view b);

// Collapses runs of blanks to one space and strips both ends.
std::string NormalizeWhitespace(absl::string_view line);

}  // namespace netfix

#endif  // NETFIX_CONFIGTEXT_H_
