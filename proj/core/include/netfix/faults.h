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

#ifndef NETFIX_FAULTS_H_
#define NETFIX_FAULTS_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/configtext.h"
#include "netfix/features.h"
#include "netfix/forwarding_table.h"
#include "netfix/plan.h"
#include "nlohmann/json.hpp"

namespace netfix {

enum class FaultClass {
  kBgp,
  kOspf,
  kIsis,
  kAddressing,
  kDevice,
  kPolicy,
  kRedistribution,
  kSecurity
};

absl::string_view FaultClassName(FaultClass c);

struct FaultKind {
  std::string id;
  FaultClass protocol_class;
  FeatureSet required_features;
  std::string summary;
  std::string expected_effect;
};

// The catalog, in a fixed order that also defines each kind's index.
const std::vector<FaultKind>& FaultCatalog();
const FaultKind* FindFaultKind(absl::string_view id);
int FaultKindIndex(absl::string_view id);  // -1 if unknown
nlohmann::json CatalogJson();

// Parameters values extreme enough to be unambiguous in a diff.
inline constexpr uint32_t kExtremeOspfCost = 65535;
inline constexpr uint32_t kLoweredLocalPref = 50;
inline constexpr uint32_t kWrongRemoteAs = 64512;
inline constexpr uint32_t kWrongLocalAs = 64513;
inline constexpr int kMaxOrphanedClients = 4;

struct FaultInstance {
  std::string kind;
  // Canonical reference to the plan element, e.g. "bgp-neighbor:r1:r2" or
  // "iface:r3:2". Two instances with overlapping claims conflict.
  std::string target;
  // Binding-derived and drawn values, filled in by Inject.
  std::map<std::string, std::string> params;

  std::string Label() const { return kind + "@" + target; }
  nlohmann::json ToJson() const;
  static absl::StatusOr<FaultInstance> FromJson(const nlohmann::json& doc);
  friend bool operator==(const FaultInstance&, const FaultInstance&) = default;
};

// Every binding of `kind` whose injection changes the rendered text.
std::vector<FaultInstance> ApplicableTargets(const LogicalPlan& plan, absl::string_view kind);

// Plan elements an instance writes to. Used for conflict detection.
std::set<std::string> Claims(const LogicalPlan& plan, const FaultInstance& fault);

// feasible[i][j] holds when catalog kinds i and j have bindings on `reference`
// with disjoint claims. The diagonal is false.
std::vector<std::vector<bool>> FeasiblePairs(const LogicalPlan& reference);

struct DiffHunk {
  std::string router;
  std::string fault;  // FaultInstance::Label()
  int line = 0;       // 1-based first line of `before` in the pre-fault text
  std::vector<std::string> before;
  std::vector<std::string> after;
  int removed = 0;  // changed lines, context excluded
  int added = 0;

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

struct GroundTruthDiff {
  std::vector<DiffHunk> hunks;  // in application order
  std::set<std::string> affected_routers;

  int LinesEdited() const;
  // Golden -> broken. Each search block is unique in the text it applies to.
  EditScript Forward() const;
  // Broken -> golden.
  EditScript Backward() const;
  nlohmann::json ToJson() const;
  static absl::StatusOr<GroundTruthDiff> FromJson(const nlohmann::json& doc);
  friend bool operator==(const GroundTruthDiff&, const GroundTruthDiff&) = default;
};

// Smallest hunk turning `before` into `after`, widened with context until
// both blocks are non-empty and occur once in their file.
std::optional<DiffHunk> DiffLines(const std::vector<std::string>& before,
                                  const std::vector<std::string>& after);

struct Injection {
  LogicalPlan broken;
  std::vector<FaultInstance> faults;  // with parameters
  GroundTruthDiff diff;
};

absl::StatusOr<Injection> Inject(const LogicalPlan& plan, const std::vector<FaultInstance>& faults,
                                 uint64_t seed);

// True iff some prefix is forwarded differently (actions or hop verdicts).
bool ValidateTangibility(const ForwardingTable& golden, const ForwardingTable& broken);

}  // namespace netfix

#endif  // NETFIX_FAULTS_H_
