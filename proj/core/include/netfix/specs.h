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

#ifndef NETFIX_SPECS_H_
#define NETFIX_SPECS_H_

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/forwarding_table.h"
#include "netfix/ip.h"
#include "nlohmann/json.hpp"

namespace netfix {

enum class PredicateKind { kReachability, kIsolation, kWaypoint, kLoadBalancing };

absl::string_view PredicateKindName(PredicateKind kind);

struct Predicate {
  Prefix prefix;
  std::string router;
  PredicateKind kind = PredicateKind::kReachability;
  std::string waypoint;  // kWaypoint only
  int paths = 0;         // kLoadBalancing only

  static Predicate Reachability(std::string r, Prefix p);
  static Predicate Isolation(std::string r, Prefix p);
  static Predicate Waypoint(std::string r, Prefix p, std::string w);
  static Predicate LoadBalancing(std::string r, Prefix p, int n);

  // Canonical text, e.g. "Waypoint(r1,10.1.0.0/24,r2)".
  std::string ToString() const;
  static std::optional<Predicate> Parse(absl::string_view text);

  friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

enum class SpecState { kGolden, kBroken, kFix };

absl::string_view SpecStateName(SpecState s);

struct PredicateSet {
  SpecState state = SpecState::kGolden;
  std::set<Predicate> items;

  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  bool contains(const Predicate& p) const { return items.count(p) > 0; }

  nlohmann::json ToJson() const;
  static absl::StatusOr<PredicateSet> FromJson(const nlohmann::json& doc);
  friend bool operator==(const PredicateSet&, const PredicateSet&) = default;
};

// Routers plus a virtual sink (index = router count) that stands for
// local delivery.
struct ForwardingGraph {
  int sink = 0;
  std::vector<std::vector<int>> out;

  bool HasEdge(int from, int to) const;
};

// Graph for the flow originated at `source_router` (its canonical source
// address picks the ACL verdicts). Pass -1 when no hop filter depends on
// the source.
ForwardingGraph BuildForwardingGraph(const ForwardingTable& table, int prefix,
                                     int source_router = -1);

struct MiningOptions {
  // Drop Waypoint(r, p, w) when w itself accepts p.
  bool suppress_owner_waypoints = false;
};

PredicateSet MinePredicates(const ForwardingTable& table, const MiningOptions& options = {});
PredicateSet MinePrefix(const ForwardingTable& table, int prefix, const MiningOptions& options = {});

// Golden predicates that `other` violates. With `golden_table`, prefixes
// whose forwarding is unchanged are skipped.
PredicateSet DiffViolations(const PredicateSet& golden, const ForwardingTable& other,
                            const ForwardingTable* golden_table = nullptr);

struct ScoreReport {
  PredicateSet violations;
  PredicateSet fixed;
  PredicateSet unfixed;
  PredicateSet regressed;
  double fix_score = 1.0;
  double regression_rate = 0.0;
  bool strictly_correct = true;

  nlohmann::json ToJson() const;
};

// Errors when `violations` is not a subset of `golden`.
absl::StatusOr<ScoreReport> Score(const PredicateSet& golden, const PredicateSet& violations,
                                  const ForwardingTable& fix_table,
                                  const ForwardingTable* golden_table = nullptr);

}  // namespace netfix

#endif  // NETFIX_SPECS_H_
