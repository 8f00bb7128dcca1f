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

#ifndef NETFIX_SAMPLER_H_
#define NETFIX_SAMPLER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "netfix/topo.h"
#include "nlohmann/json.hpp"

namespace netfix {

// Fault kind ids, ordered as in the kind list given to the sampler.
using FaultSet = std::vector<std::string>;

// Whether kinds i and j (indices into the kind list) may share a scenario.
using PairPredicate = std::function<bool(int, int)>;

struct FaultSetCollection {
  std::vector<std::string> kinds;
  std::vector<FaultSet> sets;  // multi-fault sets first, then one monoset per kind
  size_t multi_count = 0;
  std::set<std::pair<int, int>> covered;  // i < j
  size_t feasible_pairs = 0;
  uint64_t seed = 0;

  nlohmann::json ToJson() const;
};

struct GreedyOptions {
  int min_k = 2;
  int max_k = 8;
  bool monosets = true;
};

// Repeatedly draws k and grows a set one kind at a time, each time taking
// the kind that covers the most new pairs against the partial set (ties:
// most uncovered pairs overall, then list order). Stops at full coverage.
absl::StatusOr<FaultSetCollection> PairwiseGreedy(const std::vector<std::string>& kinds,
                                                  const PairPredicate& feasible, uint64_t seed,
                                                  const GreedyOptions& options = {});

// Covered feasible pairs over feasible pairs; 1.0 when there are none.
double Coverage(const std::vector<FaultSet>& sets, const std::vector<std::string>& kinds,
                const PairPredicate& feasible);

struct ScenarioDescriptor {
  std::string id;
  FaultSet faults;
  std::string topology;
  Tier tier = Tier::kSmall;
  uint64_t seed = 0;

  nlohmann::json ToJson() const;
  static absl::StatusOr<ScenarioDescriptor> FromJson(const nlohmann::json& doc);
  friend bool operator==(const ScenarioDescriptor&, const ScenarioDescriptor&) = default;
};

// One descriptor per (set, tier), topology drawn uniformly from the pool.
absl::StatusOr<std::vector<ScenarioDescriptor>> StratifiedInstantiate(
    const FaultSetCollection& collection, const std::map<Tier, std::vector<std::string>>& pools,
    uint64_t seed);

}  // namespace netfix

#endif  // NETFIX_SAMPLER_H_
