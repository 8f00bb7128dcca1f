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

#include "netfix/sampler.h"

#include <algorithm>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "netfix/rng.h"

namespace netfix {
namespace {

using nlohmann::json;

std::pair<int, int> Ordered(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

absl::StatusOr<FaultSetCollection> PairwiseGreedy(const std::vector<std::string>& kinds,
                                                  const PairPredicate& feasible, uint64_t seed,
                                                  const GreedyOptions& options) {
  int n = static_cast<int>(kinds.size());
  if (n < 2) return absl::InvalidArgumentError("pairwise sampling needs at least two kinds");
  if (options.min_k < 2 || options.max_k < options.min_k) {
    return absl::InvalidArgumentError("set sizes must satisfy 2 <= min_k <= max_k");
  }
  std::set<std::pair<int, int>> uncovered;
  for (int i = 0; i < n; ++i) {
    bool partner = false;
    for (int j = 0; j < n; ++j) {
      if (i != j && feasible(i, j)) partner = true;
      if (i < j && feasible(i, j)) uncovered.insert({i, j});
    }
    if (!partner) {
      return absl::FailedPreconditionError(
          absl::StrCat("fault kind '", kinds[i], "' is feasible with no other kind"));
    }
  }

  FaultSetCollection out;
  out.kinds = kinds;
  out.seed = seed;
  out.feasible_pairs = uncovered.size();
  Rng rng(DeriveSeed(seed, "pairwise"));
  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : uncovered) {
    ++degree[a];
    ++degree[b];
  }
  while (!uncovered.empty()) {
    int k = std::uniform_int_distribution<int>(options.min_k, options.max_k)(rng);
    std::vector<int> chosen;
    std::vector<bool> in(n, false);
    while (static_cast<int>(chosen.size()) < std::min(k, n)) {
      int best = -1, best_gain = -1, best_degree = -1;
      for (int c = 0; c < n; ++c) {
        if (in[c]) continue;
        bool compatible = std::all_of(chosen.begin(), chosen.end(),
                                      [&](int x) { return feasible(x, c); });
        if (!compatible) continue;
        int gain = 0;
        for (int x : chosen) gain += uncovered.count(Ordered(x, c)) ? 1 : 0;
        if (gain > best_gain || (gain == best_gain && degree[c] > best_degree)) {
          best = c;
          best_gain = gain;
          best_degree = degree[c];
        }
      }
      if (best < 0) break;
      chosen.push_back(best);
      in[best] = true;
    }
    size_t before = uncovered.size();
    for (size_t i = 0; i < chosen.size(); ++i) {
      for (size_t j = i + 1; j < chosen.size(); ++j) {
        auto p = Ordered(chosen[i], chosen[j]);
        if (uncovered.erase(p)) {
          --degree[p.first];
          --degree[p.second];
          out.covered.insert(p);
        }
      }
    }
    if (uncovered.size() == before) continue;  // nothing new; redraw k
    std::sort(chosen.begin(), chosen.end());
    FaultSet set;
    for (int c : chosen) set.push_back(kinds[c]);
    out.sets.push_back(std::move(set));
  }
  out.multi_count = out.sets.size();
  if (options.monosets) {
    for (const std::string& k : kinds) out.sets.push_back({k});
  }
  return out;
}

double Coverage(const std::vector<FaultSet>& sets, const std::vector<std::string>& kinds,
                const PairPredicate& feasible) {
  int n = static_cast<int>(kinds.size());
  std::map<std::string, int> index;
  for (int i = 0; i < n; ++i) index[kinds[i]] = i;
  size_t total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) total += feasible(i, j) ? 1 : 0;
  }
  if (total == 0) return 1.0;
  std::set<std::pair<int, int>> covered;
  for (const FaultSet& s : sets) {
    for (size_t a = 0; a < s.size(); ++a) {
      for (size_t b = a + 1; b < s.size(); ++b) {
        auto ia = index.find(s[a]);
        auto ib = index.find(s[b]);
        if (ia == index.end() || ib == index.end() || ia->second == ib->second) continue;
        auto p = Ordered(ia->second, ib->second);
        if (feasible(p.first, p.second)) covered.insert(p);
      }
    }
  }
  return static_cast<double>(covered.size()) / total;
}

json FaultSetCollection::ToJson() const {
  json pairs = json::array();
  for (const auto& [a, b] : covered) pairs.push_back({kinds[a], kinds[b]});
  return {{"seed", seed},
          {"kinds", kinds},
          {"sets", sets},
          {"multi_fault_sets", multi_count},
          {"monosets", sets.size() - multi_count},
          {"feasible_pairs", feasible_pairs},
          {"covered_pairs", covered.size()}};
}

json ScenarioDescriptor::ToJson() const {
  return {{"id", id},
          {"faults", faults},
          {"topology", topology},
          {"tier", std::string(TierName(tier))},
          {"seed", seed}};
}

absl::StatusOr<ScenarioDescriptor> ScenarioDescriptor::FromJson(const json& doc) {
  ScenarioDescriptor d;
  try {
    d.id = doc.at("id").get<std::string>();
    d.faults = doc.at("faults").get<FaultSet>();
    d.topology = doc.at("topology").get<std::string>();
    auto tier = TierFromName(doc.at("tier").get<std::string>());
    if (!tier) return absl::InvalidArgumentError("unknown tier in scenario descriptor");
    d.tier = *tier;
    d.seed = doc.at("seed").get<uint64_t>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad scenario descriptor: ", e.what()));
  }
  return d;
}

absl::StatusOr<std::vector<ScenarioDescriptor>> StratifiedInstantiate(
    const FaultSetCollection& collection, const std::map<Tier, std::vector<std::string>>& pools,
    uint64_t seed) {
  const Tier tiers[] = {Tier::kSmall, Tier::kMedium, Tier::kLarge};
  for (Tier t : tiers) {
    auto it = pools.find(t);
    if (it == pools.end() || it->second.empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("empty topology pool for tier ", TierName(t)));
    }
  }
  Rng rng(DeriveSeed(seed, "stratify"));
  std::vector<ScenarioDescriptor> out;
  for (size_t s = 0; s < collection.sets.size(); ++s) {
    for (Tier t : tiers) {
      std::vector<std::string> pool = pools.at(t);
      std::sort(pool.begin(), pool.end());
      ScenarioDescriptor d;
      d.faults = collection.sets[s];
      d.topology = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
      d.tier = t;
      d.seed = DeriveSeed(seed, "scenario", out.size());
      d.id = absl::StrFormat("s%03d-%s", s + 1, TierName(t));
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace netfix
