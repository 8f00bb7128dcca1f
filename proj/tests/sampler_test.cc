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
#include <chrono>
#include <functional>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace netfix {
namespace {

std::vector<std::string> Kinds(int n) {
  std::vector<std::string> k;
  for (int i = 0; i < n; ++i) k.push_back("k" + std::to_string(100 + i));
  return k;
}

bool AllFeasible(int, int) { return true; }

// Smallest number of k-subsets of n items covering every pair.
int OptimalCover(int n, int k) {
  std::vector<unsigned> subsets;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (__builtin_popcount(m) == k) subsets.push_back(m);
  }
  std::set<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) all.insert({i, j});
  }
  for (int size = 1;; ++size) {
    std::vector<int> pick(size, 0);
    std::function<bool(int, int)> rec = [&](int depth, int from) {
      if (depth == size) {
        std::set<std::pair<int, int>> covered;
        for (int s : pick) {
          for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
              if ((subsets[s] >> i & 1) && (subsets[s] >> j & 1)) covered.insert({i, j});
            }
          }
        }
        return covered == all;
      }
      for (int s = from; s < static_cast<int>(subsets.size()); ++s) {
        pick[depth] = s;
        if (rec(depth + 1, s + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return size;
  }
}

TEST(PairwiseGreedyTest, FourKindsTriples) {
  std::vector<std::string> kinds = {"a", "b", "c", "d"};
  auto c = PairwiseGreedy(kinds, AllFeasible, 1, {.min_k = 3, .max_k = 3, .monosets = false});
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->multi_count, c->sets.size());
  EXPECT_EQ(static_cast<int>(c->multi_count), OptimalCover(4, 3));
  EXPECT_EQ(c->sets[0], (FaultSet{"a", "b", "c"}));
  EXPECT_THAT(c->sets[1], ::testing::Contains("d"));
  EXPECT_EQ(Coverage(c->sets, kinds, AllFeasible), 1.0);
  EXPECT_EQ(c->covered.size(), 6u);
}

TEST(PairwiseGreedyTest, TwoKinds) {
  auto c = PairwiseGreedy({"a", "b"}, AllFeasible, 5, {.monosets = false});
  ASSERT_TRUE(c.ok());
  ASSERT_EQ(c->sets.size(), 1u);
  EXPECT_EQ(c->sets[0], (FaultSet{"a", "b"}));
  EXPECT_EQ(Coverage(c->sets, {"a", "b"}, AllFeasible), 1.0);
}

TEST(PairwiseGreedyTest, FullCatalogSizeWithinBudget) {
  std::vector<std::string> kinds = Kinds(27);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto start = std::chrono::steady_clock::now();
    auto c = PairwiseGreedy(kinds, AllFeasible, seed);
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ASSERT_TRUE(c.ok());
    EXPECT_LE(c->multi_count, 60u) << seed;
    EXPECT_LT(secs, 1.0);
    EXPECT_EQ(c->sets.size(), c->multi_count + 27);
    EXPECT_EQ(c->covered.size(), 351u);
    EXPECT_EQ(Coverage(c->sets, kinds, AllFeasible), 1.0);
    for (size_t i = 0; i < c->multi_count; ++i) {
      EXPECT_GE(c->sets[i].size(), 2u);
      EXPECT_LE(c->sets[i].size(), 8u);
    }
  }
}

TEST(PairwiseGreedyTest, RespectsFeasibility) {
  std::vector<std::string> kinds = Kinds(12);
  // Kinds of equal parity never share a set.
  auto feasible = [](int i, int j) { return (i + j) % 2 == 1; };
  auto c = PairwiseGreedy(kinds, feasible, 3);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->feasible_pairs, 36u);
  EXPECT_EQ(Coverage(c->sets, kinds, feasible), 1.0);
  for (size_t s = 0; s < c->multi_count; ++s) {
    const FaultSet& set = c->sets[s];
    for (size_t a = 0; a < set.size(); ++a) {
      for (size_t b = a + 1; b < set.size(); ++b) {
        int i = std::find(kinds.begin(), kinds.end(), set[a]) - kinds.begin();
        int j = std::find(kinds.begin(), kinds.end(), set[b]) - kinds.begin();
        EXPECT_TRUE(feasible(i, j));
      }
    }
  }
}

TEST(PairwiseGreedyTest, Errors) {
  EXPECT_FALSE(PairwiseGreedy({"a"}, AllFeasible, 1).ok());
  auto lonely = [](int i, int j) { return i != 2 && j != 2; };
  auto c = PairwiseGreedy({"a", "b", "c"}, lonely, 1);
  ASSERT_FALSE(c.ok());
  EXPECT_THAT(std::string(c.status().message()), ::testing::HasSubstr("'c'"));
}

TEST(PairwiseGreedyTest, Deterministic) {
  auto a = PairwiseGreedy(Kinds(27), AllFeasible, 22);
  auto b = PairwiseGreedy(Kinds(27), AllFeasible, 22);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->sets, b->sets);
  EXPECT_EQ(a->ToJson(), b->ToJson());
}

TEST(CoverageTest, Fractions) {
  EXPECT_DOUBLE_EQ(Coverage({{"a", "b"}}, {"a", "b", "c"}, AllFeasible), 1.0 / 3.0);
  EXPECT_EQ(Coverage({}, {"a", "b", "c"}, AllFeasible), 0.0);
  EXPECT_EQ(Coverage({}, {"a", "b"}, [](int, int) { return false; }), 1.0);
}

std::map<Tier, std::vector<std::string>> Pools() {
  return {{Tier::kSmall, {"s2", "s1"}}, {Tier::kMedium, {"m1"}}, {Tier::kLarge, {"l1", "l2"}}};
}

TEST(StratifyTest, OneDescriptorPerSetAndTier) {
  FaultSetCollection c;
  c.kinds = {"a", "b"};
  c.sets = {{"a", "b"}};
  c.multi_count = 1;
  auto d = StratifiedInstantiate(
      c, {{Tier::kSmall, {"s"}}, {Tier::kMedium, {"m"}}, {Tier::kLarge, {"l"}}}, 1);
  ASSERT_TRUE(d.ok());
  ASSERT_EQ(d->size(), 3u);
  EXPECT_EQ((*d)[0].topology, "s");
  EXPECT_EQ((*d)[1].tier, Tier::kMedium);
  EXPECT_EQ((*d)[2].id, "s001-large");
}

TEST(StratifyTest, FullCollection) {
  auto c = PairwiseGreedy(Kinds(27), AllFeasible, 22);
  ASSERT_TRUE(c.ok());
  auto d = StratifiedInstantiate(*c, Pools(), 4);
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d->size(), 3 * (c->multi_count + 27));
  std::set<std::string> ids, seen_small;
  std::set<uint64_t> seeds;
  for (const ScenarioDescriptor& s : *d) {
    ids.insert(s.id);
    seeds.insert(s.seed);
    if (s.tier == Tier::kSmall) seen_small.insert(s.topology);
    auto back = ScenarioDescriptor::FromJson(s.ToJson());
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, s);
  }
  EXPECT_EQ(ids.size(), d->size());
  EXPECT_EQ(seeds.size(), d->size());
  EXPECT_EQ(seen_small, (std::set<std::string>{"s1", "s2"}));
  EXPECT_EQ(*d, *StratifiedInstantiate(*c, Pools(), 4));
}

TEST(StratifyTest, EmptyTierFails) {
  FaultSetCollection c;
  c.kinds = {"a", "b"};
  c.sets = {{"a", "b"}};
  c.multi_count = 1;
  auto d = StratifiedInstantiate(c, {{Tier::kSmall, {"s"}}, {Tier::kMedium, {"m"}}}, 1);
  ASSERT_FALSE(d.ok());
  EXPECT_THAT(std::string(d.status().message()), ::testing::HasSubstr("large"));
}

}  // namespace
}  // namespace netfix
