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
#include "netfix/plan.h"

#include <set>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "netfix/features.h"
#include "support/test_support.h"

namespace netfix {
namespace {

using ::testing::UnorderedElementsAre;

// Iterates the dependency table to a fixpoint.
FeatureSet Closure(FeatureSet s) {
  s.insert(BaselineFeatures().begin(), BaselineFeatures().end());
  bool grew = true;
  while (grew) {
    grew = false;
    for (Feature f : FeatureSet(s)) {
      for (Feature d : FeatureDependencies().at(f)) grew |= s.insert(d).second;
    }
  }
  return s;
}

FeatureSet Resolve(const std::vector<std::string>& names) {
  return ResolveDependencies(names).value();
}

TEST(FeaturesTest, ClosureExamples) {
  EXPECT_THAT(FeatureNames(Resolve({"route-reflection"})),
              UnorderedElementsAre("route-reflection", "ibgp", "ospf", "ebgp",
                                   "network-statements"));
  EXPECT_THAT(FeatureNames(Resolve({})), UnorderedElementsAre("ospf", "network-statements"));
  EXPECT_THAT(FeatureNames(Resolve({"acl-in"})),
              UnorderedElementsAre("acl-in", "ospf", "network-statements"));
}

TEST(FeaturesTest, EverySingletonMatchesFixpoint) {
  for (Feature f : AllFeatures()) {
    FeatureSet got = ResolveDependencies(FeatureSet{f});
    EXPECT_EQ(got, Closure({f})) << FeatureName(f);
    EXPECT_TRUE(IsClosed(got));
  }
  EXPECT_EQ(ResolveDependencies(FeatureSet(AllFeatures().begin(), AllFeatures().end())).size(),
            AllFeatures().size());
}

TEST(FeaturesTest, UnknownName) {
  EXPECT_FALSE(ResolveDependencies(std::vector<std::string>{"mpls"}).ok());
  for (Feature f : AllFeatures()) EXPECT_EQ(FeatureFromName(FeatureName(f)), f);
}

bool Connected(const Topology& t, const std::vector<std::string>& members) {
  std::set<std::string> in(members.begin(), members.end()), seen = {members.front()};
  std::vector<std::string> stack = {members.front()};
  while (!stack.empty()) {
    std::string r = stack.back();
    stack.pop_back();
    for (const std::string& n : t.Neighbors(r)) {
      if (in.count(n) && seen.insert(n).second) stack.push_back(n);
    }
  }
  return seen.size() == members.size();
}

TEST(PartitionTest, TriangleWithEbgpSplitsTwoOne) {
  Topology t = testing::Triangle();
  auto parts = PartitionAses(t, Resolve({"ebgp"}), 7);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].size(), 2u);
  EXPECT_EQ(parts[1].size(), 1u);
  for (const auto& p : parts) EXPECT_TRUE(Connected(t, p));
  EXPECT_EQ(parts, PartitionAses(t, Resolve({"ebgp"}), 7));
}

TEST(PartitionTest, NoEbgpMeansOneAs) {
  auto parts = PartitionAses(testing::PathTopology(4), Resolve({}), 1);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].size(), 4u);
}

TEST(PartitionTest, SamplesYieldConnectedAses) {
  for (const char* f : {"data/smoke/Ashby.gml", "data/smoke/Corfe.gml",
                        "data/topologies/Cascadia.gml"}) {
    Topology t = testing::LoadOrDie(f);
    FeatureSet all(AllFeatures().begin(), AllFeatures().end());
    auto parts = PartitionAses(t, all, 3);
    size_t total = 0;
    for (const auto& p : parts) {
      EXPECT_TRUE(Connected(t, p)) << f;
      total += p.size();
    }
    EXPECT_EQ(total, t.size());
    EXPECT_GE(parts.size(), 2u);
  }
}

TEST(PlanTest, TriangleBaseline) {
  auto plan = BuildPlan(testing::Triangle(), Resolve({}), 1);
  ASSERT_TRUE(plan.ok()) << plan.status();
  EXPECT_TRUE(ValidatePlan(*plan).ok());
  ASSERT_EQ(plan->ases.size(), 1u);
  EXPECT_FALSE(plan->ases[0].hierarchical);
  std::set<Prefix> subnets;
  for (const auto& [link, subnet] : plan->link_subnets) {
    EXPECT_EQ(subnet.length, 31);
    subnets.insert(subnet);
  }
  EXPECT_EQ(subnets.size(), 3u);
  std::set<Ipv4> loopbacks;
  for (const auto& [name, r] : plan->routers) {
    loopbacks.insert(r.loopback());
    EXPECT_TRUE(r.ospf);
    EXPECT_FALSE(r.bgp);
    for (const LinkInterface& i : r.interfaces) EXPECT_EQ(i.ospf_area, 0u);
  }
  EXPECT_EQ(loopbacks.size(), 3u);
}

Topology Ladder8() {
  std::vector<std::string> routers;
  std::vector<Link> links;
  for (int i = 0; i < 8; ++i) routers.push_back("n" + std::to_string(i));
  int ifid[8] = {};
  auto add = [&](int a, int b) {
    links.push_back({{routers[a], ifid[a]++}, {routers[b], ifid[b]++}});
  };
  for (int i = 0; i < 8; ++i) add(i, (i + 1) % 8);
  add(0, 4);
  add(2, 6);
  return Topology::Create("ladder", routers, links).value();
}

TEST(PlanTest, RouteReflectionBuildsACluster) {
  auto plan = BuildPlan(Ladder8(), Resolve({"route-reflection"}), 3);
  ASSERT_TRUE(plan.ok()) << plan.status();
  EXPECT_TRUE(ValidatePlan(*plan).ok());
  bool found = false;
  for (const AsPlan& as : plan->ases) {
    for (const RrCluster& c : as.clusters) found |= c.clients.size() >= 2;
  }
  EXPECT_TRUE(found);
}

TEST(PlanTest, InfeasibleFeatureIsReported) {
  auto plan = BuildPlan(testing::Triangle(), Resolve({"route-reflection"}), 1);
  ASSERT_FALSE(plan.ok());
  EXPECT_EQ(plan.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(PlanTest, UnclosedFeatureSetRejected) {
  EXPECT_FALSE(BuildPlan(testing::Triangle(), {Feature::kIbgp}, 1).ok());
}

TEST(PlanTest, SameSeedSameBytes) {
  Topology t = testing::LoadOrDie("data/smoke/Bexley.gml");
  FeatureSet all(AllFeatures().begin(), AllFeatures().end());
  auto a = BuildPlan(t, all, 11);
  auto b = BuildPlan(t, all, 11);
  ASSERT_TRUE(a.ok() && b.ok()) << a.status();
  EXPECT_EQ(a->ToJson().dump(), b->ToJson().dump());
  EXPECT_TRUE(ValidatePlan(*a).ok());
}

TEST(PlanTest, EveryFeatureCombinationOnSamplesValidates) {
  FeatureSet all(AllFeatures().begin(), AllFeatures().end());
  for (const char* f : {"data/smoke/Ashby.gml", "data/smoke/Bexley.gml", "data/smoke/Corfe.gml",
                        "data/topologies/Arcadia.gml", "data/topologies/Borealis.gml"}) {
    Topology t = testing::LoadOrDie(f);
    for (uint64_t seed : {1, 2, 3}) {
      auto plan = BuildPlan(t, all, seed);
      ASSERT_TRUE(plan.ok()) << f << ": " << plan.status();
      EXPECT_TRUE(ValidatePlan(*plan).ok()) << f;
    }
  }
}

}  // namespace
}  // namespace netfix
