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
#include "netfix/faults.h"

#include <string>

#include "absl/strings/match.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "netfix/configtext.h"
#include "netfix/plan.h"
#include "netfix/simulator.h"
#include "support/test_support.h"

namespace netfix {
namespace {

using ::testing::HasSubstr;

FeatureSet All() { return FeatureSet(AllFeatures().begin(), AllFeatures().end()); }

LogicalPlan TriangleEbgp() {
  return BuildPlan(testing::Triangle(), ResolveDependencies(FeatureSet{Feature::kEbgp}), 1).value();
}

TEST(CatalogTest, TwentySevenKinds) {
  EXPECT_EQ(FaultCatalog().size(), 27u);
  std::set<std::string> ids;
  for (const FaultKind& k : FaultCatalog()) {
    ids.insert(k.id);
    EXPECT_TRUE(IsClosed(ResolveDependencies(k.required_features)));
    EXPECT_EQ(FaultKindIndex(k.id), static_cast<int>(ids.size()) - 1);
  }
  EXPECT_EQ(ids.size(), 27u);
  EXPECT_EQ(FindFaultKind("no-such-fault"), nullptr);
}

TEST(TargetsTest, WrongRemoteAsPerSessionEnd) {
  LogicalPlan plan = TriangleEbgp();
  int ebgp = 0;
  for (const Session& s : plan.sessions) ebgp += s.kind == SessionKind::kEbgp;
  ASSERT_EQ(ebgp, 2);
  EXPECT_EQ(ApplicableTargets(plan, "ebgp-wrong-remote-as").size(), 4u);
}

TEST(TargetsTest, OspfCostPerInterface) {
  auto plan = BuildPlan(testing::Triangle(), ResolveDependencies(FeatureSet{}), 1);
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(ApplicableTargets(*plan, "ospf-extreme-cost").size(), 6u);
}

TEST(TargetsTest, NoReflectorNoSurface) {
  LogicalPlan plan = BuildPlan(testing::LoadOrDie("data/smoke/Bexley.gml"),
                               ResolveDependencies(FeatureSet{Feature::kIbgp}), 1)
                         .value();
  for (const char* kind : {"rr-orphan-clients", "rr-duplicate-cluster-id", "rr-remove-next-hop-self"}) {
    EXPECT_TRUE(ApplicableTargets(plan, kind).empty()) << kind;
  }
}

TEST(InjectTest, WrongRemoteAsEditsOneLine) {
  LogicalPlan plan = TriangleEbgp();
  auto inj = Inject(plan, {ApplicableTargets(plan, "ebgp-wrong-remote-as")[0]}, 3);
  ASSERT_TRUE(inj.ok()) << inj.status();
  EXPECT_EQ(inj->diff.affected_routers.size(), 1u);
  EXPECT_EQ(inj->diff.LinesEdited(), 1);
  ASSERT_EQ(inj->diff.hunks.size(), 1u);
  EXPECT_THAT(inj->diff.hunks[0].after.back(), HasSubstr(std::to_string(kWrongRemoteAs)));
}

TEST(InjectTest, EmptyFaultList) {
  auto inj = Inject(TriangleEbgp(), {}, 1);
  ASSERT_FALSE(inj.ok());
  EXPECT_EQ(inj.status().message(), "no faults");
}

TEST(InjectTest, ConflictingClaimsRejected) {
  LogicalPlan plan = TriangleEbgp();
  FaultInstance f = ApplicableTargets(plan, "ebgp-wrong-remote-as")[0];
  FaultInstance g = ApplicableTargets(plan, "bgp-neighbor-shutdown")[0];
  g.target = f.target;
  std::set<std::string> cf = Claims(plan, f), cg = Claims(plan, g);
  EXPECT_FALSE(cf.empty());
  EXPECT_FALSE(Inject(plan, {f, f}, 1).ok());
}

TEST(InjectTest, DuplicateClusterIdSharesTheId) {
  LogicalPlan plan = BuildPlan(testing::LoadOrDie("data/topologies/Borealis.gml"), All(), 1).value();
  auto targets = ApplicableTargets(plan, "rr-duplicate-cluster-id");
  ASSERT_FALSE(targets.empty());
  auto inj = Inject(plan, {targets[0]}, 1);
  ASSERT_TRUE(inj.ok()) << inj.status();
  std::map<Ipv4, int> ids;
  for (const AsPlan& as : inj->broken.ases) {
    for (const RrCluster& c : as.clusters) ids[c.cluster_id]++;
  }
  EXPECT_TRUE(std::any_of(ids.begin(), ids.end(), [](const auto& e) { return e.second == 2; }));
  EXPECT_EQ(inj->diff.affected_routers.size(), 1u);
}

TEST(InjectTest, EveryKindRoundTripsThroughItsDiff) {
  LogicalPlan plan = BuildPlan(testing::LoadOrDie("data/topologies/Borealis.gml"), All(), 2).value();
  ConfigSet golden = Render(plan);
  for (const FaultKind& k : FaultCatalog()) {
    auto targets = ApplicableTargets(plan, k.id);
    ASSERT_FALSE(targets.empty()) << k.id;
    for (size_t i = 0; i < targets.size() && i < 3; ++i) {
      auto inj = Inject(plan, {targets[i]}, 17 + i);
      ASSERT_TRUE(inj.ok()) << k.id << ": " << inj.status();
      ConfigSet broken = Render(inj->broken);
      EXPECT_NE(broken, golden) << k.id;
      ApplyOutcome fwd = ApplyEdits(golden, inj->diff.Forward());
      ASSERT_TRUE(fwd.ok()) << k.id << ": " << fwd.failure->Message();
      EXPECT_EQ(fwd.configs, broken) << k.id;
      ApplyOutcome back = ApplyEdits(fwd.configs, inj->diff.Backward());
      ASSERT_TRUE(back.ok()) << k.id;
      EXPECT_EQ(back.configs, golden) << k.id;
      for (MatchTier t : back.tiers) EXPECT_EQ(t, MatchTier::kExact);
      auto json_back = GroundTruthDiff::FromJson(inj->diff.ToJson());
      ASSERT_TRUE(json_back.ok());
      EXPECT_EQ(*json_back, inj->diff);
    }
  }
}

TEST(InjectTest, SameSeedSameInjection) {
  LogicalPlan plan = BuildPlan(testing::LoadOrDie("data/smoke/Corfe.gml"), All(), 2).value();
  std::vector<FaultInstance> faults = {ApplicableTargets(plan, "rr-orphan-clients").at(0),
                                       ApplicableTargets(plan, "ospf-extreme-cost").at(0)};
  auto a = Inject(plan, faults, 99);
  auto b = Inject(plan, faults, 99);
  ASSERT_TRUE(a.ok() && b.ok()) << a.status();
  EXPECT_EQ(a->faults, b->faults);
  EXPECT_EQ(a->diff, b->diff);
  for (const FaultInstance& f : a->faults) {
    auto back = FaultInstance::FromJson(f.ToJson());
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back, f);
  }
}

TEST(FeasibilityTest, SymmetricWithFalseDiagonal) {
  LogicalPlan plan = BuildPlan(testing::LoadOrDie("data/topologies/Borealis.gml"), All(), 3).value();
  auto m = FeasiblePairs(plan);
  ASSERT_EQ(m.size(), FaultCatalog().size());
  size_t count = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    EXPECT_FALSE(m[i][i]);
    for (size_t j = 0; j < m.size(); ++j) {
      EXPECT_EQ(m[i][j], m[j][i]);
      count += i < j && m[i][j];
    }
  }
  EXPECT_EQ(count, 27u * 26u / 2u);
}

TEST(TangibilityTest, Basics) {
  ForwardingTable t({"a", "b"}, {testing::P("10.0.0.0/24")}, {Ipv4{}, Ipv4{}});
  t.SetAction(0, 0, {ActionKind::kForward, {1}});
  t.SetAction(0, 1, {ActionKind::kAccept, {}});
  EXPECT_FALSE(ValidateTangibility(t, t));
  ForwardingTable u = t;
  u.SetAction(0, 0, {ActionKind::kDrop, {}});
  EXPECT_TRUE(ValidateTangibility(t, u));
}

TEST(DiffLinesTest, WidensUntilUnique) {
  std::vector<std::string> before = {"!", "a", "!", "b", "!"};
  std::vector<std::string> after = {"!", "a", "!", "!"};
  auto h = DiffLines(before, after);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->removed, 1);
  EXPECT_EQ(h->added, 0);
  EXPECT_FALSE(h->after.empty());
  EXPECT_FALSE(DiffLines(before, before).has_value());
}

}  // namespace
}  // namespace netfix
