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
#include "netfix/configtext.h"

#include <fstream>
#include <iterator>
#include <string>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "netfix/faults.h"
#include "netfix/plan.h"
#include "netfix/simulator.h"
#include "support/test_support.h"

namespace netfix {
namespace {

using ::testing::HasSubstr;

FeatureSet All() { return FeatureSet(AllFeatures().begin(), AllFeatures().end()); }

int Count(absl::string_view text, absl::string_view needle) {
  int n = 0;
  for (size_t pos = text.find(needle); pos != absl::string_view::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

TEST(RenderTest, SingleRouterHasOneLoopbackStanza) {
  Topology t = Topology::Create("one", {"solo"}, {}).value();
  auto plan = BuildPlan(t, ResolveDependencies(FeatureSet{}), 1);
  ASSERT_TRUE(plan.ok()) << plan.status();
  ConfigSet cfg = Render(*plan);
  ASSERT_EQ(cfg.size(), 1u);
  const std::string& text = cfg.at("solo");
  EXPECT_EQ(Count(text, "interface Loopback0\n"), 1);
  EXPECT_THAT(text, HasSubstr(" ip address " + plan->routers.at("solo").loopback().ToString() +
                              " 255.255.255.255\n"));
  EXPECT_THAT(text, HasSubstr("hostname solo\n"));
  EXPECT_TRUE(absl::EndsWith(text, "end\n"));
}

TEST(RenderTest, TriangleSnapshot) {
  auto plan = BuildPlan(testing::Triangle(), ResolveDependencies(FeatureSet{}), 1);
  ASSERT_TRUE(plan.ok());
  ConfigSet cfg = Render(*plan);
  for (const auto& [router, text] : cfg) {
    std::ifstream in(testing::SourcePath("tests/data/triangle-seed1/" + router + ".cfg"));
    ASSERT_TRUE(in.good()) << router;
    std::string pinned((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(text, pinned) << router;
  }
}

TEST(RenderTest, WrongRemoteAsChangesOneToken) {
  auto plan = BuildPlan(testing::Triangle(), ResolveDependencies(FeatureSet{Feature::kEbgp}), 1);
  ASSERT_TRUE(plan.ok());
  auto targets = ApplicableTargets(*plan, "ebgp-wrong-remote-as");
  ASSERT_FALSE(targets.empty());
  auto inj = Inject(*plan, {targets[0]}, 5);
  ASSERT_TRUE(inj.ok()) << inj.status();
  ConfigSet before = Render(*plan), after = Render(inj->broken);
  int changed_lines = 0;
  for (const auto& [router, text] : before) {
    std::vector<std::string> a = SplitLines(text), b = SplitLines(after.at(router));
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == b[i]) continue;
      ++changed_lines;
      std::vector<std::string> ta = absl::StrSplit(a[i], ' '), tb = absl::StrSplit(b[i], ' ');
      ASSERT_EQ(ta.size(), tb.size());
      int tokens = 0;
      for (size_t k = 0; k < ta.size(); ++k) tokens += ta[k] != tb[k];
      EXPECT_EQ(tokens, 1) << a[i] << " / " << b[i];
      EXPECT_THAT(b[i], HasSubstr("remote-as"));
    }
  }
  EXPECT_EQ(changed_lines, 1);
}

TEST(ParseTest, RoundTripOnSamplePlans) {
  for (const char* f : {"data/smoke/Ashby.gml", "data/smoke/Corfe.gml",
                        "data/topologies/Borealis.gml"}) {
    auto plan = BuildPlan(testing::LoadOrDie(f), All(), 4);
    ASSERT_TRUE(plan.ok()) << plan.status();
    auto view = DeviceView(*plan);
    for (const auto& [router, text] : Render(*plan)) {
      auto parsed = ParseDevice(text);
      ASSERT_TRUE(parsed.ok()) << parsed.status();
      EXPECT_TRUE(parsed->warnings.empty()) << router << ": " << parsed->warnings[0];
      EXPECT_TRUE(parsed->dangling.empty()) << router;
      EXPECT_EQ(parsed->model, view.at(router)) << router;
      EXPECT_EQ(RenderDevice(parsed->model), text) << router;
    }
  }
}

TEST(ParseTest, UnknownLineWarnsOnly) {
  auto plan = BuildPlan(testing::Triangle(), ResolveDependencies(FeatureSet{}), 1);
  std::string text = Render(*plan).at("a");
  std::string with_banner = absl::StrReplaceAll(text, {{"hostname a\n", "hostname a\nbanner motd hello\n"}});
  auto clean = ParseDevice(text);
  auto noisy = ParseDevice(with_banner);
  ASSERT_TRUE(clean.ok() && noisy.ok());
  EXPECT_EQ(noisy->model, clean->model);
  EXPECT_EQ(noisy->warnings.size(), 1u);
}

TEST(ParseTest, MissingEndIsAnError) {
  EXPECT_FALSE(ParseDevice("hostname x\ninterface Loopback0\n").ok());
}

TEST(ParseTest, DanglingRouteMapActsAsPermitAll) {
  Topology t = testing::Triangle();
  auto plan = BuildPlan(t, ResolveDependencies(FeatureSet{Feature::kEbgp}), 1);
  ASSERT_TRUE(plan.ok());
  ConfigSet cfg = Render(*plan);
  const Session& s = plan->sessions.at(0);
  std::string line = absl::StrCat(" neighbor ", s.a.neighbor_address.ToString(), " remote-as ",
                                  s.a.remote_as, "\n");
  ConfigSet dangling = cfg;
  std::string& text = dangling.at(s.a.router);
  ASSERT_THAT(text, HasSubstr(line));
  text = absl::StrReplaceAll(
      text, {{line, absl::StrCat(line, " neighbor ", s.a.neighbor_address.ToString(),
                                 " route-map NOPE in\n")}});
  ParsedConfigs parsed = ParseConfigs(dangling);
  ASSERT_TRUE(parsed.errors.empty());
  const ParsedDevice& dev = parsed.devices.at(s.a.router);
  ASSERT_EQ(dev.dangling.size(), 1u);
  EXPECT_EQ(dev.dangling[0].kind, "route-map");
  EXPECT_EQ(dev.dangling[0].name, "NOPE");
  EXPECT_EQ(dev.model.bgp->FindNeighbor(s.a.neighbor_address)->route_map_in, "NOPE");

  auto base = ComputeDataplane(ParseConfigs(cfg).Models(), t, plan->Universe());
  auto with = ComputeDataplane(parsed.Models(), t, plan->Universe());
  ASSERT_TRUE(base.ok() && with.ok());
  EXPECT_EQ(base->table, with->table);
}

}  // namespace
}  // namespace netfix
