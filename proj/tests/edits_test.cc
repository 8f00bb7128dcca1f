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
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "netfix/configtext.h"

namespace netfix {
namespace {

using ::testing::HasSubstr;

const char* kConfig =
    "hostname r1\n"
    "!\n"
    "router bgp 65001\n"
    " neighbor 10.0.0.1 remote-as 65002\n"
    " neighbor 10.0.0.1 route-map RM-IN in\n"
    " neighbor 10.0.0.5 remote-as 65003\n"
    " neighbor 10.0.0.5 route-map RM-IN in\n"
    "!\n"
    "end\n";

ConfigSet Configs() { return {{"r1", kConfig}, {"r2", "hostname r2\n!\nend\n"}}; }

TEST(ApplyEditsTest, ExactUniqueBlock) {
  ApplyOutcome out = ApplyEdits(Configs(), {{"r1", {" neighbor 10.0.0.1 remote-as 65002"},
                                             {" neighbor 10.0.0.1 remote-as 65001"}}});
  ASSERT_TRUE(out.ok()) << out.failure->Message();
  EXPECT_THAT(out.tiers, ::testing::ElementsAre(MatchTier::kExact));
  std::vector<std::string> before = SplitLines(kConfig), after = SplitLines(out.configs.at("r1"));
  ASSERT_EQ(before.size(), after.size());
  int changed = 0;
  for (size_t i = 0; i < before.size(); ++i) changed += before[i] != after[i];
  EXPECT_EQ(changed, 1);
  EXPECT_EQ(out.configs.at("r2"), Configs().at("r2"));
}

TEST(ApplyEditsTest, WhitespaceVariantMatchesAtTierTwo) {
  ApplyOutcome out =
      ApplyEdits(Configs(), {{"r1", {"  neighbor  10.0.0.1   remote-as 65002  "},
                              {" neighbor 10.0.0.1 remote-as 65009"}}});
  ASSERT_TRUE(out.ok());
  EXPECT_THAT(out.tiers, ::testing::ElementsAre(MatchTier::kWhitespace));
  EXPECT_THAT(out.configs.at("r1"), HasSubstr("remote-as 65009"));
}

TEST(ApplyEditsTest, FuzzyWithinThreshold) {
  // One substituted character in a 44-character block.
  ApplyOutcome out = ApplyEdits(
      Configs(), {{"r1", {"router bgp 65001", " neighbor 10.0.0.1 remote-as 65042"},
                   {"router bgp 65001", " neighbor 10.0.0.1 remote-as 65007"}}});
  ASSERT_TRUE(out.ok());
  EXPECT_THAT(out.tiers, ::testing::ElementsAre(MatchTier::kFuzzy));
  EXPECT_THAT(out.configs.at("r1"), HasSubstr("remote-as 65007"));
}

TEST(ApplyEditsTest, FuzzyBeyondThresholdFails) {
  ApplyOutcome out = ApplyEdits(
      Configs(), {{"r1", {"router ospf 1", " network 0.0.0.0 area 51"}, {"router ospf 2"}}});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.failure->reason, "not-found");
  EXPECT_EQ(out.configs, Configs());
}

TEST(ApplyEditsTest, DuplicateBlockIsAmbiguous) {
  ApplyOutcome out =
      ApplyEdits(Configs(), {{"r1", {" neighbor 10.0.0.1 remote-as 65002"}, {}},
                             {"r1", {"!"}, {"! note"}}});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.failure->edit_index, 1u);
  EXPECT_EQ(out.failure->reason, "ambiguous");
  EXPECT_THAT(out.failure->Message(), HasSubstr("more than one region"));
  // The first edit applied before the failure.
  EXPECT_THAT(out.configs.at("r1"), ::testing::Not(HasSubstr("remote-as 65002")));
}

TEST(ApplyEditsTest, UnknownFileFails) {
  ApplyOutcome out = ApplyEdits(Configs(), {{"r9", {"x"}, {"y"}}});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.failure->reason, "not-found");
}

TEST(ApplyEditsTest, EmptyReplaceDeletes) {
  ApplyOutcome out = ApplyEdits(Configs(), {{"r1", {" neighbor 10.0.0.5 remote-as 65003"}, {}}});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(SplitLines(out.configs.at("r1")).size(), SplitLines(kConfig).size() - 1);
}

TEST(EditScriptTest, FormatParseRoundTrip) {
  EditScript script = {{"r1", {"a", " b"}, {"c"}}, {"r2", {"x"}, {}}};
  std::string text = FormatEditScript(script);
  EXPECT_THAT(text, HasSubstr("FILE: r1\n<<<<<<< SEARCH\n"));
  auto parsed = ParseEditScript("prose before\n" + text + "prose after\n");
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_EQ(*parsed, script);
}

TEST(EditScriptTest, MissingReplaceDelimiter) {
  auto parsed = ParseEditScript("FILE: r3\n<<<<<<< SEARCH\nfoo\n=======\nbar\n");
  ASSERT_FALSE(parsed.ok());
  EXPECT_EQ(parsed.status().message(), "malformed edit block in FILE r3");
}

TEST(FuzzyTest, ThresholdAndDistance) {
  EXPECT_EQ(FuzzyThreshold(10), 2u);
  EXPECT_EQ(FuzzyThreshold(40), 2u);
  EXPECT_EQ(FuzzyThreshold(41), 3u);
  EXPECT_EQ(FuzzyThreshold(200), 10u);
  EXPECT_EQ(Levenshtein("kitten", "sitting"), 3u);
  EXPECT_EQ(Levenshtein("", "abc"), 3u);
  EXPECT_EQ(Levenshtein("same", "same"), 0u);
  EXPECT_EQ(NormalizeWhitespace("  a \t b  "), "a b");
}

}  // namespace
}  // namespace netfix
