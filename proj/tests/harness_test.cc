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
#include "netfix/harness.h"

#include <string>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "netfix/faults.h"
#include "netfix/plan.h"
#include "netfix/simulator.h"
#include "support/test_support.h"

namespace netfix {
namespace {

using ::testing::HasSubstr;

struct Problem {
  ProblemInput input;
  ScenarioTruth truth;
  std::set<std::string> affected;
  ConfigSet golden;
};

Problem MakeProblem() {
  Problem p;
  FeatureSet all(AllFeatures().begin(), AllFeatures().end());
  Topology t = testing::LoadOrDie("data/smoke/Bexley.gml");
  LogicalPlan plan = BuildPlan(t, all, 1).value();
  auto inj = Inject(plan, {ApplicableTargets(plan, "ebgp-wrong-remote-as").at(0)}, 1).value();
  p.golden = Render(plan);
  p.input.topology = t;
  p.input.broken = Render(inj.broken);
  auto golden = ComputeDataplane(ParseConfigs(p.golden).Models(), t, plan.Universe()).value();
  auto broken = ComputeDataplane(ParseConfigs(p.input.broken).Models(), t, plan.Universe()).value();
  p.input.violations = DiffViolations(MinePredicates(golden.table), broken.table);
  p.truth = {inj.faults, inj.diff};
  p.affected = inj.diff.affected_routers;
  p.input.oracle_routers = p.affected;
  return p;
}

const Problem& Fixture() {
  static const Problem* p = new Problem(MakeProblem());
  return *p;
}

TEST(PromptTest, FullContextCarriesEveryFileVerbatim) {
  const Problem& p = Fixture();
  ASSERT_FALSE(p.input.violations.empty());
  auto prompt = BuildPrompt(p.input, kDefaultTokenBudget);
  ASSERT_TRUE(prompt.ok()) << prompt.status();
  for (const auto& [router, text] : p.input.broken) {
    EXPECT_THAT(*prompt, HasSubstr(absl::StrCat("=== ", router, ".cfg ===\n", text)));
  }
  EXPECT_THAT(*prompt, ::testing::Not(HasSubstr(std::string(kElisionSentinel))));
  EXPECT_THAT(*prompt, HasSubstr(p.input.violations.items.begin()->ToString()));
  EXPECT_THAT(*prompt, HasSubstr(TopologyText(p.input.topology)));
}

TEST(PromptTest, OracleCarriesOnlyAffectedFiles) {
  Problem p = Fixture();
  p.input.strategy = ContextStrategy::kOracle;
  ASSERT_EQ(p.affected.size(), 1u);
  EXPECT_EQ(PromptFiles(p.input), std::vector<std::string>(p.affected.begin(), p.affected.end()));
  auto prompt = BuildPrompt(p.input, kDefaultTokenBudget);
  ASSERT_TRUE(prompt.ok());
  int headers = 0;
  for (const auto& [router, text] : p.input.broken) {
    headers += absl::StrContains(*prompt, absl::StrCat("=== ", router, ".cfg ==="));
  }
  EXPECT_EQ(headers, 1);
}

TEST(PromptTest, TightBudgetTruncatesEveryFileFairly) {
  const Problem& p = Fixture();
  auto full = BuildPrompt(p.input, kDefaultTokenBudget).value();
  size_t budget = EstimateTokens(full) * 2 / 3;
  auto prompt = BuildPrompt(p.input, budget);
  ASSERT_TRUE(prompt.ok());
  EXPECT_LE(prompt->size(), budget * kCharsPerToken);
  for (const auto& [router, text] : p.input.broken) {
    EXPECT_THAT(*prompt, HasSubstr(absl::StrCat("=== ", router, ".cfg ===\n")));
  }
  EXPECT_THAT(*prompt, HasSubstr(std::string(kElisionSentinel)));
  size_t cut = full.find("## Configuration files");
  EXPECT_EQ(prompt->substr(0, cut), full.substr(0, cut));
  EXPECT_FALSE(BuildPrompt(p.input, 10).ok());
}

TEST(ParseSolutionTest, WellFormed) {
  std::string reply = absl::StrCat(
      "Some thinking first.\n**LOCALIZATION**\n- r1\n* r2\n\n## DIAGNOSIS\nwrong AS on r1\n",
      "### RECONFIGURATION\nFILE: r1\n<<<<<<< SEARCH\n remote-as 1\n=======\n remote-as 2\n",
      ">>>>>>> REPLACE\n");
  auto parsed = ParseSolution(reply);
  ASSERT_TRUE(std::holds_alternative<Solution>(parsed)) << std::get<ParseFeedback>(parsed).message;
  const Solution& s = std::get<Solution>(parsed);
  EXPECT_THAT(s.faulty_routers, ::testing::ElementsAre("r1", "r2"));
  EXPECT_EQ(s.diagnosis, "wrong AS on r1");
  ASSERT_EQ(s.edits.size(), 1u);
  EXPECT_EQ(s.edits[0].router, "r1");
}

TEST(ParseSolutionTest, Feedback) {
  auto missing = ParseSolution("### LOCALIZATION\nr1\n### DIAGNOSIS\nx\n");
  ASSERT_TRUE(std::holds_alternative<ParseFeedback>(missing));
  EXPECT_THAT(std::get<ParseFeedback>(missing).message, HasSubstr("RECONFIGURATION"));

  auto malformed = ParseSolution(
      "### LOCALIZATION\nr3\n### DIAGNOSIS\nx\n### RECONFIGURATION\nFILE: r3\n<<<<<<< SEARCH\n"
      "a\n=======\nb\n");
  ASSERT_TRUE(std::holds_alternative<ParseFeedback>(malformed));
  EXPECT_EQ(std::get<ParseFeedback>(malformed).message, "malformed edit block in FILE r3");

  auto empty = ParseSolution(NullReply());
  ASSERT_TRUE(std::holds_alternative<ParseFeedback>(empty));
}

TEST(ParseFileListTest, Names) {
  auto parsed = ParseFileList("sure\n### FILES\nr1\n- r2.cfg\n");
  ASSERT_TRUE(std::holds_alternative<std::vector<std::string>>(parsed));
  EXPECT_THAT(std::get<std::vector<std::string>>(parsed), ::testing::ElementsAre("r1", "r2"));
  EXPECT_TRUE(std::holds_alternative<ParseFeedback>(ParseFileList("r1\nr2\n")));
}

TEST(LocalizationTest, F1) {
  Localization half = LocalizationF1({"r1", "r2"}, {"r2", "r3"});
  EXPECT_DOUBLE_EQ(half.precision, 0.5);
  EXPECT_DOUBLE_EQ(half.recall, 0.5);
  EXPECT_DOUBLE_EQ(half.f1, 0.5);
  EXPECT_DOUBLE_EQ(LocalizationF1({"a", "b"}, {"a", "b"}).f1, 1.0);
  EXPECT_DOUBLE_EQ(LocalizationF1({}, {"a"}).f1, 0.0);
}

TEST(SolveTest, PerfectReplyFixesEverything) {
  const Problem& p = Fixture();
  PerfectSolverClient client(p.truth);
  SolveOutcome out = Solve(p.input, p.affected, client);
  ASSERT_TRUE(out.solved);
  EXPECT_EQ(out.retries, 0);
  EXPECT_EQ(out.fixed, p.golden);
  EXPECT_EQ(std::set<std::string>(out.solution->faulty_routers.begin(),
                                  out.solution->faulty_routers.end()),
            p.affected);
  EXPECT_EQ(out.transcript.size(), 2u);
  EXPECT_GT(out.prompt_tokens, 0u);
}

TEST(SolveTest, MalformedThenCorrectRetriesOnce) {
  const Problem& p = Fixture();
  ScriptedModelClient client({"### LOCALIZATION\nr1\n", PerfectReply(p.truth)});
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_TRUE(out.solved);
  EXPECT_EQ(out.retries, 1);
  EXPECT_EQ(client.calls(), 2u);
  ASSERT_EQ(out.feedback.size(), 1u);
  ASSERT_EQ(out.transcript.size(), 4u);
  EXPECT_EQ(out.transcript[2].role, "user");
  EXPECT_EQ(out.transcript[2].content, out.feedback[0]);
  EXPECT_EQ(out.fixed, p.golden);
}

TEST(SolveTest, MalformedTwiceIsUnsolvedWithTranscript) {
  const Problem& p = Fixture();
  ScriptedModelClient client({"nothing useful", "### LOCALIZATION\nstill nothing", "unused"});
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_FALSE(out.solved);
  EXPECT_FALSE(out.errored);
  EXPECT_EQ(out.retries, 1);
  EXPECT_EQ(client.calls(), 2u);
  EXPECT_EQ(out.feedback.size(), 2u);
  EXPECT_EQ(out.transcript.size(), 4u);
  EXPECT_EQ(out.fixed, p.input.broken);
}

TEST(SolveTest, UnmatchedSearchBlockGetsNearestRegion) {
  const Problem& p = Fixture();
  std::string router = *p.affected.begin();
  std::string bad = absl::StrCat("### LOCALIZATION\n", router, "\n### DIAGNOSIS\nx\n",
                                 "### RECONFIGURATION\nFILE: ", router,
                                 "\n<<<<<<< SEARCH\nrouter bgp 1 2 3 4 5 6 7\n=======\n",
                                 "x\n>>>>>>> REPLACE\n");
  ScriptedModelClient client({bad, PerfectReply(p.truth)});
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_TRUE(out.solved);
  EXPECT_EQ(out.retries, 1);
  EXPECT_THAT(out.feedback.at(0), HasSubstr("was not found"));
}

TEST(SolveTest, EndpointErrorIsNotAnAnswer) {
  const Problem& p = Fixture();
  ScriptedModelClient client({});
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_TRUE(out.errored);
  EXPECT_FALSE(out.solved);
}

TEST(SolveTest, NullSolver) {
  const Problem& p = Fixture();
  NullSolverClient client;
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_FALSE(out.solved);
  EXPECT_EQ(out.fixed, p.input.broken);
}

TEST(RetrievalTest, Recall) {
  Problem p = Fixture();
  p.input.strategy = ContextStrategy::kRetrieval;
  std::string all = "### FILES\n";
  for (const auto& [router, text] : p.input.broken) absl::StrAppend(&all, router, "\n");
  {
    ScriptedModelClient client({all, PerfectReply(p.truth)});
    SolveOutcome out = Solve(p.input, p.affected, client);
    EXPECT_EQ(out.retrieval_recall, 1.0);
    EXPECT_EQ(out.retrieved->size(), p.input.broken.size());
    EXPECT_TRUE(out.solved);
  }
  {
    ScriptedModelClient client({"### FILES\n", NullReply(), NullReply()});
    SolveOutcome out = Solve(p.input, p.affected, client);
    EXPECT_EQ(out.retrieval_recall, 0.0);
    EXPECT_TRUE(out.retrieved->empty());
    EXPECT_THAT(out.transcript.at(2).content, ::testing::Not(HasSubstr(".cfg ===")));
  }
}

TEST(RetrievalTest, PartialSelection) {
  Problem p = Fixture();
  p.input.strategy = ContextStrategy::kRetrieval;
  auto it = p.input.broken.begin();
  std::string r1 = (it++)->first, r2 = (it++)->first;
  ScriptedModelClient client({absl::StrCat("### FILES\n", r2, "\nr9\n"), NullReply(), NullReply()});
  SolveOutcome out = Solve(p.input, {r1, r2}, client);
  EXPECT_EQ(out.retrieval_recall, 0.5);
  EXPECT_EQ(*out.retrieved, std::set<std::string>{r2});
  EXPECT_THAT(out.warnings, ::testing::Contains(HasSubstr("'r9'")));
}

TEST(RetrievalTest, UnparseableListFallsBackToFull) {
  Problem p = Fixture();
  p.input.strategy = ContextStrategy::kRetrieval;
  ScriptedModelClient client({"no", "still no", PerfectReply(p.truth)});
  SolveOutcome out = Solve(p.input, p.affected, client);
  EXPECT_FALSE(out.retrieved.has_value());
  EXPECT_TRUE(out.solved);
  EXPECT_EQ(out.retries, 0);
}

class FixedJudge : public ModelClient {
 public:
  FixedJudge(std::string name, std::vector<std::string> replies)
      : name_(std::move(name)), replies_(std::move(replies)) {}
  absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) override {
    last_prompt_ = messages.back().content;
    if (next_ >= replies_.size()) return absl::UnavailableError("no reply");
    return replies_[next_++];
  }
  std::string name() const override { return name_; }
  const std::string& last_prompt() const { return last_prompt_; }

 private:
  std::string name_;
  std::vector<std::string> replies_;
  size_t next_ = 0;
  std::string last_prompt_;
};

TEST(JudgeTest, SingleJudge) {
  const Problem& p = Fixture();
  FixedJudge j("j1", {"SOUNDNESS: 1.0\nCOMPLETENESS: 1.0"});
  auto s = JudgeDiagnosis("wrong remote-as", p.truth, {&j});
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->soundness, 1.0);
  EXPECT_EQ(s->completeness, 1.0);
  EXPECT_THAT(j.last_prompt(), HasSubstr("wrong remote-as"));
  EXPECT_THAT(j.last_prompt(), HasSubstr(p.truth.faults[0].Label()));
}

TEST(JudgeTest, MeanOfTwo) {
  const Problem& p = Fixture();
  FixedJudge a("a", {"SOUNDNESS: 1.0\nCOMPLETENESS: 0.5"});
  FixedJudge b("b", {"soundness: 0.5\ncompleteness: 0.5"});
  auto s = JudgeDiagnosis("x", p.truth, {&a, &b});
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->soundness, 0.75);
  EXPECT_DOUBLE_EQ(s->completeness, 0.5);
  EXPECT_EQ(s->per_judge.size(), 2u);
}

TEST(JudgeTest, EmptyDiagnosis) {
  const Problem& p = Fixture();
  FixedJudge j("j", {"SOUNDNESS: 0\nCOMPLETENESS: 0"});
  auto s = JudgeDiagnosis("", p.truth, {&j});
  ASSERT_TRUE(s.ok());
  EXPECT_EQ(s->soundness, 0.0);
  EXPECT_EQ(s->completeness, 0.0);
}

TEST(JudgeTest, RetryThenDrop) {
  const Problem& p = Fixture();
  FixedJudge late("late", {"dunno", "SOUNDNESS: 0.2\nCOMPLETENESS: 0.4"});
  FixedJudge broken("broken", {"?", "SOUNDNESS: 7\nCOMPLETENESS: 1"});
  auto s = JudgeDiagnosis("x", p.truth, {&late, &broken});
  ASSERT_TRUE(s.ok());
  EXPECT_DOUBLE_EQ(s->soundness, 0.2);
  EXPECT_THAT(s->dropped, ::testing::ElementsAre("broken"));
  FixedJudge silent("silent", {});
  EXPECT_FALSE(JudgeDiagnosis("x", p.truth, {&silent}).ok());
  EXPECT_FALSE(JudgeDiagnosis("x", p.truth, {}).ok());
}

TEST(JudgeTest, ReplyParsing) {
  EXPECT_EQ(ParseJudgeReply("SOUNDNESS: 0.25\nCOMPLETENESS: 1"), std::make_pair(0.25, 1.0));
  EXPECT_FALSE(ParseJudgeReply("SOUNDNESS: 1.5\nCOMPLETENESS: 1").has_value());
  EXPECT_FALSE(ParseJudgeReply("SOUNDNESS: 1").has_value());
}

TEST(ModelConfigTest, JsonAndFactory) {
  auto c = ModelConfig::FromJson(nlohmann::json::parse(
      R"({"kind":"http","base_url":"http://localhost:1/v1","model":"m","temperature":0.2})"));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->model, "m");
  EXPECT_EQ(ModelConfig::FromJson(c->ToJson())->ToJson(), c->ToJson());
  ModelConfig perfect;
  perfect.kind = "perfect";
  auto client = MakeModelClient(perfect, "s001", Fixture().truth);
  ASSERT_TRUE(client.ok());
  EXPECT_EQ((*client)->name(), "perfect");
  ModelConfig bogus;
  bogus.kind = "oracle-of-delphi";
  EXPECT_FALSE(MakeModelClient(bogus, "s001", Fixture().truth).ok());
}

TEST(ContextStrategyTest, Names) {
  for (ContextStrategy s : {ContextStrategy::kFull, ContextStrategy::kOracle,
                            ContextStrategy::kRetrieval}) {
    EXPECT_EQ(ContextStrategyFromName(ContextStrategyName(s)), s);
  }
  EXPECT_EQ(EstimateTokens("abcde"), 2u);
}

}  // namespace
}  // namespace netfix
