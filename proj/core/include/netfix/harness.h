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

#ifndef NETFIX_HARNESS_H_
#define NETFIX_HARNESS_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/configtext.h"
#include "netfix/faults.h"
#include "netfix/specs.h"
#include "netfix/topo.h"
#include "nlohmann/json.hpp"

namespace netfix {

inline constexpr absl::string_view kPromptVersion = "netfix-prompt/1";
inline constexpr size_t kCharsPerToken = 4;
inline constexpr size_t kDefaultTokenBudget = 200000;

inline constexpr absl::string_view kLocalizationHeader = "### LOCALIZATION";
inline constexpr absl::string_view kDiagnosisHeader = "### DIAGNOSIS";
inline constexpr absl::string_view kReconfigurationHeader = "### RECONFIGURATION";
inline constexpr absl::string_view kFilesHeader = "### FILES";
// Appended to a configuration file whose tail was cut to fit the budget.
inline constexpr absl::string_view kElisionSentinel = "! [truncated]";

size_t EstimateTokens(absl::string_view text);

enum class ContextStrategy { kFull, kOracle, kRetrieval };
absl::string_view ContextStrategyName(ContextStrategy s);
std::optional<ContextStrategy> ContextStrategyFromName(absl::string_view name);

struct ProblemInput {
  Topology topology;
  ConfigSet broken;
  PredicateSet violations;
  ContextStrategy strategy = ContextStrategy::kFull;
  // Ground-truth affected routers; only the Oracle strategy reads it.
  std::set<std::string> oracle_routers;
};

// One line per router: "r1: r2 (GigabitEthernet0/0 - GigabitEthernet0/1), ...".
std::string TopologyText(const Topology& t);

// Routers whose files the prompt carries. Retrieval uses `selected`.
std::vector<std::string> PromptFiles(const ProblemInput& input,
                                     const std::set<std::string>* selected = nullptr);

absl::StatusOr<std::string> BuildPrompt(const ProblemInput& input, size_t budget_tokens,
                                        const std::set<std::string>* selected = nullptr);

// First stage of the Retrieval strategy: names, topology and violations only.
std::string BuildRetrievalPrompt(const ProblemInput& input);

struct Solution {
  std::vector<std::string> faulty_routers;
  std::string diagnosis;
  EditScript edits;
};

struct ParseFeedback {
  std::string message;
};

std::variant<Solution, ParseFeedback> ParseSolution(absl::string_view text);

// Router names listed under the FILES header, or feedback.
std::variant<std::vector<std::string>, ParseFeedback> ParseFileList(absl::string_view text);

struct Localization {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Localization LocalizationF1(const std::set<std::string>& predicted,
                            const std::set<std::string>& truth);

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) = 0;
  virtual std::string name() const = 0;
};

// {kind, base_url, model, temperature, timeout_s, api_key_env, script_dir}.
// kind is http (default), script, perfect or null.
struct ModelConfig {
  std::string kind = "http";
  std::string base_url;
  std::string model;
  double temperature = 0.0;
  int timeout_s = 120;
  std::string api_key_env;
  std::string script_dir;
  int max_attempts = 3;  // transport attempts per request

  static absl::StatusOr<ModelConfig> FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
};

// Chat-completion endpoint. Accepts OpenAI-style (choices[0].message.content)
// and content-block style (content[0].text) replies.
std::unique_ptr<ModelClient> MakeHttpClient(const ModelConfig& config);

// Returns the replies in order; errors once they run out.
class ScriptedModelClient : public ModelClient {
 public:
  explicit ScriptedModelClient(std::vector<std::string> replies, std::string name = "script");
  absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return name_; }
  size_t calls() const { return next_; }

 private:
  std::vector<std::string> replies_;
  std::string name_;
  size_t next_ = 0;
};

// Reads reply-*.txt (sorted) from `dir`/`scenario` if present, else `dir`.
absl::StatusOr<std::vector<std::string>> LoadScript(const std::string& dir,
                                                    const std::string& scenario);

// What a solver that knows the answer would write.
struct ScenarioTruth {
  std::vector<FaultInstance> faults;
  GroundTruthDiff diff;
};

std::string PerfectReply(const ScenarioTruth& truth);
std::string NullReply();

// Answers from the ground truth; also answers the retrieval stage.
class PerfectSolverClient : public ModelClient {
 public:
  explicit PerfectSolverClient(ScenarioTruth truth) : truth_(std::move(truth)) {}
  absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "perfect"; }

 private:
  ScenarioTruth truth_;
};

// Emits the three headers with nothing under them.
class NullSolverClient : public ModelClient {
 public:
  absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "null"; }
};

// Builds the client for one scenario.
absl::StatusOr<std::unique_ptr<ModelClient>> MakeModelClient(const ModelConfig& config,
                                                             const std::string& scenario_id,
                                                             const ScenarioTruth& truth);

struct SolveOptions {
  size_t budget_tokens = kDefaultTokenBudget;
};

struct SolveOutcome {
  bool solved = false;   // a reply parsed and all its edits applied
  bool errored = false;  // the endpoint failed; not a model answer
  std::string error;
  std::optional<Solution> solution;
  ConfigSet fixed;  // the broken set when unsolved
  int retries = 0;
  std::vector<std::string> feedback;
  std::vector<std::string> warnings;
  std::vector<ChatMessage> transcript;
  std::vector<MatchTier> tiers;
  std::optional<std::set<std::string>> retrieved;
  std::optional<double> retrieval_recall;
  size_t prompt_tokens = 0;
  size_t completion_tokens = 0;
};

// Prompt, reply, parse and apply, with exactly one feedback retry on a
// parse or match failure. The retrieval stage has its own single retry.
SolveOutcome Solve(const ProblemInput& input, const std::set<std::string>& truth_routers,
                   ModelClient& client, const SolveOptions& options = {});

struct JudgeVerdict {
  std::string judge;
  double soundness = 0.0;
  double completeness = 0.0;
};

struct DiagnosisScores {
  double soundness = 0.0;
  double completeness = 0.0;
  std::vector<JudgeVerdict> per_judge;
  std::vector<std::string> dropped;  // judges whose replies never parsed

  nlohmann::json ToJson() const;
};

// "SOUNDNESS: x" and "COMPLETENESS: y", each in [0, 1].
std::optional<std::pair<double, double>> ParseJudgeReply(absl::string_view text);

std::string BuildJudgePrompt(absl::string_view diagnosis, const ScenarioTruth& truth);

// Mean over the judges whose reply parses (one retry each). Errors when
// there are no judges or every judge failed.
absl::StatusOr<DiagnosisScores> JudgeDiagnosis(absl::string_view diagnosis,
                                               const ScenarioTruth& truth,
                                               const std::vector<ModelClient*>& judges);

}  // namespace netfix

#endif  // NETFIX_HARNESS_H_
