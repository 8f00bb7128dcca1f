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

#ifndef NETFIX_ORCHESTRATOR_H_
#define NETFIX_ORCHESTRATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "netfix/configtext.h"
#include "netfix/faults.h"
#include "netfix/forwarding_table.h"
#include "netfix/harness.h"
#include "netfix/plan.h"
#include "netfix/sampler.h"
#include "netfix/specs.h"
#include "netfix/topo.h"
#include "nlohmann/json.hpp"

namespace netfix {

inline constexpr int kDatasetVersion = 1;
inline constexpr int kReportVersion = 1;
// With the full catalog this seed makes the pairwise sampler emit 50
// multi-fault sets.
inline constexpr uint64_t kDefaultDatasetSeed = 22;
// Fields holding wall-clock values; determinism checks ignore them.
inline constexpr const char* kTimestampField = "generated_at";

struct TopologyPool {
  std::map<std::string, Topology> topologies;
  std::map<Tier, std::vector<std::string>> tiers;  // sorted names
};

// Loads every *.gml and *.json file in `dir`.
absl::StatusOr<TopologyPool> LoadTopologyPool(const std::string& dir);

struct Scenario {
  ScenarioDescriptor descriptor;
  FeatureSet features;
  uint64_t plan_seed = 0;
  int attempts = 0;  // binding draws used
  LogicalPlan plan;
  ConfigSet golden;
  ConfigSet broken;
  Injection injection;
  ForwardingTable golden_table;
  PredicateSet spec;
  PredicateSet violations;
  size_t golden_routes = 0;
  size_t routes_changed = 0;

  nlohmann::json Metadata() const;
};

struct GenerateOptions {
  uint64_t seed = kDefaultDatasetSeed;
  // Tiers with no topology borrow the whole pool instead of failing.
  bool stratify = true;
  // Tangibility resamples after the first draw.
  int max_resamples = 5;
  // Keep only the first N scenario descriptors.
  std::optional<size_t> limit;
  int parallelism = 1;
  MiningOptions mining;
};

// One scenario from a descriptor: plan, render, inject, simulate, mine, diff.
absl::StatusOr<Scenario> GenerateScenario(const ScenarioDescriptor& descriptor,
                                          const Topology& topology, const GenerateOptions& options);

absl::Status WriteScenario(const Scenario& s, const std::string& dir);

struct GenerationFailure {
  ScenarioDescriptor descriptor;
  std::string reason;
};

struct DatasetManifest {
  uint64_t seed = 0;
  FaultSetCollection collection;
  std::map<Tier, std::vector<std::string>> pools;
  std::vector<ScenarioDescriptor> scenarios;  // generated, in order
  std::vector<GenerationFailure> failures;
  std::string generated_at;

  nlohmann::json ToJson() const;
  static absl::StatusOr<DatasetManifest> FromJson(const nlohmann::json& doc);
};

// Samples fault sets and scenario descriptors for `pool`.
absl::StatusOr<std::pair<FaultSetCollection, std::vector<ScenarioDescriptor>>> PlanDataset(
    const TopologyPool& pool, const GenerateOptions& options);

// Generates and writes a dataset under `out_dir` (manifest.json plus
// scenarios/<id>/...).
absl::StatusOr<DatasetManifest> CmdGenerate(const std::string& topology_dir,
                                            const std::string& out_dir,
                                            const GenerateOptions& options);

absl::StatusOr<DatasetManifest> LoadManifest(const std::string& dataset_dir);

// Everything a scorer or solver reads back from a scenario directory.
struct LoadedScenario {
  std::string id;
  Topology topology;
  ConfigSet golden;
  ConfigSet broken;
  std::vector<FaultInstance> faults;
  GroundTruthDiff diff;
  PredicateSet spec;
  PredicateSet violations;
  ForwardingTable golden_table;
  nlohmann::json metadata;
};

absl::StatusOr<LoadedScenario> LoadScenario(const std::string& scenario_dir);

// Simulates `fixed` over the golden universe and scores it.
absl::StatusOr<ScoreReport> ScoreConfigs(const LoadedScenario& s, const ConfigSet& fixed);

// Files missing from `fix_dir` are taken from the broken set.
absl::StatusOr<ScoreReport> CmdScore(const std::string& scenario_dir, const std::string& fix_dir);

struct RunOptions {
  ContextStrategy strategy = ContextStrategy::kFull;
  int parallelism = 1;
  size_t budget_tokens = kDefaultTokenBudget;
  // Where report.json and transcripts/ go; defaults to the dataset dir.
  std::string out_dir;
  // Judges scoring each diagnosis; none means diagnosis scores are omitted.
  std::vector<ModelConfig> judges;
};

struct ScenarioResult {
  std::string id;
  std::string status;  // solved | unsolved | errored
  std::string error;
  ScoreReport score;
  Localization localization;
  std::set<std::string> predicted;
  std::set<std::string> truth;
  std::optional<double> retrieval_recall;
  std::string diagnosis;
  std::optional<DiagnosisScores> diagnosis_scores;
  std::string diagnosis_omitted;
  int retries = 0;
  std::vector<std::string> feedback;
  std::vector<std::string> warnings;
  std::vector<MatchTier> tiers;
  std::string prompt_path;
  std::string transcript_path;
  double wall_time_s = 0.0;
  size_t prompt_tokens = 0;
  size_t completion_tokens = 0;

  nlohmann::json ToJson() const;
};

struct EvaluationReport {
  std::string dataset;
  std::string model;
  ContextStrategy strategy = ContextStrategy::kFull;
  size_t budget_tokens = kDefaultTokenBudget;
  std::vector<ScenarioResult> scenarios;
  size_t attempted = 0;
  size_t errored = 0;
  double mean_fix_score = 0.0;
  double mean_regression_rate = 0.0;
  double mean_f1 = 0.0;
  double strict_success_rate = 0.0;
  std::optional<double> mean_soundness;
  std::optional<double> mean_completeness;

  // Recomputes the aggregates over non-errored scenarios.
  void Aggregate();
  nlohmann::json ToJson() const;
};

// Solves and scores one scenario.
ScenarioResult RunScenario(const LoadedScenario& s, const ModelConfig& model,
                           const RunOptions& options);

absl::StatusOr<EvaluationReport> CmdRun(const std::string& dataset_dir, const ModelConfig& model,
                                        const RunOptions& options);

// Adds diagnosis scores to a written report and rewrites it.
absl::StatusOr<nlohmann::json> CmdJudge(const std::string& report_path,
                                        const std::vector<ModelConfig>& judges);

// Per-scenario size and impact statistics plus mean and max per column.
absl::StatusOr<nlohmann::json> CmdStats(const std::string& dataset_dir);

// Relative path -> bytes for every file under `dir`, with timestamp fields
// blanked in JSON documents.
absl::StatusOr<std::map<std::string, std::string>> SnapshotTree(const std::string& dir);

}  // namespace netfix

#endif  // NETFIX_ORCHESTRATOR_H_
