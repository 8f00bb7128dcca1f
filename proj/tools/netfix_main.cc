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

// netfix: generate misconfiguration datasets and evaluate repair systems.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "netfix/faults.h"
#include "netfix/harness.h"
#include "netfix/orchestrator.h"
#include "netfix/resources.h"

namespace {

using nlohmann::json;

absl::StatusOr<json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) return absl::InvalidArgumentError(path + " is not JSON");
  return doc;
}

absl::StatusOr<std::vector<netfix::ModelConfig>> ReadJudges(const std::string& path) {
  auto doc = ReadJsonFile(path);
  if (!doc.ok()) return doc.status();
  std::vector<netfix::ModelConfig> out;
  const json list = doc->is_array() ? *doc : doc->value("judges", json::array());
  for (const json& j : list) {
    auto c = netfix::ModelConfig::FromJson(j);
    if (!c.ok()) return c.status();
    out.push_back(*std::move(c));
  }
  return out;
}

int Fail(const absl::Status& s) {
  std::cerr << "netfix: " << s.message() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network misconfiguration benchmark: dataset generation and evaluation"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a scenario dataset");
  std::string topologies, out;
  uint64_t seed = netfix::kDefaultDatasetSeed;
  bool no_stratify = false;
  int gen_parallel = 1;
  size_t limit = 0;
  gen->add_option("--topologies", topologies, "Directory of .gml/.json topologies")->required();
  gen->add_option("--out", out, "Output dataset directory (must be empty)")->required();
  gen->add_option("--seed", seed, "Dataset seed");
  gen->add_flag("--no-stratify", no_stratify, "Let empty tiers draw from the whole pool");
  gen->add_option("--parallel", gen_parallel, "Worker threads");
  gen->add_option("--limit", limit, "Keep only the first N scenarios");

  auto* run = app.add_subcommand("run", "Evaluate a model on a dataset");
  std::string dataset, model_config, strategy = "full", run_out, judges_file;
  int run_parallel = 1;
  size_t budget = netfix::kDefaultTokenBudget;
  run->add_option("--dataset", dataset, "Dataset directory")->required();
  run->add_option("--model-config", model_config, "Model config JSON")->required();
  run->add_option("--strategy", strategy, "full | oracle | retrieval")
      ->check(CLI::IsMember({"full", "oracle", "retrieval"}));
  run->add_option("--parallel", run_parallel, "Concurrent scenarios");
  run->add_option("--budget", budget, "Prompt token budget");
  run->add_option("--out", run_out, "Report directory (default: the dataset)");
  run->add_option("--judges", judges_file, "Judge model configs (JSON list)");

  auto* score = app.add_subcommand("score", "Score externally produced fixed configs");
  std::string scenario_dir, fix_dir;
  score->add_option("--scenario", scenario_dir, "Scenario directory")->required();
  score->add_option("--fix", fix_dir, "Directory of <router>.cfg files")->required();

  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  std::string stats_dataset;
  stats->add_option("--dataset", stats_dataset, "Dataset directory")->required();

  auto* judge = app.add_subcommand("judge", "Score the diagnoses in a report");
  std::string report_path, judge_list;
  judge->add_option("--report", report_path, "report.json")->required();
  judge->add_option("--judges", judge_list, "Judge model configs (JSON list)")->required();

  auto* catalog = app.add_subcommand("catalog", "Print the fault catalog");
  auto* grammar = app.add_subcommand("grammar", "Print the configuration grammar");

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    netfix::GenerateOptions options;
    options.seed = seed;
    options.stratify = !no_stratify;
    options.parallelism = gen_parallel;
    if (limit > 0) options.limit = limit;
    auto m = netfix::CmdGenerate(topologies, out, options);
    if (!m.ok()) return Fail(m.status());
    std::cout << "generated " << m->scenarios.size() << " scenarios (" << m->collection.multi_count
              << " multi-fault sets, " << m->collection.sets.size() - m->collection.multi_count
              << " monosets, " << m->collection.feasible_pairs << " feasible pairs)";
    if (!m->failures.empty()) std::cout << ", " << m->failures.size() << " failed";
    std::cout << "\n";
    for (const auto& f : m->failures) std::cout << "  failed " << f.descriptor.id << ": " << f.reason << "\n";
    return 0;
  }
  if (*run) {
    auto doc = ReadJsonFile(model_config);
    if (!doc.ok()) return Fail(doc.status());
    auto config = netfix::ModelConfig::FromJson(*doc);
    if (!config.ok()) return Fail(config.status());
    netfix::RunOptions options;
    options.strategy = *netfix::ContextStrategyFromName(strategy);
    options.parallelism = run_parallel;
    options.budget_tokens = budget;
    options.out_dir = run_out;
    if (!judges_file.empty()) {
      auto judges = ReadJudges(judges_file);
      if (!judges.ok()) return Fail(judges.status());
      options.judges = *std::move(judges);
    }
    auto report = netfix::CmdRun(dataset, *config, options);
    if (!report.ok()) return Fail(report.status());
    std::cout << json{{"attempted", report->attempted},
                      {"errored", report->errored},
                      {"mean_fix_score", report->mean_fix_score},
                      {"mean_regression_rate", report->mean_regression_rate},
                      {"mean_f1", report->mean_f1},
                      {"strict_success_rate", report->strict_success_rate}}
                     .dump(2)
              << "\n";
    return 0;
  }
  if (*score) {
    auto r = netfix::CmdScore(scenario_dir, fix_dir);
    if (!r.ok()) return Fail(r.status());
    std::cout << r->ToJson().dump(2) << "\n";
    return 0;
  }
  if (*stats) {
    auto s = netfix::CmdStats(stats_dataset);
    if (!s.ok()) return Fail(s.status());
    std::cout << s->dump(2) << "\n";
    return 0;
  }
  if (*judge) {
    auto judges = ReadJudges(judge_list);
    if (!judges.ok()) return Fail(judges.status());
    auto r = netfix::CmdJudge(report_path, *judges);
    if (!r.ok()) return Fail(r.status());
    std::cout << (*r)["aggregate"].dump(2) << "\n";
    return 0;
  }
  if (*catalog) {
    std::cout << netfix::CatalogJson().dump(2) << "\n";
    return 0;
  }
  if (*grammar) {
    std::cout << netfix::GrammarDocument();
    return 0;
  }
  return 0;
}
