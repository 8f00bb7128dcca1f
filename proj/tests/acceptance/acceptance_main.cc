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
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "netfix/configtext.h"
#include "netfix/faults.h"
#include "netfix/harness.h"
#include "netfix/orchestrator.h"
#include "netfix/plan.h"
#include "netfix/sampler.h"
#include "netfix/simulator.h"
#include "netfix/specs.h"
#include "support/test_support.h"

namespace netfix {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / absl::StrCat("netfix-acceptance-", getpid()) / name;
  fs::remove_all(p);
  return p.string();
}

// 1. Pairwise greedy over the full catalog with every pair feasible.
Outcome Greedy() {
  std::vector<std::string> kinds;
  for (const FaultKind& k : FaultCatalog()) kinds.push_back(k.id);
  auto all = [](int, int) { return true; };
  auto start = Clock::now();
  auto c = PairwiseGreedy(kinds, all, kDefaultDatasetSeed);
  double secs = Seconds(start);
  if (!c.ok()) return {false, std::string(c.status().message())};
  std::vector<FaultSet> multi(c->sets.begin(), c->sets.begin() + c->multi_count);
  double coverage = Coverage(multi, kinds, all);
  size_t n = kinds.size();
  return {coverage == 1.0 && c->covered.size() == n * (n - 1) / 2 && c->multi_count <= 60 &&
              secs < 1.0,
          absl::StrCat(c->multi_count, " multi-sets, coverage ", coverage, ", ", secs, " s")};
}

struct GenerationRun {
  size_t descriptors = 0;
  size_t multi_count = 0;
  size_t generated = 0;
  std::vector<std::string> failures;
  std::vector<std::string> unsound;
  std::string error;
};

// Generates the full default dataset in memory; feeds criteria 2 and 6.
GenerationRun GenerateAll() {
  GenerationRun run;
  auto pool = LoadTopologyPool(testing::SourcePath("data/topologies"));
  if (!pool.ok()) {
    run.error = std::string(pool.status().message());
    return run;
  }
  GenerateOptions options;
  auto planned = PlanDataset(*pool, options);
  if (!planned.ok()) {
    run.error = std::string(planned.status().message());
    return run;
  }
  run.multi_count = planned->first.multi_count;
  run.descriptors = planned->second.size();
  for (const ScenarioDescriptor& d : planned->second) {
    auto s = GenerateScenario(d, pool->topologies.at(d.topology), options);
    if (!s.ok()) {
      run.failures.push_back(absl::StrCat(d.id, " [", absl::StrJoin(d.faults, ","), "] on ",
                                          d.topology, ": ", s.status().message()));
      continue;
    }
    ++run.generated;
    if (!DiffViolations(s->spec, s->golden_table).empty() || s->violations.empty()) {
      run.unsound.push_back(d.id);
    }
  }
  return run;
}

Outcome ScenarioCount(const GenerationRun& run) {
  if (!run.error.empty()) return {false, run.error};
  size_t expected = 3 * (run.multi_count + FaultCatalog().size());
  std::string detail =
      absl::StrCat(run.descriptors, " descriptors (3 x (", run.multi_count, " + ",
                   FaultCatalog().size(), ")), ", run.generated, " generated, ",
                   run.failures.size(), " failed");
  for (const std::string& f : run.failures) absl::StrAppend(&detail, "\n    failed: ", f);
  return {run.multi_count == 50 && run.descriptors == 231 && run.descriptors == expected &&
              run.generated + run.failures.size() == run.descriptors,
          detail};
}

Outcome Soundness(const GenerationRun& run) {
  if (!run.error.empty()) return {false, run.error};
  return {run.generated > 0 && run.unsound.empty(),
          absl::StrCat(run.generated, " scenarios checked, ", run.unsound.size(), " unsound",
                       run.unsound.empty() ? "" : ": " + absl::StrJoin(run.unsound, ","))};
}

// 3. The worked forwarding example.
Outcome WorkedExample() {
  auto r = ComputeDataplane(testing::WorkedExampleModels(), testing::WorkedExampleTopology(),
                            {testing::WorkedExamplePrefix()});
  if (!r.ok()) return {false, std::string(r.status().message())};
  bool rows = r->table.Rows(testing::WorkedExamplePrefix(), true) == testing::WorkedExampleRows();
  bool parity =
      MinePredicates(r->table, {.suppress_owner_waypoints = true}).items ==
      testing::WorkedExamplePredicates();
  std::set<Predicate> full = testing::WorkedExamplePredicates();
  for (const Predicate& p : testing::WorkedExampleOwnerWaypoints()) full.insert(p);
  bool owners = MinePredicates(r->table).items == full;
  return {rows && parity && owners,
          absl::StrCat("rows ", rows ? "match" : "differ", ", parity predicates ",
                       parity ? "match" : "differ", ", owner waypoints ",
                       owners ? "match" : "differ")};
}

// 4. Fix and regression scores on every (f, u, r) in {0..10}^3 but zero.
Outcome ScoreGrid() {
  int checked = 0, wrong = 0;
  for (int f = 0; f <= 10; ++f) {
    for (int u = 0; u <= 10; ++u) {
      for (int g = 0; g <= 10; ++g) {
        if (f + u + g == 0) continue;
        ++checked;
        testing::ScoreFixture fx = testing::MakeScoreFixture(f, u, g);
        auto s = Score(fx.golden, fx.violations, fx.fix_table);
        int n = f + u + g;
        // Compare as reduced fractions: fix * n must equal f exactly.
        bool ok = s.ok() && static_cast<int>(s->fixed.size()) == f &&
                  static_cast<int>(s->unfixed.size()) == u &&
                  static_cast<int>(s->regressed.size()) == g &&
                  s->fix_score == static_cast<double>(f / std::gcd(f, n)) / (n / std::gcd(f, n)) &&
                  s->regression_rate ==
                      static_cast<double>(g / std::gcd(g, n)) / (n / std::gcd(g, n));
        if (!ok) ++wrong;
      }
    }
  }
  return {checked == 1330 && wrong == 0, absl::StrCat(checked, " triples, ", wrong, " wrong")};
}

// 5. Mining against path enumeration.
Outcome MiningOracle() {
  int mismatches = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    ForwardingTable t = testing::RandomDigraphTable(seed, 8);
    if (MinePredicates(t).items != testing::BruteForceMine(t).items) ++mismatches;
  }
  return {mismatches == 0, absl::StrCat("100 digraphs, ", mismatches, " mismatches")};
}

struct Smoke {
  std::string dir;
  std::string error;
  double generate_s = 0.0;
};

Smoke GenerateSmoke(const std::string& name) {
  Smoke s;
  s.dir = Scratch(name);
  GenerateOptions o;
  o.stratify = false;
  o.limit = 30;
  auto start = Clock::now();
  auto m = CmdGenerate(testing::SourcePath("data/smoke"), s.dir, o);
  s.generate_s = Seconds(start);
  if (!m.ok()) s.error = std::string(m.status().message());
  return s;
}

// 7. Perfect and null solvers end to end.
Outcome EndToEnd(const Smoke& smoke) {
  if (!smoke.error.empty()) return {false, smoke.error};
  auto manifest = LoadManifest(smoke.dir);
  if (!manifest.ok()) return {false, std::string(manifest.status().message())};
  size_t max_nodes = 0;
  for (const ScenarioDescriptor& d : manifest->scenarios) {
    auto s = LoadScenario((fs::path(smoke.dir) / "scenarios" / d.id).string());
    if (!s.ok()) return {false, std::string(s.status().message())};
    max_nodes = std::max(max_nodes, s->topology.size());
  }
  auto start = Clock::now();
  ModelConfig perfect;
  perfect.kind = "perfect";
  RunOptions o;
  o.out_dir = Scratch("run-perfect");
  auto p = CmdRun(smoke.dir, perfect, o);
  ModelConfig null;
  null.kind = "null";
  o.out_dir = Scratch("run-null");
  auto n = CmdRun(smoke.dir, null, o);
  double secs = smoke.generate_s + Seconds(start);
  if (!p.ok()) return {false, std::string(p.status().message())};
  if (!n.ok()) return {false, std::string(n.status().message())};
  return {manifest->scenarios.size() == 30 && max_nodes <= 20 && p->errored == 0 &&
              p->mean_fix_score == 1.0 && p->mean_regression_rate == 0.0 && p->mean_f1 == 1.0 &&
              n->mean_fix_score == 0.0 && secs < 60.0,
          absl::StrCat(manifest->scenarios.size(), " scenarios, max ", max_nodes,
                       " nodes; perfect fix ", p->mean_fix_score, " regression ",
                       p->mean_regression_rate, " F1 ", p->mean_f1, "; null fix ",
                       n->mean_fix_score, "; ", secs, " s")};
}

std::string Spaced(const std::string& line) {
  return absl::StrCat("  ", absl::StrReplaceAll(line, {{" ", "  "}}), " ");
}

// 8. Whitespace and fuzzy matching, ambiguity, and the single retry.
Outcome PatchRobustness(const Smoke& smoke) {
  if (!smoke.error.empty()) return {false, smoke.error};
  auto manifest = LoadManifest(smoke.dir);
  if (!manifest.ok()) return {false, std::string(manifest.status().message())};
  auto s = LoadScenario(
      (fs::path(smoke.dir) / "scenarios" / manifest->scenarios.at(0).id).string());
  if (!s.ok()) return {false, std::string(s.status().message())};

  EditScript spaced = s->diff.Backward();
  for (Edit& e : spaced) {
    for (std::string& l : e.search) l = Spaced(l);
  }
  ApplyOutcome ws = ApplyEdits(s->broken, spaced);
  bool whitespace = ws.ok() && ws.configs == s->golden &&
                    std::all_of(ws.tiers.begin(), ws.tiers.end(),
                                [](MatchTier t) { return t == MatchTier::kWhitespace; });

  // One substituted character in the longest search line of the first edit.
  EditScript typo = s->diff.Backward();
  typo.resize(1);
  auto longest = std::max_element(
      typo[0].search.begin(), typo[0].search.end(),
      [](const std::string& a, const std::string& b) { return a.size() < b.size(); });
  bool fuzzy = false;
  if (longest != typo[0].search.end() && longest->size() > 4) {
    char& c = (*longest)[longest->size() - 2];
    c = c == 'q' ? 'z' : 'q';
    ApplyOutcome fz = ApplyEdits(s->broken, typo);
    ApplyOutcome exact = ApplyEdits(s->broken, {s->diff.Backward().front()});
    fuzzy = fz.ok() && fz.tiers == std::vector<MatchTier>{MatchTier::kFuzzy} &&
            fz.configs == exact.configs;
  }

  std::string router = s->broken.begin()->first;
  ApplyOutcome dup = ApplyEdits(s->broken, {{router, {"!"}, {"! x"}}});
  bool ambiguous = !dup.ok() && dup.failure->reason == "ambiguous";

  ProblemInput input{s->topology, s->broken, s->violations};
  ScenarioTruth truth{s->faults, s->diff};
  ScriptedModelClient once({"### LOCALIZATION\n", PerfectReply(truth)});
  SolveOutcome fixed = Solve(input, s->diff.affected_routers, once);
  bool retry = fixed.solved && fixed.retries == 1 && once.calls() == 2 && fixed.fixed == s->golden;
  ScriptedModelClient twice({"garbage", "garbage", PerfectReply(truth)});
  SolveOutcome gave_up = Solve(input, s->diff.affected_routers, twice);
  bool single = !gave_up.solved && gave_up.retries == 1 && twice.calls() == 2;

  return {whitespace && fuzzy && ambiguous && retry && single,
          absl::StrCat("whitespace ", whitespace, ", fuzzy ", fuzzy, ", ambiguity ", ambiguous,
                       ", retry ", retry, ", single retry ", single)};
}

// 9. Parse/render and diff round trips over the smoke scenarios.
Outcome RoundTrips(const Smoke& smoke) {
  if (!smoke.error.empty()) return {false, smoke.error};
  auto manifest = LoadManifest(smoke.dir);
  if (!manifest.ok()) return {false, std::string(manifest.status().message())};
  int files = 0, bad_render = 0, bad_diff = 0;
  for (const ScenarioDescriptor& d : manifest->scenarios) {
    auto s = LoadScenario((fs::path(smoke.dir) / "scenarios" / d.id).string());
    if (!s.ok()) return {false, std::string(s.status().message())};
    for (const ConfigSet* set : {&s->golden, &s->broken}) {
      ParsedConfigs parsed = ParseConfigs(*set);
      if (!parsed.errors.empty()) ++bad_render;
      for (const auto& [router, dev] : parsed.devices) {
        ++files;
        if (RenderDevice(dev.model) != set->at(router)) ++bad_render;
      }
    }
    ApplyOutcome fwd = ApplyEdits(s->golden, s->diff.Forward());
    ApplyOutcome back = ApplyEdits(fwd.configs, s->diff.Backward());
    if (!fwd.ok() || fwd.configs != s->broken || !back.ok() || back.configs != s->golden) {
      ++bad_diff;
    }
  }
  return {files > 0 && bad_render == 0 && bad_diff == 0,
          absl::StrCat(files, " files, ", bad_render, " render mismatches, ", bad_diff,
                       " diff mismatches")};
}

// 10. Regeneration is byte-identical once timestamps are blanked.
Outcome Determinism(const Smoke& first) {
  if (!first.error.empty()) return {false, first.error};
  Smoke second = GenerateSmoke("smoke-again");
  if (!second.error.empty()) return {false, second.error};
  auto a = SnapshotTree(first.dir);
  auto b = SnapshotTree(second.dir);
  if (!a.ok() || !b.ok()) return {false, "snapshot failed"};
  size_t differing = 0;
  for (const auto& [path, bytes] : *a) {
    auto it = b->find(path);
    if (it == b->end() || it->second != bytes) ++differing;
  }
  differing += b->size() > a->size() ? b->size() - a->size() : 0;
  return {differing == 0, absl::StrCat(a->size(), " files, ", differing, " differ")};
}

int Main() {
  int failed = 0;
  auto report = [&](int n, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << name << "): "
              << o.detail << std::endl;
    if (!o.pass) ++failed;
  };
  report(1, "pairwise greedy", Greedy());
  GenerationRun run = GenerateAll();
  report(2, "scenario count", ScenarioCount(run));
  report(3, "worked example", WorkedExample());
  report(4, "score formulas", ScoreGrid());
  report(5, "mining oracle", MiningOracle());
  report(6, "golden soundness", Soundness(run));
  Smoke smoke = GenerateSmoke("smoke");
  report(7, "end to end", EndToEnd(smoke));
  report(8, "patch robustness", PatchRobustness(smoke));
  report(9, "round trips", RoundTrips(smoke));
  report(10, "determinism", Determinism(smoke));
  fs::remove_all(fs::path(Scratch("x")).parent_path());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace netfix

int main() { return netfix::Main(); }
