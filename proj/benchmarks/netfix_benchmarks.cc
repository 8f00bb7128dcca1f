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
#include <vector>

#include "absl/strings/str_cat.h"
#include "benchmark/benchmark.h"
#include "netfix/configtext.h"
#include "netfix/faults.h"
#include "netfix/plan.h"
#include "netfix/sampler.h"
#include "netfix/simulator.h"
#include "netfix/specs.h"
#include "netfix/topo.h"

namespace netfix {
namespace {

LogicalPlan PlanFor(const std::string& name) {
  Topology t = LoadTopologyFile(absl::StrCat(NETFIX_SOURCE_DIR, "/data/topologies/", name)).value();
  FeatureSet all(AllFeatures().begin(), AllFeatures().end());
  return BuildPlan(t, all, 1).value();
}

const char* kTopologies[] = {"Borealis.gml", "Cascadia.gml", "Dunmore.gml"};

void BM_Simulate(benchmark::State& state) {
  LogicalPlan plan = PlanFor(kTopologies[state.range(0)]);
  auto models = DeviceView(plan);
  auto universe = plan.Universe();
  for (auto _ : state) {
    auto r = ComputeDataplane(models, plan.topology, universe);
    benchmark::DoNotOptimize(r);
  }
  state.SetLabel(absl::StrCat(plan.topology.size(), " routers"));
}
BENCHMARK(BM_Simulate)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Mine(benchmark::State& state) {
  LogicalPlan plan = PlanFor(kTopologies[state.range(0)]);
  ForwardingTable table =
      ComputeDataplane(DeviceView(plan), plan.topology, plan.Universe()).value().table;
  for (auto _ : state) benchmark::DoNotOptimize(MinePredicates(table));
  state.SetLabel(absl::StrCat(plan.topology.size(), " routers"));
}
BENCHMARK(BM_Mine)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_PairwiseGreedy(benchmark::State& state) {
  std::vector<std::string> kinds;
  for (const FaultKind& k : FaultCatalog()) kinds.push_back(k.id);
  uint64_t seed = 0;
  for (auto _ : state) {
    auto c = PairwiseGreedy(kinds, [](int, int) { return true; }, ++seed);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_PairwiseGreedy)->Unit(benchmark::kMillisecond);

void BM_ApplyEdits(benchmark::State& state) {
  LogicalPlan plan = PlanFor("Dunmore.gml");
  Injection inj = Inject(plan, {ApplicableTargets(plan, "ebgp-wrong-remote-as").at(0)}, 1).value();
  ConfigSet golden = Render(plan);
  EditScript script = inj.diff.Forward();
  for (auto _ : state) benchmark::DoNotOptimize(ApplyEdits(golden, script));
}
BENCHMARK(BM_ApplyEdits)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace netfix

BENCHMARK_MAIN();
