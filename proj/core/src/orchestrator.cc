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

#include "netfix/orchestrator.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/time/clock.h"
#include "absl/time/time.h"
#include "netfix/resources.h"
#include "netfix/rng.h"
#include "netfix/simulator.h"

namespace netfix {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Now() { return absl::FormatTime(absl::RFC3339_sec, absl::Now(), absl::UTCTimeZone()); }

absl::StatusOr<std::string> ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", p.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::StatusOr<json> ReadJson(const fs::path& p) {
  auto text = ReadFile(p);
  if (!text.ok()) return text.status();
  json doc = json::parse(*text, nullptr, false);
  if (doc.is_discarded()) return absl::InvalidArgumentError(absl::StrCat(p.string(), " is not JSON"));
  return doc;
}

absl::Status WriteFile(const fs::path& p, absl::string_view content) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", p.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("short write to ", p.string()));
  return absl::OkStatus();
}

absl::Status WriteJson(const fs::path& p, const json& doc, bool compact = false) {
  return WriteFile(p, (compact ? doc.dump() : doc.dump(2)) + "\n");
}

absl::Status WriteConfigs(const fs::path& dir, const ConfigSet& configs) {
  for (const auto& [router, text] : configs) {
    if (absl::Status s = WriteFile(dir / (router + ".cfg"), text); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<ConfigSet> ReadConfigs(const fs::path& dir) {
  ConfigSet out;
  if (!fs::is_directory(dir)) return absl::NotFoundError(absl::StrCat(dir.string(), " missing"));
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".cfg") continue;
    auto text = ReadFile(e.path());
    if (!text.ok()) return text.status();
    out[e.path().stem().string()] = *std::move(text);
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `parallelism` threads.
void ParallelFor(size_t n, int parallelism, const std::function<void(size_t)>& fn) {
  size_t workers = std::min<size_t>(std::max(1, parallelism), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

size_t LineCount(const ConfigSet& configs) {
  size_t n = 0;
  for (const auto& [router, text] : configs) n += SplitLines(text).size();
  return n;
}

absl::StatusOr<SimulationResult> Simulate(const ConfigSet& configs, const Topology& t,
                                          const std::vector<Prefix>& universe) {
  return ComputeDataplane(ParseConfigs(configs).Models(), t, universe);
}

// Picks one binding per kind with pairwise disjoint claims. Kinds with the
// fewest targets are placed first; candidate order is random.
absl::StatusOr<std::vector<FaultInstance>> DrawBindings(const LogicalPlan& plan,
                                                        const FaultSet& kinds, Rng& rng) {
  struct Candidate {
    FaultInstance fault;
    std::set<std::string> claims;
  };
  std::vector<std::vector<Candidate>> candidates(kinds.size());
  for (size_t k = 0; k < kinds.size(); ++k) {
    std::vector<FaultInstance> targets = ApplicableTargets(plan, kinds[k]);
    std::shuffle(targets.begin(), targets.end(), rng);
    for (FaultInstance& f : targets) {
      std::set<std::string> claims = Claims(plan, f);
      candidates[k].push_back({std::move(f), std::move(claims)});
    }
    if (candidates[k].empty()) {
      return absl::FailedPreconditionError(
          absl::StrCat("no binding for ", kinds[k], " on ", plan.topology.name()));
    }
  }
  std::vector<size_t> order(kinds.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return candidates[a].size() < candidates[b].size();
  });

  constexpr size_t kMaxSteps = 200000;
  size_t steps = 0;
  std::vector<const Candidate*> chosen(kinds.size(), nullptr);
  std::map<std::string, int> claimed;
  std::function<bool(size_t)> place = [&](size_t depth) {
    if (depth == order.size()) return true;
    size_t k = order[depth];
    for (const Candidate& c : candidates[k]) {
      if (++steps > kMaxSteps) return false;
      if (std::any_of(c.claims.begin(), c.claims.end(),
                      [&](const std::string& x) { return claimed.count(x) > 0; })) {
        continue;
      }
      for (const std::string& x : c.claims) ++claimed[x];
      chosen[k] = &c;
      if (place(depth + 1)) return true;
      for (const std::string& x : c.claims) {
        if (--claimed[x] == 0) claimed.erase(x);
      }
      chosen[k] = nullptr;
    }
    return false;
  };
  if (!place(0)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "no conflict-free binding for ", absl::StrJoin(kinds, "+"), " on ", plan.topology.name()));
  }
  std::vector<FaultInstance> out;
  for (const Candidate* c : chosen) out.push_back(c->fault);
  return out;
}

double Ratio(double a, double b) { return b == 0 ? 0.0 : a / b; }

ScoreReport UnsolvedScore(const PredicateSet& violations) {
  ScoreReport r;
  r.violations = violations;
  r.unfixed = violations;
  r.unfixed.state = SpecState::kFix;
  r.fixed.state = SpecState::kFix;
  r.regressed.state = SpecState::kFix;
  r.fix_score = 0.0;
  r.regression_rate = 0.0;
  r.strictly_correct = false;
  return r;
}

void BlankTimestamps(json& doc) {
  if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (it.key() == kTimestampField) {
        it.value() = "";
      } else {
        BlankTimestamps(it.value());
      }
    }
  } else if (doc.is_array()) {
    for (json& x : doc) BlankTimestamps(x);
  }
}

}  // namespace

absl::StatusOr<TopologyPool> LoadTopologyPool(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    return absl::NotFoundError(absl::StrCat("topology directory ", dir, " not found"));
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".gml" || ext == ".json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  TopologyPool pool;
  for (const fs::path& p : files) {
    auto text = ReadFile(p);
    if (!text.ok()) return text.status();
    auto t = LoadTopology(*text, p.stem().string());
    if (!t.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(p.string(), ": ", t.status().message()));
    }
    std::string name = t->name();
    if (pool.topologies.count(name)) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate topology name ", name));
    }
    pool.tiers[ClassifyTier(*t)].push_back(name);
    pool.topologies.emplace(name, *std::move(t));
  }
  for (auto& [tier, names] : pool.tiers) std::sort(names.begin(), names.end());
  return pool;
}

json Scenario::Metadata() const {
  std::vector<std::string> labels;
  for (const FaultInstance& f : injection.faults) labels.push_back(f.Label());
  size_t loc = LineCount(golden);
  return {
      {"id", descriptor.id},
      {"descriptor", descriptor.ToJson()},
      {"plan_version", kPlanVersion},
      {"grammar_version", std::string(kGrammarVersion)},
      {"catalog_size", FaultCatalog().size()},
      {"features", FeatureNames(features)},
      {"plan_seed", plan_seed},
      {"binding_attempts", attempts},
      {"faults", labels},
      {"topology",
       {{"name", plan.topology.name()},
        {"nodes", plan.topology.size()},
        {"links", plan.topology.links().size()},
        {"tier", std::string(TierName(ClassifyTier(plan.topology)))}}},
      {"loc", loc},
      {"routes", golden_routes},
      {"predicates", spec.size()},
      {"lines_edited", injection.diff.LinesEdited()},
      {"routers_affected", injection.diff.affected_routers.size()},
      {"routes_changed", routes_changed},
      {"predicates_changed", violations.size()},
      {"fuzzy_threshold", "max(2, ceil(0.05 * search-block characters))"},
      {kTimestampField, Now()},
  };
}

absl::StatusOr<Scenario> GenerateScenario(const ScenarioDescriptor& d, const Topology& topology,
                                          const GenerateOptions& options) {
  Scenario s;
  s.descriptor = d;
  FeatureSet requested;
  for (const std::string& kind : d.faults) {
    const FaultKind* k = FindFaultKind(kind);
    if (k == nullptr) return absl::InvalidArgumentError(absl::StrCat("unknown fault kind ", kind));
    requested.insert(k->required_features.begin(), k->required_features.end());
  }
  s.features = ResolveDependencies(requested);

  std::optional<SimulationResult> golden;
  std::vector<Prefix> universe;
  // The first half of the draws use the first plan, the rest a second one.
  const int replan_at = (options.max_resamples + 2) / 2;
  std::string last_reason;
  for (int attempt = 0; attempt <= options.max_resamples; ++attempt) {
    if (attempt == 0 || attempt == replan_at) {
      s.plan_seed = attempt == 0 ? DeriveSeed(d.seed, "plan") : DeriveSeed(d.seed, "replan");
      auto plan = BuildPlan(topology, s.features, s.plan_seed);
      if (!plan.ok()) return plan.status();
      s.plan = *std::move(plan);
      s.golden = Render(s.plan);
      universe = s.plan.Universe();
      auto sim = Simulate(s.golden, topology, universe);
      if (!sim.ok()) return sim.status();
      golden = *std::move(sim);
      s.golden_table = golden->table;
      s.golden_routes = golden->RouteCount();
      s.spec = MinePredicates(s.golden_table, options.mining);
    }
    s.attempts = attempt + 1;
    Rng rng(DeriveSeed(d.seed, "binding", attempt));
    auto faults = DrawBindings(s.plan, d.faults, rng);
    if (!faults.ok()) {
      last_reason = std::string(faults.status().message());
      continue;
    }
    auto injection = Inject(s.plan, *faults, DeriveSeed(d.seed, "inject", attempt));
    if (!injection.ok()) {
      last_reason = std::string(injection.status().message());
      continue;
    }
    ConfigSet broken = Render(injection->broken);
    auto result = Simulate(broken, topology, universe);
    if (!result.ok()) {
      last_reason = std::string(result.status().message());
      continue;
    }
    PredicateSet v = DiffViolations(s.spec, result->table, &s.golden_table);
    if (v.empty()) {
      last_reason = "no violated predicate";
      continue;
    }
    s.broken = std::move(broken);
    s.injection = *std::move(injection);
    s.violations = std::move(v);
    s.routes_changed = CountRouteDifferences(*golden, *result);
    return s;
  }
  return absl::FailedPreconditionError(absl::StrCat("not tangible after ", options.max_resamples + 1,
                                                    " draws: ", last_reason));
}

absl::Status WriteScenario(const Scenario& s, const std::string& dir) {
  fs::path root(dir);
  json faults = json::array();
  for (const FaultInstance& f : s.injection.faults) faults.push_back(f.ToJson());
  std::vector<absl::Status> statuses = {
      WriteJson(root / "topology.json", s.plan.topology.ToJson()),
      WriteJson(root / "plan.json", s.plan.ToJson()),
      WriteConfigs(root / "configs", s.golden),
      WriteConfigs(root / "broken", s.broken),
      WriteJson(root / "diff.json", {{"faults", faults}, {"diff", s.injection.diff.ToJson()}}),
      WriteJson(root / "spec.json", s.spec.ToJson(), /*compact=*/true),
      WriteJson(root / "violations.json", s.violations.ToJson()),
      WriteJson(root / "fib-golden.json", s.golden_table.ToJson(), /*compact=*/true),
      WriteJson(root / "metadata.json", s.Metadata()),
  };
  for (const absl::Status& st : statuses) {
    if (!st.ok()) return st;
  }
  return absl::OkStatus();
}

json DatasetManifest::ToJson() const {
  json pool = json::object();
  for (const auto& [tier, names] : pools) pool[std::string(TierName(tier))] = names;
  json items = json::array();
  for (const ScenarioDescriptor& d : scenarios) {
    json j = d.ToJson();
    j["path"] = absl::StrCat("scenarios/", d.id);
    items.push_back(j);
  }
  json failed = json::array();
  for (const GenerationFailure& f : failures) {
    failed.push_back({{"descriptor", f.descriptor.ToJson()}, {"reason", f.reason}});
  }
  return {{"version", kDatasetVersion},
          {"seed", seed},
          {"plan_version", kPlanVersion},
          {"grammar_version", std::string(kGrammarVersion)},
          {"catalog_size", FaultCatalog().size()},
          {"sampler", collection.ToJson()},
          {"feasible_pairs", collection.feasible_pairs},
          {"pools", pool},
          {"scenario_count", scenarios.size()},
          {"scenarios", items},
          {"failures", failed},
          {kTimestampField, generated_at}};
}

absl::StatusOr<DatasetManifest> DatasetManifest::FromJson(const json& doc) {
  DatasetManifest m;
  try {
    m.seed = doc.at("seed").get<uint64_t>();
    const json& sampler = doc.at("sampler");
    m.collection.seed = sampler.at("seed").get<uint64_t>();
    m.collection.kinds = sampler.at("kinds").get<std::vector<std::string>>();
    m.collection.sets = sampler.at("sets").get<std::vector<FaultSet>>();
    m.collection.multi_count = sampler.at("multi_fault_sets").get<size_t>();
    m.collection.feasible_pairs = sampler.at("feasible_pairs").get<size_t>();
    for (const auto& [tier, names] : doc.at("pools").items()) {
      auto t = TierFromName(tier);
      if (!t) return absl::InvalidArgumentError(absl::StrCat("unknown tier ", tier));
      m.pools[*t] = names.get<std::vector<std::string>>();
    }
    for (const json& j : doc.at("scenarios")) {
      auto d = ScenarioDescriptor::FromJson(j);
      if (!d.ok()) return d.status();
      m.scenarios.push_back(*std::move(d));
    }
    for (const json& j : doc.at("failures")) {
      auto d = ScenarioDescriptor::FromJson(j.at("descriptor"));
      if (!d.ok()) return d.status();
      m.failures.push_back({*std::move(d), j.at("reason").get<std::string>()});
    }
    m.generated_at = doc.value(kTimestampField, "");
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed manifest: ", e.what()));
  }
  return m;
}

absl::StatusOr<std::pair<FaultSetCollection, std::vector<ScenarioDescriptor>>> PlanDataset(
    const TopologyPool& pool, const GenerateOptions& options) {
  if (pool.topologies.empty()) return absl::FailedPreconditionError("topology pool is empty");
  std::map<Tier, std::vector<std::string>> tiers = pool.tiers;
  std::vector<std::string> all;
  for (const auto& [name, t] : pool.topologies) all.push_back(name);
  for (Tier t : {Tier::kSmall, Tier::kMedium, Tier::kLarge}) {
    if (!tiers[t].empty()) continue;
    if (options.stratify) {
      return absl::FailedPreconditionError(absl::StrCat(
          "no topology in the ", TierName(t), " tier; add one or disable stratification"));
    }
    tiers[t] = all;
  }
  // Pair feasibility on the largest topology with every feature enabled.
  const Topology* largest = nullptr;
  for (const auto& [name, t] : pool.topologies) {
    if (largest == nullptr || t.size() > largest->size()) largest = &t;
  }
  FeatureSet everything(AllFeatures().begin(), AllFeatures().end());
  auto reference =
      BuildPlan(*largest, ResolveDependencies(everything), DeriveSeed(options.seed, "reference"));
  if (!reference.ok()) return reference.status();
  std::vector<std::vector<bool>> feasible = FeasiblePairs(*reference);
  std::vector<std::string> kinds;
  for (const FaultKind& k : FaultCatalog()) kinds.push_back(k.id);
  auto collection = PairwiseGreedy(
      kinds, [&](int a, int b) { return static_cast<bool>(feasible[a][b]); }, options.seed);
  if (!collection.ok()) return collection.status();
  auto descriptors = StratifiedInstantiate(*collection, tiers, options.seed);
  if (!descriptors.ok()) return descriptors.status();
  if (options.limit && descriptors->size() > *options.limit) descriptors->resize(*options.limit);
  return std::make_pair(*std::move(collection), *std::move(descriptors));
}

absl::StatusOr<DatasetManifest> CmdGenerate(const std::string& topology_dir,
                                            const std::string& out_dir,
                                            const GenerateOptions& options) {
  auto pool = LoadTopologyPool(topology_dir);
  if (!pool.ok()) return pool.status();
  auto planned = PlanDataset(*pool, options);
  if (!planned.ok()) return planned.status();
  auto& [collection, descriptors] = *planned;

  std::error_code ec;
  if (fs::exists(out_dir) && !fs::is_empty(out_dir, ec)) {
    return absl::AlreadyExistsError(absl::StrCat("output directory ", out_dir, " is not empty"));
  }
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    return absl::PermissionDeniedError(absl::StrCat("cannot create ", out_dir));
  }

  std::vector<std::string> errors(descriptors.size());
  ParallelFor(descriptors.size(), options.parallelism, [&](size_t i) {
    const ScenarioDescriptor& d = descriptors[i];
    auto s = GenerateScenario(d, pool->topologies.at(d.topology), options);
    if (!s.ok()) {
      errors[i] = std::string(s.status().message());
      return;
    }
    absl::Status w = WriteScenario(*s, (fs::path(out_dir) / "scenarios" / d.id).string());
    if (!w.ok()) errors[i] = absl::StrCat("write failed: ", w.message());
  });

  DatasetManifest m;
  m.seed = options.seed;
  m.collection = collection;
  m.pools = pool->tiers;
  for (size_t i = 0; i < descriptors.size(); ++i) {
    if (errors[i].empty()) {
      m.scenarios.push_back(descriptors[i]);
    } else {
      m.failures.push_back({descriptors[i], errors[i]});
    }
  }
  m.generated_at = Now();
  if (absl::Status s = WriteJson(fs::path(out_dir) / "manifest.json", m.ToJson()); !s.ok()) return s;
  if (absl::Status s = WriteJson(fs::path(out_dir) / "catalog.json", CatalogJson()); !s.ok()) {
    return s;
  }
  return m;
}

absl::StatusOr<DatasetManifest> LoadManifest(const std::string& dataset_dir) {
  auto doc = ReadJson(fs::path(dataset_dir) / "manifest.json");
  if (!doc.ok()) return doc.status();
  return DatasetManifest::FromJson(*doc);
}

absl::StatusOr<LoadedScenario> LoadScenario(const std::string& scenario_dir) {
  fs::path root(scenario_dir);
  LoadedScenario s;
  s.id = root.filename().string();
  auto topo = ReadFile(root / "topology.json");
  if (!topo.ok()) return topo.status();
  auto t = LoadTopology(*topo, s.id);
  if (!t.ok()) return t.status();
  s.topology = *std::move(t);
  auto golden = ReadConfigs(root / "configs");
  if (!golden.ok()) return golden.status();
  s.golden = *std::move(golden);
  auto broken = ReadConfigs(root / "broken");
  if (!broken.ok()) return broken.status();
  s.broken = *std::move(broken);

  auto diff = ReadJson(root / "diff.json");
  if (!diff.ok()) return diff.status();
  if (!diff->contains("faults") || !diff->contains("diff")) {
    return absl::InvalidArgumentError("diff.json lacks faults or diff");
  }
  for (const json& f : (*diff)["faults"]) {
    auto fi = FaultInstance::FromJson(f);
    if (!fi.ok()) return fi.status();
    s.faults.push_back(*std::move(fi));
  }
  auto gd = GroundTruthDiff::FromJson((*diff)["diff"]);
  if (!gd.ok()) return gd.status();
  s.diff = *std::move(gd);

  for (auto [file, target] : {std::make_pair("spec.json", &s.spec),
                              std::make_pair("violations.json", &s.violations)}) {
    auto doc = ReadJson(root / file);
    if (!doc.ok()) return doc.status();
    auto set = PredicateSet::FromJson(*doc);
    if (!set.ok()) return set.status();
    *target = *std::move(set);
  }
  auto fib = ReadJson(root / "fib-golden.json");
  if (!fib.ok()) return fib.status();
  auto table = ForwardingTable::FromJson(*fib);
  if (!table.ok()) return table.status();
  s.golden_table = *std::move(table);
  auto meta = ReadJson(root / "metadata.json");
  if (!meta.ok()) return meta.status();
  s.metadata = *std::move(meta);
  return s;
}

absl::StatusOr<ScoreReport> ScoreConfigs(const LoadedScenario& s, const ConfigSet& fixed) {
  auto result = Simulate(fixed, s.topology, s.golden_table.universe());
  if (!result.ok()) return result.status();
  return Score(s.spec, s.violations, result->table, &s.golden_table);
}

absl::StatusOr<ScoreReport> CmdScore(const std::string& scenario_dir, const std::string& fix_dir) {
  auto s = LoadScenario(scenario_dir);
  if (!s.ok()) return s.status();
  if (!fs::is_directory(fix_dir)) {
    return absl::NotFoundError(absl::StrCat("fix directory ", fix_dir, " not found"));
  }
  ConfigSet fixed = s->broken;
  for (auto& [router, text] : fixed) {
    fs::path p = fs::path(fix_dir) / (router + ".cfg");
    if (!fs::exists(p)) continue;
    auto t = ReadFile(p);
    if (!t.ok()) return t.status();
    text = *std::move(t);
  }
  return ScoreConfigs(*s, fixed);
}

json ScenarioResult::ToJson() const {
  std::vector<std::string> regressed;
  for (const Predicate& p : score.regressed.items) regressed.push_back(p.ToString());
  std::vector<int> tier_numbers;
  for (MatchTier t : tiers) tier_numbers.push_back(static_cast<int>(t));
  json j = {{"id", id},
            {"status", status},
            {"fix_score", score.fix_score},
            {"regression_rate", score.regression_rate},
            {"strictly_correct", status == "solved" && score.strictly_correct},
            {"violations", score.violations.size()},
            {"fixed", score.fixed.size()},
            {"unfixed", score.unfixed.size()},
            {"regressed", regressed},
            {"localization",
             {{"precision", localization.precision},
              {"recall", localization.recall},
              {"f1", localization.f1},
              {"predicted", predicted},
              {"truth", truth}}},
            {"diagnosis", diagnosis},
            {"retries", retries},
            {"feedback", feedback},
            {"parse_warnings", warnings},
            {"match_tiers", tier_numbers},
            {"prompt_path", prompt_path},
            {"transcript_path", transcript_path},
            {"wall_time_s", wall_time_s},
            {"prompt_tokens", prompt_tokens},
            {"completion_tokens", completion_tokens}};
  if (!error.empty()) j["error"] = error;
  if (retrieval_recall) j["retrieval_recall"] = *retrieval_recall;
  if (diagnosis_scores) {
    j["diagnosis_scores"] = diagnosis_scores->ToJson();
  } else {
    j["diagnosis_scores_omitted"] = diagnosis_omitted;
  }
  return j;
}

void EvaluationReport::Aggregate() {
  attempted = errored = 0;
  mean_fix_score = mean_regression_rate = mean_f1 = strict_success_rate = 0.0;
  double sound = 0, complete = 0;
  size_t judged = 0;
  for (const ScenarioResult& r : scenarios) {
    if (r.status == "errored") {
      ++errored;
      continue;
    }
    ++attempted;
    mean_fix_score += r.score.fix_score;
    mean_regression_rate += r.score.regression_rate;
    mean_f1 += r.localization.f1;
    strict_success_rate += (r.status == "solved" && r.score.strictly_correct) ? 1 : 0;
    if (r.diagnosis_scores) {
      ++judged;
      sound += r.diagnosis_scores->soundness;
      complete += r.diagnosis_scores->completeness;
    }
  }
  if (attempted > 0) {
    mean_fix_score /= attempted;
    mean_regression_rate /= attempted;
    mean_f1 /= attempted;
    strict_success_rate /= attempted;
  }
  mean_soundness.reset();
  mean_completeness.reset();
  if (judged > 0) {
    mean_soundness = sound / judged;
    mean_completeness = complete / judged;
  }
}

json EvaluationReport::ToJson() const {
  json items = json::array();
  for (const ScenarioResult& r : scenarios) items.push_back(r.ToJson());
  json agg = {{"attempted", attempted},
              {"errored", errored},
              {"mean_fix_score", mean_fix_score},
              {"mean_regression_rate", mean_regression_rate},
              {"mean_f1", mean_f1},
              {"strict_success_rate", strict_success_rate}};
  if (mean_soundness) agg["mean_soundness"] = *mean_soundness;
  if (mean_completeness) agg["mean_completeness"] = *mean_completeness;
  return {{"version", kReportVersion},
          {"dataset", dataset},
          {"prompt_version", std::string(kPromptVersion)},
          {"grammar_version", std::string(kGrammarVersion)},
          {"strategy", std::string(ContextStrategyName(strategy))},
          {"model", model},
          {"fuzzy_threshold", "max(2, ceil(0.05 * search-block characters))"},
          {"budget_tokens", budget_tokens},
          {"scenarios", items},
          {"aggregate", agg},
          {kTimestampField, Now()}};
}

ScenarioResult RunScenario(const LoadedScenario& s, const ModelConfig& model,
                           const RunOptions& options) {
  auto start = std::chrono::steady_clock::now();
  ScenarioResult r;
  r.id = s.id;
  r.truth = s.diff.affected_routers;
  r.score = UnsolvedScore(s.violations);
  ScenarioTruth truth{s.faults, s.diff};
  auto finish = [&] {
    r.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };
  auto client = MakeModelClient(model, s.id, truth);
  if (!client.ok()) {
    r.status = "errored";
    r.error = std::string(client.status().message());
    return finish();
  }
  ProblemInput input{s.topology, s.broken, s.violations, options.strategy, s.diff.affected_routers};
  SolveOutcome outcome = Solve(input, r.truth, **client, {options.budget_tokens});
  r.retries = outcome.retries;
  r.feedback = outcome.feedback;
  r.warnings = outcome.warnings;
  r.tiers = outcome.tiers;
  r.retrieval_recall = outcome.retrieval_recall;
  r.prompt_tokens = outcome.prompt_tokens;
  r.completion_tokens = outcome.completion_tokens;

  if (!options.out_dir.empty() && !outcome.transcript.empty()) {
    json t = json::array();
    for (const ChatMessage& m : outcome.transcript) {
      t.push_back({{"role", m.role}, {"content", m.content}});
    }
    fs::path dir(options.out_dir);
    r.transcript_path = absl::StrCat("transcripts/", s.id, ".json");
    r.prompt_path = absl::StrCat("prompts/", s.id, ".txt");
    const std::string& prompt = outcome.transcript.front().content;
    std::string main_prompt = prompt;
    for (const ChatMessage& m : outcome.transcript) {
      if (m.role == "user" && absl::StrContains(m.content, kReconfigurationHeader)) {
        main_prompt = m.content;
        break;
      }
    }
    absl::Status a = WriteJson(dir / r.transcript_path, t);
    absl::Status b = WriteFile(dir / r.prompt_path, main_prompt);
    if (!a.ok() || !b.ok()) r.warnings.push_back("could not write transcript");
  }

  if (outcome.errored) {
    r.status = "errored";
    r.error = outcome.error;
    return finish();
  }
  if (outcome.solved) {
    r.predicted.insert(outcome.solution->faulty_routers.begin(),
                       outcome.solution->faulty_routers.end());
    r.diagnosis = outcome.solution->diagnosis;
    r.localization = LocalizationF1(r.predicted, r.truth);
    auto score = ScoreConfigs(s, outcome.fixed);
    if (score.ok()) {
      r.status = "solved";
      r.score = *std::move(score);
    } else {
      r.status = "unsolved";
      r.warnings.push_back(absl::StrCat("fixed network: ", score.status().message()));
    }
  } else {
    r.status = "unsolved";
  }

  if (options.judges.empty()) {
    r.diagnosis_omitted = "no judges configured";
  } else {
    std::vector<std::unique_ptr<ModelClient>> owned;
    std::vector<ModelClient*> judges;
    for (const ModelConfig& j : options.judges) {
      auto c = MakeModelClient(j, s.id, truth);
      if (c.ok()) {
        owned.push_back(*std::move(c));
        judges.push_back(owned.back().get());
      }
    }
    auto scores = JudgeDiagnosis(r.diagnosis, truth, judges);
    if (scores.ok()) {
      r.diagnosis_scores = *std::move(scores);
    } else {
      r.diagnosis_omitted = std::string(scores.status().message());
    }
  }
  return finish();
}

absl::StatusOr<EvaluationReport> CmdRun(const std::string& dataset_dir, const ModelConfig& model,
                                        const RunOptions& options) {
  auto manifest = LoadManifest(dataset_dir);
  if (!manifest.ok()) return manifest.status();
  RunOptions opts = options;
  if (opts.out_dir.empty()) opts.out_dir = dataset_dir;
  EvaluationReport report;
  report.dataset = fs::absolute(dataset_dir).lexically_normal().string();
  report.model = model.kind == "http" ? model.model : model.kind;
  report.strategy = opts.strategy;
  report.budget_tokens = opts.budget_tokens;
  report.scenarios.resize(manifest->scenarios.size());
  ParallelFor(manifest->scenarios.size(), opts.parallelism, [&](size_t i) {
    const std::string& id = manifest->scenarios[i].id;
    auto s = LoadScenario((fs::path(dataset_dir) / "scenarios" / id).string());
    if (!s.ok()) {
      ScenarioResult& r = report.scenarios[i];
      r.id = id;
      r.status = "errored";
      r.error = std::string(s.status().message());
      r.score.fix_score = 0.0;
      r.diagnosis_omitted = "scenario could not be loaded";
      return;
    }
    report.scenarios[i] = RunScenario(*s, model, opts);
  });
  report.Aggregate();
  json doc = report.ToJson();
  if (absl::Status v = ValidateAgainstSchema(doc, ReportSchema()); !v.ok()) {
    return absl::InternalError(absl::StrCat("report fails its schema: ", v.message()));
  }
  if (absl::Status w = WriteJson(fs::path(opts.out_dir) / "report.json", doc); !w.ok()) return w;
  return report;
}

absl::StatusOr<json> CmdJudge(const std::string& report_path,
                              const std::vector<ModelConfig>& judges) {
  if (judges.empty()) return absl::InvalidArgumentError("no judges configured");
  auto doc = ReadJson(report_path);
  if (!doc.ok()) return doc.status();
  json report = *std::move(doc);
  std::string dataset = report.value("dataset", "");
  double sound = 0, complete = 0;
  size_t judged = 0;
  for (json& item : report["scenarios"]) {
    if (item.value("status", "") == "errored") continue;
    std::string id = item.value("id", "");
    auto s = LoadScenario((fs::path(dataset) / "scenarios" / id).string());
    if (!s.ok()) {
      item["diagnosis_scores_omitted"] = std::string(s.status().message());
      continue;
    }
    ScenarioTruth truth{s->faults, s->diff};
    std::vector<std::unique_ptr<ModelClient>> owned;
    std::vector<ModelClient*> clients;
    for (const ModelConfig& j : judges) {
      auto c = MakeModelClient(j, id, truth);
      if (c.ok()) {
        owned.push_back(*std::move(c));
        clients.push_back(owned.back().get());
      }
    }
    auto scores = JudgeDiagnosis(item.value("diagnosis", ""), truth, clients);
    if (scores.ok()) {
      item["diagnosis_scores"] = scores->ToJson();
      item.erase("diagnosis_scores_omitted");
      sound += scores->soundness;
      complete += scores->completeness;
      ++judged;
    } else {
      item.erase("diagnosis_scores");
      item["diagnosis_scores_omitted"] = std::string(scores.status().message());
    }
  }
  if (judged > 0) {
    report["aggregate"]["mean_soundness"] = sound / judged;
    report["aggregate"]["mean_completeness"] = complete / judged;
  }
  if (absl::Status v = ValidateAgainstSchema(report, ReportSchema()); !v.ok()) {
    return absl::InternalError(absl::StrCat("report fails its schema: ", v.message()));
  }
  if (absl::Status w = WriteJson(report_path, report); !w.ok()) return w;
  return report;
}

absl::StatusOr<json> CmdStats(const std::string& dataset_dir) {
  auto manifest = LoadManifest(dataset_dir);
  if (!manifest.ok()) return manifest.status();
  const std::vector<std::string> columns = {
      "nodes",         "loc",         "routes",         "predicates",
      "lines_edited",  "routers_affected", "routes_changed", "predicates_changed",
      "loc_pct_changed", "routes_pct_changed", "predicates_pct_changed"};
  json rows = json::array();
  std::map<std::string, std::vector<double>> values;
  for (const ScenarioDescriptor& d : manifest->scenarios) {
    auto meta = ReadJson(fs::path(dataset_dir) / "scenarios" / d.id / "metadata.json");
    if (!meta.ok()) return meta.status();
    const json& m = *meta;
    double nodes = m["topology"]["nodes"].get<double>();
    double loc = m["loc"].get<double>();
    double routes = m["routes"].get<double>();
    double predicates = m["predicates"].get<double>();
    double edited = m["lines_edited"].get<double>();
    double routes_changed = m["routes_changed"].get<double>();
    double preds_changed = m["predicates_changed"].get<double>();
    json row = {{"id", d.id},
                {"tier", std::string(TierName(d.tier))},
                {"faults", d.faults.size()},
                {"nodes", nodes},
                {"loc", loc},
                {"routes", routes},
                {"predicates", predicates},
                {"lines_edited", edited},
                {"routers_affected", m["routers_affected"].get<double>()},
                {"routes_changed", routes_changed},
                {"predicates_changed", preds_changed},
                {"loc_pct_changed", 100.0 * Ratio(edited, loc)},
                {"routes_pct_changed", 100.0 * Ratio(routes_changed, routes)},
                {"predicates_pct_changed", 100.0 * Ratio(preds_changed, predicates)}};
    for (const std::string& c : columns) values[c].push_back(row[c].get<double>());
    rows.push_back(std::move(row));
  }
  json agg = json::object();
  for (const std::string& c : columns) {
    const std::vector<double>& v = values[c];
    if (v.empty()) continue;
    double sum = 0;
    for (double x : v) sum += x;
    agg[c] = {{"mean", sum / v.size()}, {"max", *std::max_element(v.begin(), v.end())}};
  }
  return json{{"scenario_count", rows.size()}, {"scenarios", rows}, {"aggregate", agg}};
}

absl::StatusOr<std::map<std::string, std::string>> SnapshotTree(const std::string& dir) {
  std::map<std::string, std::string> out;
  if (!fs::is_directory(dir)) return absl::NotFoundError(absl::StrCat(dir, " is not a directory"));
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto bytes = ReadFile(e.path());
    if (!bytes.ok()) return bytes.status();
    std::string rel = fs::relative(e.path(), dir).generic_string();
    if (e.path().extension() == ".json") {
      json doc = json::parse(*bytes, nullptr, false);
      if (!doc.is_discarded()) {
        BlankTimestamps(doc);
        *bytes = doc.dump();
      }
    }
    out[rel] = *std::move(bytes);
  }
  return out;
}

}  // namespace netfix
