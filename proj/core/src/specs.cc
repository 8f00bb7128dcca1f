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

#include "netfix/specs.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace netfix {
namespace {

using nlohmann::json;

constexpr int kUnbounded = std::numeric_limits<int>::max() / 2;

// Delivery analysis of one forwarding graph.
class Analysis {
 public:
  explicit Analysis(ForwardingGraph g) : g_(std::move(g)) {
    int n = g_.sink + 1;
    std::vector<std::vector<int>> in(n);
    for (int u = 0; u < n; ++u) {
      for (int v : g_.out[u]) in[v].push_back(u);
    }
    // Reverse search from the sink; the visit order also serves as the
    // traversal order of the dominator iteration.
    delivering_.assign(n, false);
    std::vector<int> order;
    std::vector<int> stack = {g_.sink};
    delivering_[g_.sink] = true;
    std::vector<size_t> next(n, 0);
    std::vector<int> post;
    // Iterative DFS on the reversed graph for a postorder.
    while (!stack.empty()) {
      int u = stack.back();
      if (next[u] < in[u].size()) {
        int v = in[u][next[u]++];
        if (!delivering_[v]) {
          delivering_[v] = true;
          stack.push_back(v);
        }
      } else {
        post.push_back(u);
        stack.pop_back();
      }
    }
    std::vector<int> rpo(post.rbegin(), post.rend());
    std::vector<int> rank(n, -1);
    for (size_t i = 0; i < rpo.size(); ++i) rank[rpo[i]] = static_cast<int>(i);

    // Cooper-Harvey-Kennedy on the reversed graph rooted at the sink.
    idom_.assign(n, -1);
    idom_[g_.sink] = g_.sink;
    auto intersect = [&](int a, int b) {
      while (a != b) {
        while (rank[a] > rank[b]) a = idom_[a];
        while (rank[b] > rank[a]) b = idom_[b];
      }
      return a;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (int v : rpo) {
        if (v == g_.sink) continue;
        int best = -1;
        // Predecessors in the reversed graph are forward successors.
        for (int s : g_.out[v]) {
          if (!delivering_[s] || idom_[s] < 0) continue;
          best = best < 0 ? s : intersect(s, best);
        }
        if (best >= 0 && idom_[v] != best) {
          idom_[v] = best;
          changed = true;
        }
      }
    }
  }

  bool Reaches(int r) const { return delivering_[r]; }
  bool Accepts(int r) const { return g_.HasEdge(r, g_.sink); }

  std::vector<int> Waypoints(int r) const {
    std::vector<int> out;
    if (!delivering_[r]) return out;
    for (int w = idom_[r]; w != g_.sink; w = idom_[w]) out.push_back(w);
    std::sort(out.begin(), out.end());
    return out;
  }

  int DeliveringOutDegree(int r) const {
    int d = 0;
    for (int s : g_.out[r]) d += delivering_[s] ? 1 : 0;
    return d;
  }

  // Edge-disjoint delivering paths: unit capacity on router links, none on
  // the edges into the sink.
  int MaxFlow(int r) const {
    if (!delivering_[r]) return 0;
    struct Arc {
      int to;
      int cap;
      int rev;
    };
    int n = g_.sink + 1;
    std::vector<std::vector<Arc>> res(n);
    for (int u = 0; u < n; ++u) {
      if (!delivering_[u]) continue;
      for (int v : g_.out[u]) {
        if (!delivering_[v]) continue;
        int cap = v == g_.sink ? kUnbounded : 1;
        res[u].push_back({v, cap, static_cast<int>(res[v].size())});
        res[v].push_back({u, 0, static_cast<int>(res[u].size()) - 1});
      }
    }
    int flow = 0;
    while (true) {
      std::vector<std::pair<int, int>> parent(n, {-1, -1});
      std::deque<int> queue = {r};
      parent[r] = {r, -1};
      while (!queue.empty() && parent[g_.sink].first < 0) {
        int u = queue.front();
        queue.pop_front();
        for (size_t i = 0; i < res[u].size(); ++i) {
          const Arc& a = res[u][i];
          if (a.cap > 0 && parent[a.to].first < 0) {
            parent[a.to] = {u, static_cast<int>(i)};
            queue.push_back(a.to);
          }
        }
      }
      if (parent[g_.sink].first < 0) break;
      int push = kUnbounded;
      for (int v = g_.sink; v != r; v = parent[v].first) {
        push = std::min(push, res[parent[v].first][parent[v].second].cap);
      }
      for (int v = g_.sink; v != r; v = parent[v].first) {
        Arc& a = res[parent[v].first][parent[v].second];
        a.cap -= push;
        res[v][a.rev].cap += push;
      }
      flow += push;
    }
    return flow;
  }

 private:
  ForwardingGraph g_;
  std::vector<bool> delivering_;
  std::vector<int> idom_;
};

void EmitFor(const ForwardingTable& table, const Analysis& a, int r, const Prefix& p,
             const MiningOptions& options, std::set<Predicate>& out) {
  const std::string& name = table.routers()[r];
  if (!a.Reaches(r)) {
    out.insert(Predicate::Isolation(name, p));
    return;
  }
  out.insert(Predicate::Reachability(name, p));
  for (int w : a.Waypoints(r)) {
    if (options.suppress_owner_waypoints && a.Accepts(w)) continue;
    out.insert(Predicate::Waypoint(name, p, table.routers()[w]));
  }
  if (!a.Accepts(r) && a.DeliveringOutDegree(r) >= 2) {
    int n = a.MaxFlow(r);
    if (n >= 2) out.insert(Predicate::LoadBalancing(name, p, n));
  }
}

bool Holds(const Predicate& pred, const Analysis& a, const ForwardingTable& table, int r) {
  switch (pred.kind) {
    case PredicateKind::kReachability:
      return a.Reaches(r);
    case PredicateKind::kIsolation:
      return !a.Reaches(r);
    case PredicateKind::kWaypoint: {
      auto w = table.RouterIndex(pred.waypoint);
      if (!w || !a.Reaches(r)) return false;
      std::vector<int> ws = a.Waypoints(r);
      return std::binary_search(ws.begin(), ws.end(), *w);
    }
    case PredicateKind::kLoadBalancing:
      return a.Reaches(r) && a.MaxFlow(r) == pred.paths;
  }
  return false;
}

std::optional<PredicateKind> KindFromName(absl::string_view name) {
  for (PredicateKind k : {PredicateKind::kReachability, PredicateKind::kIsolation,
                          PredicateKind::kWaypoint, PredicateKind::kLoadBalancing}) {
    if (PredicateKindName(k) == name) return k;
  }
  return std::nullopt;
}

json PredicateList(const PredicateSet& s) {
  json out = json::array();
  for (const Predicate& p : s.items) out.push_back(p.ToString());
  return out;
}

}  // namespace

absl::string_view PredicateKindName(PredicateKind kind) {
  switch (kind) {
    case PredicateKind::kReachability:
      return "Reachability";
    case PredicateKind::kIsolation:
      return "Isolation";
    case PredicateKind::kWaypoint:
      return "Waypoint";
    case PredicateKind::kLoadBalancing:
      return "LoadBalancing";
  }
  return "";
}

Predicate Predicate::Reachability(std::string r, Prefix p) {
  return {p, std::move(r), PredicateKind::kReachability, "", 0};
}
Predicate Predicate::Isolation(std::string r, Prefix p) {
  return {p, std::move(r), PredicateKind::kIsolation, "", 0};
}
Predicate Predicate::Waypoint(std::string r, Prefix p, std::string w) {
  return {p, std::move(r), PredicateKind::kWaypoint, std::move(w), 0};
}
Predicate Predicate::LoadBalancing(std::string r, Prefix p, int n) {
  return {p, std::move(r), PredicateKind::kLoadBalancing, "", n};
}

std::string Predicate::ToString() const {
  std::string out = absl::StrCat(PredicateKindName(kind), "(", router, ",", prefix.ToString());
  if (kind == PredicateKind::kWaypoint) absl::StrAppend(&out, ",", waypoint);
  if (kind == PredicateKind::kLoadBalancing) absl::StrAppend(&out, ",", paths);
  return out + ")";
}

std::optional<Predicate> Predicate::Parse(absl::string_view text) {
  size_t open = text.find('(');
  if (open == absl::string_view::npos || text.empty() || text.back() != ')') return std::nullopt;
  auto kind = KindFromName(text.substr(0, open));
  if (!kind) return std::nullopt;
  std::vector<std::string> args =
      absl::StrSplit(text.substr(open + 1, text.size() - open - 2), ',');
  bool three = *kind == PredicateKind::kWaypoint || *kind == PredicateKind::kLoadBalancing;
  if (args.size() != (three ? 3u : 2u) || args[0].empty()) return std::nullopt;
  auto prefix = Prefix::Parse(args[1]);
  if (!prefix) return std::nullopt;
  Predicate p;
  p.kind = *kind;
  p.router = args[0];
  p.prefix = *prefix;
  if (*kind == PredicateKind::kWaypoint) {
    if (args[2].empty() || args[2] == args[0]) return std::nullopt;
    p.waypoint = args[2];
  } else if (*kind == PredicateKind::kLoadBalancing) {
    if (!absl::SimpleAtoi(args[2], &p.paths) || p.paths < 2) return std::nullopt;
  }
  return p;
}

absl::string_view SpecStateName(SpecState s) {
  switch (s) {
    case SpecState::kGolden:
      return "golden";
    case SpecState::kBroken:
      return "broken";
    case SpecState::kFix:
      return "fix";
  }
  return "";
}

json PredicateSet::ToJson() const {
  return {{"state", std::string(SpecStateName(state))},
          {"count", items.size()},
          {"predicates", PredicateList(*this)}};
}

absl::StatusOr<PredicateSet> PredicateSet::FromJson(const json& doc) {
  PredicateSet out;
  if (!doc.is_object() || !doc.contains("predicates")) {
    return absl::InvalidArgumentError("predicate set document lacks 'predicates'");
  }
  std::string state = doc.value("state", "golden");
  if (state == "broken") {
    out.state = SpecState::kBroken;
  } else if (state == "fix") {
    out.state = SpecState::kFix;
  } else if (state != "golden") {
    return absl::InvalidArgumentError(absl::StrCat("unknown predicate set state '", state, "'"));
  }
  for (const json& item : doc.at("predicates")) {
    if (!item.is_string()) return absl::InvalidArgumentError("predicate is not a string");
    auto p = Predicate::Parse(item.get<std::string>());
    if (!p) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed predicate '", item.get<std::string>(), "'"));
    }
    out.items.insert(*p);
  }
  return out;
}

bool ForwardingGraph::HasEdge(int from, int to) const {
  return std::binary_search(out[from].begin(), out[from].end(), to);
}

ForwardingGraph BuildForwardingGraph(const ForwardingTable& table, int prefix, int source_router) {
  ForwardingGraph g;
  int n = static_cast<int>(table.routers().size());
  g.sink = n;
  g.out.assign(n + 1, {});
  const Prefix& p = table.universe()[prefix];
  for (int r = 0; r < n; ++r) {
    const ForwardingAction& a = table.Action(prefix, r);
    if (a.kind == ActionKind::kAccept) {
      g.out[r].push_back(g.sink);
    } else if (a.kind == ActionKind::kForward) {
      for (int s : a.next_hops) {
        int src = source_router >= 0 ? source_router : r;
        if (table.HopPermits(r, s, src, p)) g.out[r].push_back(s);
      }
    }
  }
  return g;
}

PredicateSet MinePrefix(const ForwardingTable& table, int prefix, const MiningOptions& options) {
  PredicateSet out;
  const Prefix& p = table.universe()[prefix];
  int n = static_cast<int>(table.routers().size());
  if (table.NeedsPerSourceGraphs(prefix)) {
    for (int r = 0; r < n; ++r) {
      Analysis a(BuildForwardingGraph(table, prefix, r));
      EmitFor(table, a, r, p, options, out.items);
    }
  } else {
    Analysis a(BuildForwardingGraph(table, prefix));
    for (int r = 0; r < n; ++r) EmitFor(table, a, r, p, options, out.items);
  }
  return out;
}

PredicateSet MinePredicates(const ForwardingTable& table, const MiningOptions& options) {
  PredicateSet out;
  for (size_t p = 0; p < table.universe().size(); ++p) {
    PredicateSet part = MinePrefix(table, static_cast<int>(p), options);
    out.items.merge(part.items);
  }
  return out;
}

PredicateSet DiffViolations(const PredicateSet& golden, const ForwardingTable& other,
                            const ForwardingTable* golden_table) {
  PredicateSet out;
  out.state = SpecState::kBroken;
  std::map<Prefix, std::vector<const Predicate*>> by_prefix;
  for (const Predicate& p : golden.items) by_prefix[p.prefix].push_back(&p);

  for (const auto& [prefix, preds] : by_prefix) {
    auto op = other.PrefixIndex(prefix);
    if (!op) {
      for (const Predicate* p : preds) {
        if (p->kind != PredicateKind::kIsolation) out.items.insert(*p);
      }
      continue;
    }
    if (golden_table != nullptr && golden_table->routers() == other.routers()) {
      auto gp = golden_table->PrefixIndex(prefix);
      if (gp && golden_table->SameForwarding(*gp, other, *op)) continue;
    }
    bool per_source = other.NeedsPerSourceGraphs(*op);
    std::optional<Analysis> shared;
    std::map<int, Analysis> by_source;
    if (!per_source) shared.emplace(BuildForwardingGraph(other, *op));
    for (const Predicate* p : preds) {
      auto r = other.RouterIndex(p->router);
      if (!r) {
        if (p->kind != PredicateKind::kIsolation) out.items.insert(*p);
        continue;
      }
      const Analysis* a = nullptr;
      if (per_source) {
        auto it = by_source.find(*r);
        if (it == by_source.end()) {
          it = by_source.emplace(*r, Analysis(BuildForwardingGraph(other, *op, *r))).first;
        }
        a = &it->second;
      } else {
        a = &*shared;
      }
      if (!Holds(*p, *a, other, *r)) out.items.insert(*p);
    }
  }
  return out;
}

json ScoreReport::ToJson() const {
  return {{"fix_score", fix_score},
          {"regression_rate", regression_rate},
          {"strictly_correct", strictly_correct},
          {"violations", PredicateList(violations)},
          {"fixed", PredicateList(fixed)},
          {"unfixed", PredicateList(unfixed)},
          {"regressed", PredicateList(regressed)}};
}

absl::StatusOr<ScoreReport> Score(const PredicateSet& golden, const PredicateSet& violations,
                                  const ForwardingTable& fix_table,
                                  const ForwardingTable* golden_table) {
  for (const Predicate& p : violations.items) {
    if (!golden.contains(p)) {
      return absl::InvalidArgumentError(
          absl::StrCat("violation ", p.ToString(), " is not in the golden specification"));
    }
  }
  PredicateSet failing = DiffViolations(golden, fix_table, golden_table);
  ScoreReport report;
  report.violations = violations;
  report.fixed.state = report.unfixed.state = report.regressed.state = SpecState::kFix;
  for (const Predicate& p : violations.items) {
    (failing.contains(p) ? report.unfixed : report.fixed).items.insert(p);
  }
  for (const Predicate& p : failing.items) {
    if (!violations.contains(p)) report.regressed.items.insert(p);
  }
  size_t denom = report.fixed.size() + report.unfixed.size() + report.regressed.size();
  if (denom > 0) {
    report.fix_score = static_cast<double>(report.fixed.size()) / denom;
    report.regression_rate = static_cast<double>(report.regressed.size()) / denom;
  }
  report.strictly_correct = report.unfixed.empty() && report.regressed.empty();
  return report;
}

}  // namespace netfix
