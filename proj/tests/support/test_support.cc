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
#include "test_support.h"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"

namespace netfix::testing {
namespace {

Ipv4 Ip(absl::string_view text) { return Ipv4::Parse(text).value(); }

InterfaceConfig Iface(std::string name, absl::string_view address, int length) {
  InterfaceConfig c;
  c.name = std::move(name);
  c.address = InterfaceAddress{Ip(address), length};
  return c;
}

StaticRoute Static(const Prefix& p, absl::string_view next_hop) {
  StaticRoute s;
  s.prefix = p;
  s.next_hop = Ip(next_hop);
  return s;
}

Topology CreateOrDie(std::string name, std::vector<std::string> routers, std::vector<Link> links) {
  auto t = Topology::Create(std::move(name), std::move(routers), std::move(links));
  if (!t.ok()) std::abort();
  return *std::move(t);
}

}  // namespace

std::string SourcePath(absl::string_view relative) {
  return absl::StrCat(NETFIX_SOURCE_DIR, "/", relative);
}

Topology Triangle() { return LoadOrDie("tests/data/triangle.json"); }

Topology PathTopology(int n) {
  std::vector<std::string> routers;
  std::vector<Link> links;
  for (int i = 1; i <= n; ++i) routers.push_back(absl::StrCat("r", i));
  for (int i = 1; i < n; ++i) {
    links.push_back({{absl::StrCat("r", i), i == 1 ? 0 : 1}, {absl::StrCat("r", i + 1), 0}});
  }
  return CreateOrDie("path", routers, links);
}

Topology LoadOrDie(absl::string_view relative) {
  auto t = LoadTopologyFile(SourcePath(relative));
  if (!t.ok()) std::abort();
  return *std::move(t);
}

Prefix P(absl::string_view text) { return Prefix::Parse(text).value(); }

Topology WorkedExampleTopology() {
  return CreateOrDie("worked-example", {"R1", "R2", "R3", "R4"},
                     {{{"R1", 0}, {"R2", 0}}, {{"R1", 1}, {"R3", 0}}, {{"R2", 1}, {"R4", 0}}});
}

std::map<std::string, DeviceModel> WorkedExampleModels() {
  std::map<std::string, DeviceModel> m;
  DeviceModel& r1 = m["R1"];
  r1.hostname = "R1";
  r1.interfaces = {Iface("GigabitEthernet0/0", "10.0.12.1", 30),
                   Iface("GigabitEthernet0/1", "10.0.13.1", 30)};
  r1.statics = {Static(WorkedExamplePrefix(), "10.0.12.2"), Static(WorkedExamplePrefix(), "10.0.13.2")};
  DeviceModel& r2 = m["R2"];
  r2.hostname = "R2";
  r2.interfaces = {Iface("GigabitEthernet0/0", "10.0.12.2", 30),
                   Iface("GigabitEthernet0/1", "10.0.24.1", 30)};
  r2.statics = {Static(WorkedExamplePrefix(), "10.0.24.2")};
  DeviceModel& r3 = m["R3"];
  r3.hostname = "R3";
  r3.interfaces = {Iface("GigabitEthernet0/0", "10.0.13.2", 30)};
  DeviceModel& r4 = m["R4"];
  r4.hostname = "R4";
  r4.interfaces = {Iface("GigabitEthernet0/0", "10.0.24.2", 30), Iface("Loopback1", "10.1.0.1", 24)};
  return m;
}

Prefix WorkedExamplePrefix() { return P("10.1.0.0/24"); }

std::vector<std::array<std::string, 3>> WorkedExampleRows() {
  return {{"R1", "10.1/24", "Fwd R2"},
          {"R1", "10.1/24", "Fwd R3"},
          {"R2", "10.1/24", "Fwd R4"},
          {"R3", "10.1/24", "Drop"},
          {"R4", "10.1/24", "Accept"}};
}

std::set<Predicate> WorkedExamplePredicates() {
  Prefix p = WorkedExamplePrefix();
  return {Predicate::Reachability("R1", p), Predicate::Reachability("R2", p),
          Predicate::Isolation("R3", p), Predicate::Reachability("R4", p),
          Predicate::Waypoint("R1", p, "R2")};
}

std::set<Predicate> WorkedExampleOwnerWaypoints() {
  Prefix p = WorkedExamplePrefix();
  return {Predicate::Waypoint("R1", p, "R4"), Predicate::Waypoint("R2", p, "R4")};
}

ForwardingTable RandomDigraphTable(uint64_t seed, int max_routers) {
  std::mt19937_64 rng(seed);
  int n = std::uniform_int_distribution<int>(1, max_routers)(rng);
  std::vector<std::string> routers;
  std::vector<Ipv4> sources;
  for (int i = 0; i < n; ++i) {
    routers.push_back(absl::StrCat("n", i));
    sources.push_back(Ipv4{0x0aff0000u + static_cast<uint32_t>(i)});
  }
  ForwardingTable table(routers, {P("10.9.0.0/24")}, sources);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int r = 0; r < n; ++r) {
    ForwardingAction a;
    double c = coin(rng);
    if (c < 0.2 || n == 1) {
      a.kind = c < 0.1 ? ActionKind::kDrop : ActionKind::kAccept;
    } else if (c < 0.3) {
      a.kind = ActionKind::kDrop;
    } else {
      a.kind = ActionKind::kForward;
      std::vector<int> others;
      for (int s = 0; s < n; ++s) {
        if (s != r) others.push_back(s);
      }
      std::shuffle(others.begin(), others.end(), rng);
      int k = std::uniform_int_distribution<int>(1, std::min<int>(3, others.size()))(rng);
      a.next_hops.assign(others.begin(), others.begin() + k);
    }
    table.SetAction(0, r, std::move(a));
  }
  return table;
}

PredicateSet BruteForceMine(const ForwardingTable& table) {
  PredicateSet out;
  int n = static_cast<int>(table.routers().size());
  const int sink = n;
  for (size_t pi = 0; pi < table.universe().size(); ++pi) {
    const Prefix& p = table.universe()[pi];
    int prefix = static_cast<int>(pi);
    for (int r = 0; r < n; ++r) {
      // Successors as seen by the flow that starts at r.
      auto next = [&](int u) {
        std::vector<int> s;
        const ForwardingAction& a = table.Action(prefix, u);
        if (a.kind == ActionKind::kAccept) s.push_back(sink);
        if (a.kind == ActionKind::kForward) {
          for (int h : a.next_hops) {
            if (table.HopPermits(u, h, r, p)) s.push_back(h);
          }
        }
        return s;
      };
      std::vector<std::vector<int>> paths;
      std::vector<int> path = {r};
      std::vector<bool> on(n + 1, false);
      on[r] = true;
      std::function<void(int)> walk = [&](int u) {
        for (int v : next(u)) {
          if (v == sink) {
            paths.push_back(path);
            continue;
          }
          if (on[v]) continue;
          on[v] = true;
          path.push_back(v);
          walk(v);
          path.pop_back();
          on[v] = false;
        }
      };
      walk(r);
      const std::string& name = table.routers()[r];
      if (paths.empty()) {
        out.items.insert(Predicate::Isolation(name, p));
        continue;
      }
      out.items.insert(Predicate::Reachability(name, p));
      for (int w = 0; w < n; ++w) {
        if (w == r) continue;
        bool every = std::all_of(paths.begin(), paths.end(), [&](const std::vector<int>& q) {
          return std::find(q.begin(), q.end(), w) != q.end();
        });
        if (every) out.items.insert(Predicate::Waypoint(name, p, table.routers()[w]));
      }
      if (table.Action(prefix, r).kind == ActionKind::kAccept) continue;
      // Largest family of paths with pairwise disjoint router-to-router edges.
      std::vector<std::set<std::pair<int, int>>> edges;
      for (const auto& q : paths) {
        std::set<std::pair<int, int>> e;
        for (size_t i = 0; i + 1 < q.size(); ++i) e.insert({q[i], q[i + 1]});
        edges.push_back(std::move(e));
      }
      int best = 0;
      std::set<std::pair<int, int>> used;
      std::function<void(size_t, int)> pick = [&](size_t i, int count) {
        best = std::max(best, count);
        if (i == edges.size()) return;
        bool free = std::none_of(edges[i].begin(), edges[i].end(),
                                 [&](const auto& e) { return used.count(e) > 0; });
        if (free) {
          used.insert(edges[i].begin(), edges[i].end());
          pick(i + 1, count + 1);
          for (const auto& e : edges[i]) used.erase(e);
        }
        pick(i + 1, count);
      };
      pick(0, 0);
      if (best >= 2) out.items.insert(Predicate::LoadBalancing(name, p, best));
    }
  }
  return out;
}

ScoreFixture MakeScoreFixture(int fixed, int unfixed, int regressed) {
  int total = fixed + unfixed + regressed;
  std::vector<Prefix> universe;
  for (int i = 0; i <= total; ++i) {
    universe.push_back(Prefix(Ipv4{0x0a000000u + (static_cast<uint32_t>(i) << 8)}, 24));
  }
  ScoreFixture f;
  f.fix_table = ForwardingTable({"r"}, universe, {Ipv4{0x0aff0001u}});
  f.violations.state = SpecState::kBroken;
  for (int i = 0; i <= total; ++i) {
    Predicate pred = Predicate::Reachability("r", universe[i]);
    f.golden.items.insert(pred);
    if (i < fixed + unfixed) f.violations.items.insert(pred);
    bool holds = i < fixed || i == total;
    f.fix_table.SetAction(i, 0, {holds ? ActionKind::kAccept : ActionKind::kDrop, {}});
  }
  return f;
}

}  // namespace netfix::testing
