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

#include "netfix/simulator.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace netfix {
namespace {

constexpr uint32_t kUnreachable = std::numeric_limits<uint32_t>::max();
constexpr uint32_t kDefaultLocalPref = 100;
constexpr uint32_t kExternalMetric = 20;
constexpr uint32_t kDefaultIsisMetric = 10;

void MergeHops(std::vector<int>& into, const std::vector<int>& from) {
  std::vector<int> out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(out));
  into = std::move(out);
}

struct Edge {
  int to;
  uint32_t cost;
};
using Graph = std::vector<std::vector<Edge>>;

struct ShortestPaths {
  std::vector<uint32_t> dist;
  std::vector<std::vector<int>> first_hops;
};

ShortestPaths Dijkstra(const Graph& g, int source) {
  ShortestPaths sp;
  sp.dist.assign(g.size(), kUnreachable);
  sp.first_hops.assign(g.size(), {});
  using Item = std::pair<uint64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  sp.dist[source] = 0;
  queue.push({0, source});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d != sp.dist[u]) continue;
    for (const Edge& e : g[u]) {
      uint64_t nd = d + e.cost;
      if (nd >= kUnreachable) continue;
      std::vector<int> via = u == source ? std::vector<int>{e.to} : sp.first_hops[u];
      if (nd < sp.dist[e.to]) {
        sp.dist[e.to] = static_cast<uint32_t>(nd);
        sp.first_hops[e.to] = std::move(via);
        queue.push({nd, e.to});
      } else if (nd == sp.dist[e.to]) {
        MergeHops(sp.first_hops[e.to], via);
      }
    }
  }
  return sp;
}

struct Path {
  uint32_t cost = kUnreachable;
  std::vector<int> hops;

  bool reachable() const { return cost != kUnreachable; }
  void Offer(uint64_t c, const std::vector<int>& h) {
    if (c >= kUnreachable) return;
    if (c < cost) {
      cost = static_cast<uint32_t>(c);
      hops = h;
    } else if (c == cost) {
      MergeHops(hops, h);
    }
  }
};

struct Iface {
  const InterfaceConfig* cfg = nullptr;
  bool up = false;       // addressed, not shut, and the cable end is live
  bool physical = false;
  int peer = -1;
  int peer_iface = -1;
};

struct Entry {
  Protocol protocol = Protocol::kConnected;
  uint32_t metric = 0;
  int iface = -1;  // connected routes only
  ForwardingAction action;
  uint32_t local_pref = 0;
  uint32_t as_path_length = 0;
  Ipv4 origin_router_id;
  Ipv4 next_hop;
  std::string learned_from;
};

class Rib {
 public:
  void Offer(const Prefix& p, Entry e) {
    auto [it, inserted] = routes_.try_emplace(p, e);
    if (inserted) {
      lengths_ |= uint64_t{1} << p.length;
    } else if (AdminDistance(e.protocol) < AdminDistance(it->second.protocol)) {
      it->second = std::move(e);
    } else if (e.protocol == Protocol::kStatic && it->second.protocol == Protocol::kStatic &&
               e.action.kind == ActionKind::kForward &&
               it->second.action.kind == ActionKind::kForward) {
      // Parallel static routes load-share.
      MergeHops(it->second.action.next_hops, e.action.next_hops);
    }
  }
  const Entry* Find(const Prefix& p) const {
    auto it = routes_.find(p);
    return it == routes_.end() ? nullptr : &it->second;
  }
  const Entry* Longest(Ipv4 dst) const {
    for (int len = 32; len >= 0; --len) {
      if (!(lengths_ >> len & 1)) continue;
      if (const Entry* e = Find(Prefix(dst, len))) return e;
    }
    return nullptr;
  }
  const std::map<Prefix, Entry>& routes() const { return routes_; }

 private:
  std::map<Prefix, Entry> routes_;
  uint64_t lengths_ = 0;
};

struct BgpRoute {
  std::vector<uint32_t> as_path;
  uint32_t local_pref = kDefaultLocalPref;
  Ipv4 next_hop;
  std::optional<Ipv4> originator_id;
  std::vector<Ipv4> cluster_list;
  bool local = false;
  int session = -1;
  int from_router = -1;
  Ipv4 from_router_id;
  bool from_ebgp = false;
  bool from_client = false;
  uint32_t igp_metric = 0;
  std::vector<int> hops;

  friend bool operator==(const BgpRoute&, const BgpRoute&) = default;
};

struct Session {
  int x;
  int y;
  const BgpNeighbor* nx;  // x's configuration for y
  const BgpNeighbor* ny;
  Ipv4 src_x;
  Ipv4 src_y;
  bool ebgp;
};

bool PrefixListPermits(const std::vector<PrefixListEntry>& entries, const Prefix& p) {
  for (const PrefixListEntry& e : entries) {
    if (e.Matches(p)) return e.permit;
  }
  return false;
}

// First-match with implicit deny. Undefined maps and lists match anything.
bool ApplyRouteMap(const DeviceModel& m, const std::string& name, const Prefix& p, BgpRoute& r) {
  auto it = m.route_maps.find(name);
  if (it == m.route_maps.end()) return true;
  for (const RouteMapClause& c : it->second) {
    if (c.match_prefix_list) {
      auto pl = m.prefix_lists.find(*c.match_prefix_list);
      if (pl != m.prefix_lists.end() && !PrefixListPermits(pl->second, p)) continue;
    }
    if (!c.permit) return false;
    if (c.set_local_pref) r.local_pref = *c.set_local_pref;
    if (c.set_next_hop) r.next_hop = *c.set_next_hop;
    return true;
  }
  return false;
}

class Simulator {
 public:
  Simulator(const std::map<std::string, DeviceModel>& models, const Topology& t,
            const SimulationOptions& options)
      : t_(t), options_(options) {
    n_ = static_cast<int>(t.size());
    models_.resize(n_);
    for (int r = 0; r < n_; ++r) {
      auto it = models.find(t.routers()[r]);
      if (it != models.end()) {
        models_[r] = &it->second;
      } else {
        empty_.hostname = "";
        models_[r] = &empty_;
      }
    }
  }

  void BuildBase();
  absl::StatusOr<SimulationResult> Finish(const std::vector<Prefix>& universe);
  std::optional<int> TransportEndpoint(int from, Ipv4 addr) const;

 private:
  const DeviceModel& M(int r) const { return *models_[r]; }
  bool LinkUp(int r, int i) const;
  bool SameSubnet(int r, int i) const;
  ForwardingAction Resolve(const Rib& rib, int r, Ipv4 dst) const;
  ForwardingAction ResolveBase(int r, Ipv4 dst);

  void BuildInterfaces();
  void AddConnected();
  void RunOspf();
  void RunIsis();
  void AddStatics();

  template <typename Key>
  std::map<Key, std::vector<Path>> OspfRoutes(
      const std::map<Key, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>>& dests);

  void EstablishSessions();
  std::optional<Ipv4> SourceAddress(int r, const BgpNeighbor& n) const;
  absl::Status RunBgp();
  std::optional<BgpRoute> Export(const Session& s, bool forward, const Prefix& p,
                                 const BgpRoute& r) const;
  bool Better(const BgpRoute& a, const BgpRoute& b) const;
  void Redistribute();

  const Topology& t_;
  SimulationOptions options_;
  int n_ = 0;
  DeviceModel empty_;
  std::vector<const DeviceModel*> models_;
  std::vector<std::vector<Iface>> ifaces_;
  std::vector<Rib> base_;
  std::vector<Rib> final_;
  std::vector<std::map<uint32_t, ForwardingAction>> nh_cache_;

  // OSPF state.
  std::vector<std::set<uint32_t>> ospf_areas_;
  std::map<uint32_t, Graph> ospf_graph_;
  std::map<uint32_t, std::vector<int>> ospf_members_;
  std::map<uint32_t, std::map<int, ShortestPaths>> ospf_spf_;
  std::vector<int> abrs_;

  // BGP state.
  std::vector<bool> speaker_;
  std::vector<uint32_t> asn_;
  std::vector<Ipv4> bgp_id_;
  std::vector<Ipv4> cluster_id_;
  std::vector<bool> reflector_;
  std::vector<Session> sessions_;
  std::vector<std::vector<std::pair<int, bool>>> sessions_of_;  // (session, r is x)
  std::vector<std::map<Prefix, BgpRoute>> loc_;
  std::vector<size_t> received_x_;
  std::vector<size_t> received_y_;
  int rounds_ = 0;
};

Ipv4 HighestAddress(const DeviceModel& m, bool loopbacks_only) {
  Ipv4 best;
  for (const InterfaceConfig& i : m.interfaces) {
    if (!i.address || i.shutdown) continue;
    if (loopbacks_only && !i.IsLoopback()) continue;
    best = std::max(best, i.address->address);
  }
  return best;
}

Ipv4 DefaultRouterId(const DeviceModel& m) {
  Ipv4 id = HighestAddress(m, true);
  return id.value != 0 ? id : HighestAddress(m, false);
}

void Simulator::BuildInterfaces() {
  ifaces_.assign(n_, {});
  for (int r = 0; r < n_; ++r) {
    const DeviceModel& m = M(r);
    for (const InterfaceConfig& cfg : m.interfaces) {
      Iface f;
      f.cfg = &cfg;
      f.up = cfg.address.has_value() && !cfg.shutdown;
      if (auto ifid = InterfaceIdFromName(cfg.name)) {
        Endpoint here{t_.routers()[r], *ifid};
        if (auto peer = t_.Peer(here)) {
          f.physical = true;
          f.peer = *t_.Index(peer->router);
        }
      }
      ifaces_[r].push_back(f);
    }
  }
  for (int r = 0; r < n_; ++r) {
    for (Iface& f : ifaces_[r]) {
      if (!f.physical) continue;
      auto ifid = InterfaceIdFromName(f.cfg->name);
      auto peer = t_.Peer(Endpoint{t_.routers()[r], *ifid});
      std::string peer_name = InterfaceName(peer->ifid);
      const auto& theirs = M(f.peer).interfaces;
      for (size_t k = 0; k < theirs.size(); ++k) {
        if (theirs[k].name == peer_name) f.peer_iface = static_cast<int>(k);
      }
    }
  }
  // A physical interface is live only if the far end is configured and not
  // shut down.
  for (int r = 0; r < n_; ++r) {
    for (Iface& f : ifaces_[r]) {
      if (!f.physical || !f.up) continue;
      if (f.peer_iface < 0 || M(f.peer).interfaces[f.peer_iface].shutdown) f.up = false;
    }
  }
}

bool Simulator::LinkUp(int r, int i) const {
  const Iface& f = ifaces_[r][i];
  if (!f.physical || !f.up || f.peer_iface < 0) return false;
  const Iface& g = ifaces_[f.peer][f.peer_iface];
  if (!g.up) return false;
  const InterfaceAddress& a = *f.cfg->address;
  const InterfaceAddress& b = *g.cfg->address;
  return a.address != b.address && a.Subnet().Contains(b.address) &&
         b.Subnet().Contains(a.address);
}

bool Simulator::SameSubnet(int r, int i) const {
  const Iface& f = ifaces_[r][i];
  const Iface& g = ifaces_[f.peer][f.peer_iface];
  return f.cfg->address->length == g.cfg->address->length &&
         f.cfg->address->Subnet() == g.cfg->address->Subnet();
}

void Simulator::AddConnected() {
  for (int r = 0; r < n_; ++r) {
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      const Iface& f = ifaces_[r][i];
      if (!f.up) continue;
      Entry e;
      e.protocol = Protocol::kConnected;
      e.iface = static_cast<int>(i);
      e.action.kind = ActionKind::kAccept;
      Prefix p = f.cfg->address->Subnet();
      if (!base_[r].Find(p)) base_[r].Offer(p, e);
    }
  }
}

ForwardingAction Simulator::Resolve(const Rib& rib, int r, Ipv4 dst) const {
  ForwardingAction drop;
  const Entry* e = rib.Longest(dst);
  if (e == nullptr) return drop;
  if (e->protocol != Protocol::kConnected) return e->action;
  const Iface& f = ifaces_[r][e->iface];
  ForwardingAction out;
  if (!f.physical || f.cfg->address->address == dst) {
    out.kind = ActionKind::kAccept;
    return out;
  }
  if (f.peer_iface >= 0 && LinkUp(r, e->iface) &&
      M(f.peer).interfaces[f.peer_iface].address->address == dst) {
    out.kind = ActionKind::kForward;
    out.next_hops = {f.peer};
    return out;
  }
  return drop;
}

ForwardingAction Simulator::ResolveBase(int r, Ipv4 dst) {
  auto it = nh_cache_[r].find(dst.value);
  if (it != nh_cache_[r].end()) return it->second;
  ForwardingAction a = Resolve(base_[r], r, dst);
  nh_cache_[r].emplace(dst.value, a);
  return a;
}

// Destinations are keyed; each carries stubs (router, (area, cost)).
template <typename Key>
std::map<Key, std::vector<Path>> Simulator::OspfRoutes(
    const std::map<Key, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>>& dests) {
  std::map<Key, std::vector<Path>> out;
  for (const auto& [key, stubs] : dests) {
    std::vector<bool> local(n_, false);
    for (const auto& [x, ac] : stubs) local[x] = true;

    auto intra = [&](uint32_t area, int r) {
      Path best;
      for (const auto& [x, ac] : stubs) {
        if (ac.first != area) continue;
        if (x == r) {
          best.Offer(ac.second, {});
          continue;
        }
        const ShortestPaths& sp = ospf_spf_[area].at(r);
        if (sp.dist[x] == kUnreachable) continue;
        best.Offer(uint64_t{sp.dist[x]} + ac.second, sp.first_hops[x]);
      }
      return best;
    };
    auto summary_from = [&](int y, uint32_t excluded) {
      uint32_t best = kUnreachable;
      for (uint32_t b : ospf_areas_[y]) {
        if (b == excluded) continue;
        best = std::min(best, intra(b, y).cost);
      }
      return best;
    };

    std::map<int, uint32_t> s0;
    for (int y : abrs_) s0[y] = summary_from(y, 0);
    auto inter0 = [&](int x) {
      Path best;
      const ShortestPaths& sp = ospf_spf_[0].at(x);
      for (int y : abrs_) {
        if (y == x || sp.dist[y] == kUnreachable || s0[y] == kUnreachable) continue;
        best.Offer(uint64_t{sp.dist[y]} + s0[y], sp.first_hops[y]);
      }
      return best;
    };
    std::map<int, Path> inter0_at;
    for (int y : abrs_) inter0_at[y] = inter0(y);

    std::vector<Path>& routes = out[key];
    routes.assign(n_, Path());
    for (int r = 0; r < n_; ++r) {
      if (ospf_areas_[r].empty() || local[r]) continue;
      Path best;
      for (uint32_t a : ospf_areas_[r]) {
        Path p = intra(a, r);
        best.Offer(p.cost, p.hops);
      }
      if (!best.reachable()) {
        if (ospf_areas_[r].count(0)) {
          best = inter0_at.count(r) ? inter0_at[r] : inter0(r);
        } else {
          for (uint32_t a : ospf_areas_[r]) {
            const ShortestPaths& sp = ospf_spf_[a].at(r);
            for (int x : abrs_) {
              if (x == r || !ospf_areas_[x].count(a) || sp.dist[x] == kUnreachable) continue;
              uint32_t sa = std::min(summary_from(x, a), inter0_at[x].cost);
              if (sa == kUnreachable) continue;
              best.Offer(uint64_t{sp.dist[x]} + sa, sp.first_hops[x]);
            }
          }
        }
      }
      routes[r] = std::move(best);
    }
  }
  return out;
}

void Simulator::RunOspf() {
  ospf_areas_.assign(n_, {});
  std::vector<Ipv4> rid(n_);
  std::map<Ipv4, int> rid_count;
  for (int r = 0; r < n_; ++r) {
    if (!M(r).ospf) continue;
    rid[r] = M(r).ospf->router_id.value_or(DefaultRouterId(M(r)));
    ++rid_count[rid[r]];
    for (const Iface& f : ifaces_[r]) {
      if (f.up && f.cfg->ospf_area) ospf_areas_[r].insert(*f.cfg->ospf_area);
    }
  }
  auto enabled = [&](int r, int i) {
    const Iface& f = ifaces_[r][i];
    return M(r).ospf.has_value() && f.up && f.cfg->ospf_area.has_value();
  };
  // Routers sharing a router-id cannot hold adjacencies.
  auto isolated = [&](int r) { return rid_count[rid[r]] > 1; };

  ospf_graph_.clear();
  ospf_members_.clear();
  ospf_spf_.clear();
  for (int r = 0; r < n_; ++r) {
    for (uint32_t a : ospf_areas_[r]) ospf_members_[a].push_back(r);
  }
  for (auto& [a, members] : ospf_members_) ospf_graph_[a].assign(n_, {});
  for (int r = 0; r < n_; ++r) {
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      if (!enabled(r, i) || !LinkUp(r, i) || !SameSubnet(r, i)) continue;
      const Iface& f = ifaces_[r][i];
      if (!enabled(f.peer, f.peer_iface)) continue;
      uint32_t area = *f.cfg->ospf_area;
      if (*M(f.peer).interfaces[f.peer_iface].ospf_area != area) continue;
      if (isolated(r) || isolated(f.peer)) continue;
      ospf_graph_[area][r].push_back({f.peer, f.cfg->ospf_cost.value_or(1)});
    }
  }
  for (auto& [a, members] : ospf_members_) {
    for (int r : members) ospf_spf_[a][r] = Dijkstra(ospf_graph_[a], r);
  }
  abrs_.clear();
  for (int r = 0; r < n_; ++r) {
    if (ospf_areas_[r].count(0) && ospf_areas_[r].size() > 1) abrs_.push_back(r);
  }

  std::map<Prefix, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>> dests;
  for (int r = 0; r < n_; ++r) {
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      if (!enabled(r, i)) continue;
      const InterfaceConfig& c = *ifaces_[r][i].cfg;
      dests[c.address->Subnet()].push_back({r, {*c.ospf_area, c.ospf_cost.value_or(1)}});
    }
  }
  for (auto& [p, paths] : OspfRoutes(dests)) {
    for (int r = 0; r < n_; ++r) {
      if (!paths[r].reachable() || paths[r].hops.empty()) continue;
      Entry e;
      e.protocol = Protocol::kOspf;
      e.metric = paths[r].cost;
      e.action = {ActionKind::kForward, paths[r].hops};
      base_[r].Offer(p, e);
    }
  }
}

void Simulator::RunIsis() {
  std::vector<bool> on(n_, false);
  for (int r = 0; r < n_; ++r) on[r] = M(r).isis.has_value();
  auto enabled = [&](int r, int i) { return on[r] && ifaces_[r][i].up && ifaces_[r][i].cfg->isis; };
  Graph l1(n_), l2(n_);
  std::vector<bool> attached(n_, false);
  bool any = false;
  for (int r = 0; r < n_; ++r) {
    if (!on[r]) continue;
    any = true;
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      if (!enabled(r, i) || !LinkUp(r, i) || !SameSubnet(r, i)) continue;
      const Iface& f = ifaces_[r][i];
      if (!enabled(f.peer, f.peer_iface)) continue;
      const IsisProcess& a = *M(r).isis;
      const IsisProcess& b = *M(f.peer).isis;
      uint32_t metric = f.cfg->isis_metric.value_or(kDefaultIsisMetric);
      if (HasLevel1(a.level) && HasLevel1(b.level) && a.area == b.area) {
        l1[r].push_back({f.peer, metric});
      }
      if (HasLevel2(a.level) && HasLevel2(b.level)) {
        l2[r].push_back({f.peer, metric});
        attached[r] = true;
      }
    }
  }
  if (!any) return;
  std::vector<ShortestPaths> sp1(n_), sp2(n_);
  for (int r = 0; r < n_; ++r) {
    if (!on[r]) continue;
    if (HasLevel1(M(r).isis->level)) sp1[r] = Dijkstra(l1, r);
    if (HasLevel2(M(r).isis->level)) sp2[r] = Dijkstra(l2, r);
  }
  // (router, metric) advertisers per prefix.
  std::map<Prefix, std::vector<std::pair<int, uint32_t>>> dests;
  for (int r = 0; r < n_; ++r) {
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      if (!enabled(r, i)) continue;
      const InterfaceConfig& c = *ifaces_[r][i].cfg;
      uint32_t m = c.IsLoopback() ? 0 : c.isis_metric.value_or(kDefaultIsisMetric);
      dests[c.address->Subnet()].push_back({r, m});
    }
  }
  auto level1 = [&](int r, const std::vector<std::pair<int, uint32_t>>& adv) {
    Path best;
    if (!HasLevel1(M(r).isis->level)) return best;
    for (const auto& [x, m] : adv) {
      if (x == r) {
        best.Offer(m, {});
      } else if (sp1[r].dist[x] != kUnreachable) {
        best.Offer(uint64_t{sp1[r].dist[x]} + m, sp1[r].first_hops[x]);
      }
    }
    return best;
  };
  for (const auto& [p, adv] : dests) {
    // What each L2-capable router injects into level 2.
    std::vector<uint32_t> leaked(n_, kUnreachable);
    for (int x = 0; x < n_; ++x) {
      if (!on[x] || !HasLevel2(M(x).isis->level)) continue;
      for (const auto& [y, m] : adv) {
        if (y == x) leaked[x] = std::min(leaked[x], m);
      }
      if (M(x).isis->level == IsisLevel::kLevel12) leaked[x] = std::min(leaked[x], level1(x, adv).cost);
    }
    for (int r = 0; r < n_; ++r) {
      if (!on[r]) continue;
      bool local = std::any_of(adv.begin(), adv.end(), [&](const auto& a) { return a.first == r; });
      if (local) continue;
      Path best = level1(r, adv);
      if (!best.reachable() && HasLevel2(M(r).isis->level)) {
        for (int x = 0; x < n_; ++x) {
          if (x == r || leaked[x] == kUnreachable || sp2[r].dist[x] == kUnreachable) continue;
          best.Offer(uint64_t{sp2[r].dist[x]} + leaked[x], sp2[r].first_hops[x]);
        }
      }
      if (!best.reachable() || best.hops.empty()) continue;
      Entry e;
      e.protocol = Protocol::kIsis;
      e.metric = best.cost;
      e.action = {ActionKind::kForward, best.hops};
      base_[r].Offer(p, e);
    }
  }
  // Level-1 routers default toward the nearest attached level-1-2 router.
  for (int r = 0; r < n_; ++r) {
    if (!on[r] || M(r).isis->level != IsisLevel::kLevel1) continue;
    Path best;
    for (int x = 0; x < n_; ++x) {
      if (x == r || !attached[x] || sp1[r].dist[x] == kUnreachable) continue;
      best.Offer(sp1[r].dist[x], sp1[r].first_hops[x]);
    }
    if (!best.reachable()) continue;
    Entry e;
    e.protocol = Protocol::kIsis;
    e.metric = best.cost;
    e.action = {ActionKind::kForward, best.hops};
    base_[r].Offer(Prefix(Ipv4{0}, 0), e);
  }
}

void Simulator::AddStatics() {
  for (int r = 0; r < n_; ++r) {
    std::vector<std::pair<Prefix, Entry>> add;
    for (const StaticRoute& s : M(r).statics) {
      Entry e;
      e.protocol = Protocol::kStatic;
      if (s.next_hop) e.next_hop = *s.next_hop;
      if (s.interface) {
        if (absl::AsciiStrToLower(*s.interface) == "null0") {
          e.action.kind = ActionKind::kDrop;
        } else {
          int idx = -1;
          for (size_t i = 0; i < ifaces_[r].size(); ++i) {
            if (ifaces_[r][i].cfg->name == *s.interface) idx = static_cast<int>(i);
          }
          if (idx < 0 || !ifaces_[r][idx].up) continue;
          const Iface& f = ifaces_[r][idx];
          if (f.physical) {
            if (!LinkUp(r, idx)) continue;
            e.action = {ActionKind::kForward, {f.peer}};
          } else {
            e.action.kind = ActionKind::kAccept;
          }
        }
      } else if (s.next_hop) {
        ForwardingAction a = Resolve(base_[r], r, *s.next_hop);
        if (a.kind != ActionKind::kForward) continue;
        e.action = a;
      } else {
        continue;
      }
      add.push_back({s.prefix, e});
    }
    for (auto& [p, e] : add) base_[r].Offer(p, e);
  }
}

void Simulator::BuildBase() {
  BuildInterfaces();
  base_.assign(n_, Rib());
  nh_cache_.assign(n_, {});
  AddConnected();
  RunOspf();
  RunIsis();
  AddStatics();
}

std::optional<int> Simulator::TransportEndpoint(int from, Ipv4 addr) const {
  std::vector<bool> seen(n_, false);
  std::deque<int> queue = {from};
  seen[from] = true;
  std::optional<int> found;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    ForwardingAction a = Resolve(base_[x], x, addr);
    if (a.kind == ActionKind::kAccept) {
      if (!found || x < *found) found = x;
      continue;
    }
    if (a.kind != ActionKind::kForward) continue;
    for (int h : a.next_hops) {
      if (!seen[h]) {
        seen[h] = true;
        queue.push_back(h);
      }
    }
  }
  return found;
}

std::optional<Ipv4> Simulator::SourceAddress(int r, const BgpNeighbor& n) const {
  if (n.update_source) {
    for (const Iface& f : ifaces_[r]) {
      if (f.cfg->name == *n.update_source) {
        if (!f.up) return std::nullopt;
        return f.cfg->address->address;
      }
    }
    return std::nullopt;
  }
  for (size_t i = 0; i < ifaces_[r].size(); ++i) {
    const Iface& f = ifaces_[r][i];
    if (f.physical && f.up && f.cfg->address->Subnet().Contains(n.address)) {
      return f.cfg->address->address;
    }
  }
  ForwardingAction a = Resolve(base_[r], r, n.address);
  if (a.kind != ActionKind::kForward) return std::nullopt;
  for (const Iface& f : ifaces_[r]) {
    if (f.physical && f.up && f.peer == a.next_hops.front()) return f.cfg->address->address;
  }
  return std::nullopt;
}

void Simulator::EstablishSessions() {
  speaker_.assign(n_, false);
  asn_.assign(n_, 0);
  bgp_id_.assign(n_, Ipv4());
  cluster_id_.assign(n_, Ipv4());
  reflector_.assign(n_, false);
  for (int r = 0; r < n_; ++r) {
    const auto& bgp = M(r).bgp;
    if (!bgp || bgp->asn == 0) continue;
    speaker_[r] = true;
    asn_[r] = bgp->asn;
    bgp_id_[r] = bgp->router_id.value_or(DefaultRouterId(M(r)));
    cluster_id_[r] = bgp->cluster_id.value_or(bgp_id_[r]);
    reflector_[r] = bgp->cluster_id.has_value() ||
                    std::any_of(bgp->neighbors.begin(), bgp->neighbors.end(),
                                [](const BgpNeighbor& n) { return n.route_reflector_client; });
  }
  sessions_.clear();
  sessions_of_.assign(n_, {});
  for (int x = 0; x < n_; ++x) {
    if (!speaker_[x]) continue;
    for (const BgpNeighbor& nx : M(x).bgp->neighbors) {
      if (nx.shutdown || !nx.remote_as) continue;
      auto src_x = SourceAddress(x, nx);
      if (!src_x) continue;
      auto y_opt = TransportEndpoint(x, nx.address);
      if (!y_opt || *y_opt <= x || !speaker_[*y_opt]) continue;
      int y = *y_opt;
      if (*nx.remote_as != asn_[y]) continue;
      const BgpNeighbor* ny = M(y).bgp->FindNeighbor(*src_x);
      if (ny == nullptr || ny->shutdown || ny->remote_as != asn_[x]) continue;
      auto src_y = SourceAddress(y, *ny);
      if (!src_y || *src_y != nx.address) continue;
      if (TransportEndpoint(y, *src_x) != x) continue;
      bool ebgp = asn_[x] != asn_[y];
      if (ebgp) {
        // Single-hop: both ends on one live link.
        bool direct = false;
        for (size_t i = 0; i < ifaces_[x].size(); ++i) {
          const Iface& f = ifaces_[x][i];
          if (f.peer != y || !LinkUp(x, i)) continue;
          if (f.cfg->address->address == *src_x &&
              M(y).interfaces[f.peer_iface].address->address == nx.address) {
            direct = true;
          }
        }
        if (!direct) continue;
      }
      int id = static_cast<int>(sessions_.size());
      sessions_.push_back({x, y, &nx, ny, *src_x, *src_y, ebgp});
      sessions_of_[x].push_back({id, true});
      sessions_of_[y].push_back({id, false});
    }
  }
}

std::optional<BgpRoute> Simulator::Export(const Session& s, bool forward, const Prefix& p,
                                          const BgpRoute& r) const {
  int x = forward ? s.x : s.y;
  int y = forward ? s.y : s.x;
  const BgpNeighbor& nx = forward ? *s.nx : *s.ny;
  const BgpNeighbor& ny = forward ? *s.ny : *s.nx;
  Ipv4 src = forward ? s.src_x : s.src_y;
  if (r.from_router == y) return std::nullopt;
  BgpRoute out = r;
  if (s.ebgp) {
    out.as_path.insert(out.as_path.begin(), asn_[x]);
    out.next_hop = src;
    out.local_pref = kDefaultLocalPref;
    out.originator_id.reset();
    out.cluster_list.clear();
  } else if (r.local) {
    out.next_hop = src;
  } else if (r.from_ebgp) {
    if (nx.next_hop_self) out.next_hop = src;
  } else {
    if (!r.from_client && !nx.route_reflector_client) return std::nullopt;
    if (!out.originator_id) out.originator_id = r.from_router_id;
    out.cluster_list.insert(out.cluster_list.begin(), cluster_id_[x]);
  }
  if (nx.route_map_out && !ApplyRouteMap(M(x), *nx.route_map_out, p, out)) return std::nullopt;

  // Receiver side.
  if (s.ebgp) {
    if (std::find(out.as_path.begin(), out.as_path.end(), asn_[y]) != out.as_path.end()) {
      return std::nullopt;
    }
  } else {
    if (out.originator_id && *out.originator_id == bgp_id_[y]) return std::nullopt;
    if (reflector_[y] && std::find(out.cluster_list.begin(), out.cluster_list.end(),
                                   cluster_id_[y]) != out.cluster_list.end()) {
      return std::nullopt;
    }
  }
  if (ny.route_map_in && !ApplyRouteMap(M(y), *ny.route_map_in, p, out)) return std::nullopt;
  out.local = false;
  out.session = static_cast<int>(&s - sessions_.data());
  out.from_router = x;
  out.from_router_id = bgp_id_[x];
  out.from_ebgp = s.ebgp;
  out.from_client = ny.route_reflector_client;
  out.igp_metric = 0;
  out.hops.clear();
  return out;
}

bool Simulator::Better(const BgpRoute& a, const BgpRoute& b) const {
  if (a.local != b.local) return a.local;
  if (a.local_pref != b.local_pref) return a.local_pref > b.local_pref;
  if (a.as_path.size() != b.as_path.size()) return a.as_path.size() < b.as_path.size();
  if (a.from_ebgp != b.from_ebgp) return a.from_ebgp;
  if (a.igp_metric != b.igp_metric) return a.igp_metric < b.igp_metric;
  Ipv4 ida = a.originator_id.value_or(a.from_router_id);
  Ipv4 idb = b.originator_id.value_or(b.from_router_id);
  if (ida != idb) return ida < idb;
  if (a.from_router != b.from_router) return a.from_router < b.from_router;
  if (a.next_hop != b.next_hop) return a.next_hop < b.next_hop;
  return a.session < b.session;
}

absl::Status Simulator::RunBgp() {
  EstablishSessions();
  std::vector<std::map<Prefix, BgpRoute>> origin(n_);
  std::set<Prefix> prefixes;
  for (int r = 0; r < n_; ++r) {
    if (!speaker_[r]) continue;
    for (const Prefix& p : M(r).bgp->networks) {
      if (!base_[r].Find(p)) continue;
      BgpRoute route;
      route.local = true;
      route.from_router = r;
      route.from_router_id = bgp_id_[r];
      origin[r][p] = route;
      prefixes.insert(p);
    }
  }
  std::vector<int> order;
  for (int r = 0; r < n_; ++r) {
    if (speaker_[r]) order.push_back(r);
  }
  if (options_.reverse_speaker_order) std::reverse(order.begin(), order.end());

  loc_ = origin;
  const int cap = std::max(8, 2 * n_ * static_cast<int>(std::max<size_t>(1, prefixes.size())));
  rounds_ = 0;
  received_x_.assign(sessions_.size(), 0);
  received_y_.assign(sessions_.size(), 0);
  while (true) {
    if (rounds_ >= cap) {
      return absl::FailedPreconditionError(
          absl::StrCat("BGP did not converge after ", rounds_, " rounds"));
    }
    ++rounds_;
    std::vector<std::map<Prefix, BgpRoute>> next = origin;
    std::vector<size_t> rx(sessions_.size(), 0), ry(sessions_.size(), 0);
    for (int y : order) {
      std::map<Prefix, BgpRoute>& best = next[y];
      for (const auto& [sid, y_is_x] : sessions_of_[y]) {
        const Session& s = sessions_[sid];
        int x = y_is_x ? s.y : s.x;
        for (const auto& [p, route] : loc_[x]) {
          std::optional<BgpRoute> in = Export(s, !y_is_x, p, route);
          if (!in) continue;
          ++(y_is_x ? rx : ry)[sid];
          ForwardingAction a = ResolveBase(y, in->next_hop);
          if (a.kind != ActionKind::kForward) continue;
          const Entry* e = base_[y].Longest(in->next_hop);
          in->igp_metric = e ? e->metric : 0;
          in->hops = a.next_hops;
          auto it = best.find(p);
          if (it == best.end()) {
            best.emplace(p, std::move(*in));
          } else if (Better(*in, it->second)) {
            it->second = std::move(*in);
          }
        }
      }
    }
    bool stable = next == loc_;
    loc_ = std::move(next);
    received_x_ = std::move(rx);
    received_y_ = std::move(ry);
    if (stable) break;
  }
  return absl::OkStatus();
}

void Simulator::Redistribute() {
  // ASBR -> eBGP-learned prefixes it injects as type-2 externals.
  std::map<int, std::set<Prefix>> externals;
  for (int r = 0; r < n_; ++r) {
    const auto& ospf = M(r).ospf;
    if (!ospf || !ospf->redistribute_bgp_asn || !speaker_[r]) continue;
    if (*ospf->redistribute_bgp_asn != asn_[r] || ospf_areas_[r].empty()) continue;
    for (const auto& [p, route] : loc_[r]) {
      if (!route.local && route.from_ebgp) externals[r].insert(p);
    }
  }
  if (externals.empty()) return;
  std::map<int, std::vector<std::pair<int, std::pair<uint32_t, uint32_t>>>> dests;
  for (const auto& [x, ps] : externals) {
    for (uint32_t a : ospf_areas_[x]) dests[x].push_back({x, {a, 0}});
  }
  auto to_asbr = OspfRoutes(dests);
  std::map<Prefix, std::vector<int>> sources;
  for (const auto& [x, ps] : externals) {
    for (const Prefix& p : ps) sources[p].push_back(x);
  }
  for (const auto& [p, xs] : sources) {
    for (int r = 0; r < n_; ++r) {
      if (ospf_areas_[r].empty()) continue;
      if (std::find(xs.begin(), xs.end(), r) != xs.end()) continue;
      Path best;
      for (int x : xs) {
        const Path& path = to_asbr[x][r];
        if (path.reachable() && !path.hops.empty()) best.Offer(path.cost, path.hops);
      }
      if (!best.reachable()) continue;
      Entry e;
      e.protocol = Protocol::kOspf;
      e.metric = kExternalMetric;
      e.action = {ActionKind::kForward, best.hops};
      final_[r].Offer(p, e);
    }
  }
}

absl::StatusOr<SimulationResult> Simulator::Finish(const std::vector<Prefix>& universe) {
  if (absl::Status s = RunBgp(); !s.ok()) return s;
  final_ = base_;
  for (int r = 0; r < n_; ++r) {
    for (const auto& [p, route] : loc_[r]) {
      if (route.local) continue;
      Entry e;
      e.protocol = route.from_ebgp ? Protocol::kEbgp : Protocol::kIbgp;
      e.metric = route.igp_metric;
      e.action = {ActionKind::kForward, route.hops};
      e.local_pref = route.local_pref;
      e.as_path_length = static_cast<uint32_t>(route.as_path.size());
      e.origin_router_id = route.originator_id.value_or(route.from_router_id);
      e.next_hop = route.next_hop;
      e.learned_from = t_.routers()[route.from_router];
      final_[r].Offer(p, e);
    }
  }
  Redistribute();

  std::vector<Ipv4> sources(n_);
  for (int r = 0; r < n_; ++r) {
    if (const InterfaceConfig* lo = M(r).FindInterface("Loopback0"); lo && lo->address) {
      sources[r] = lo->address->address;
    }
  }
  SimulationResult result;
  result.table = ForwardingTable(t_.routers(), universe, sources);
  const ForwardingTable& table = result.table;
  for (size_t p = 0; p < table.universe().size(); ++p) {
    Ipv4 dst = table.universe()[p].network;
    for (int r = 0; r < n_; ++r) {
      result.table.SetAction(static_cast<int>(p), r, Resolve(final_[r], r, dst));
    }
  }
  for (int r = 0; r < n_; ++r) {
    for (size_t i = 0; i < ifaces_[r].size(); ++i) {
      if (!LinkUp(r, i)) continue;
      const Iface& f = ifaces_[r][i];
      const DeviceModel& peer = M(f.peer);
      HopFilter filter;
      if (f.cfg->acl_out) {
        auto it = M(r).acls.find(*f.cfg->acl_out);
        if (it != M(r).acls.end()) filter.egress = it->second;
      }
      const InterfaceConfig& pc = peer.interfaces[f.peer_iface];
      if (pc.acl_in) {
        auto it = peer.acls.find(*pc.acl_in);
        if (it != peer.acls.end()) filter.ingress = it->second;
      }
      if (filter.egress || filter.ingress) result.table.SetHopFilter(r, f.peer, std::move(filter));
    }
  }
  for (int r = 0; r < n_; ++r) {
    std::vector<RouteEntry>& rib = result.ribs[t_.routers()[r]];
    for (const auto& [p, e] : final_[r].routes()) {
      RouteEntry out;
      out.prefix = p;
      out.protocol = e.protocol;
      out.igp_metric = e.metric;
      out.local_pref = e.local_pref;
      out.as_path_length = e.as_path_length;
      out.origin_router_id = e.origin_router_id;
      out.next_hop = e.next_hop;
      out.learned_from = e.learned_from;
      out.action = e.action;
      rib.push_back(std::move(out));
    }
  }
  for (size_t s = 0; s < sessions_.size(); ++s) {
    BgpSessionState st;
    st.a = t_.routers()[sessions_[s].x];
    st.b = t_.routers()[sessions_[s].y];
    st.ebgp = sessions_[s].ebgp;
    st.routes_to_a = received_x_[s];
    st.routes_to_b = received_y_[s];
    result.sessions.push_back(st);
  }
  result.bgp_rounds = rounds_;
  return result;
}

}  // namespace

absl::string_view ProtocolName(Protocol p) {
  switch (p) {
    case Protocol::kConnected:
      return "connected";
    case Protocol::kStatic:
      return "static";
    case Protocol::kOspf:
      return "ospf";
    case Protocol::kIsis:
      return "isis";
    case Protocol::kEbgp:
      return "ebgp";
    case Protocol::kIbgp:
      return "ibgp";
  }
  return "unknown";
}

int AdminDistance(Protocol p) {
  switch (p) {
    case Protocol::kConnected:
      return 0;
    case Protocol::kStatic:
      return 1;
    case Protocol::kEbgp:
      return 20;
    case Protocol::kOspf:
      return 110;
    case Protocol::kIsis:
      return 115;
    case Protocol::kIbgp:
      return 200;
  }
  return 255;
}

size_t SimulationResult::RouteCount() const {
  size_t n = 0;
  for (const auto& [r, rib] : ribs) n += rib.size();
  return n;
}

absl::StatusOr<SimulationResult> ComputeDataplane(const std::map<std::string, DeviceModel>& models,
                                                  const Topology& t,
                                                  const std::vector<Prefix>& universe,
                                                  const SimulationOptions& options) {
  Simulator sim(models, t, options);
  sim.BuildBase();
  return sim.Finish(universe);
}

bool ReachableTransport(const std::map<std::string, DeviceModel>& models, const Topology& t,
                        absl::string_view router, Ipv4 address) {
  auto r = t.Index(router);
  if (!r) return false;
  Simulator sim(models, t, {});
  sim.BuildBase();
  return sim.TransportEndpoint(*r, address).has_value();
}

size_t CountRouteDifferences(const SimulationResult& a, const SimulationResult& b) {
  size_t diff = 0;
  auto count = [&](const SimulationResult& x, const SimulationResult& y) {
    for (const auto& [router, rib] : x.ribs) {
      auto it = y.ribs.find(router);
      for (const RouteEntry& e : rib) {
        if (it == y.ribs.end() ||
            std::find(it->second.begin(), it->second.end(), e) == it->second.end()) {
          ++diff;
        }
      }
    }
  };
  count(a, b);
  count(b, a);
  return diff;
}

}  // namespace netfix
