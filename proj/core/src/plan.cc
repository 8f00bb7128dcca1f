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

#include "netfix/plan.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <random>
#include <set>
#include <tuple>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "netfix/rng.h"

namespace netfix {
namespace {

using RouterSet = std::set<std::string, std::less<>>;

constexpr uint32_t kOspfLinkCost = 10;
constexpr uint32_t kDefaultLocalPref = 100;

Ipv4 Addr(uint32_t v) { return Ipv4{v}; }
Ipv4 Addr(const char* text) { return *Ipv4::Parse(text); }

int InducedDegree(const Topology& t, const std::string& r, const RouterSet& allowed) {
  int d = 0;
  for (const std::string& n : t.Neighbors(r)) d += allowed.contains(n) ? 1 : 0;
  return d;
}

// Highest induced degree, then smallest name.
std::string Hub(const Topology& t, const RouterSet& members) {
  std::string best;
  int best_degree = -1;
  for (const std::string& r : members) {
    int d = InducedDegree(t, r, members);
    if (d > best_degree) {
      best = r;
      best_degree = d;
    }
  }
  return best;
}

std::vector<std::string> BfsOrder(const Topology& t, const std::string& start,
                                  const RouterSet& allowed) {
  std::vector<std::string> order{start};
  RouterSet seen{start};
  for (size_t i = 0; i < order.size(); ++i) {
    for (const std::string& n : t.Neighbors(order[i])) {
      if (allowed.contains(n) && seen.insert(n).second) order.push_back(n);
    }
  }
  return order;
}

std::map<std::string, int> BfsDistance(const Topology& t, const std::string& start,
                                       const RouterSet& allowed) {
  std::map<std::string, int> dist{{start, 0}};
  std::deque<std::string> queue{start};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const std::string& n : t.Neighbors(u)) {
      if (allowed.contains(n) && !dist.contains(n)) {
        dist[n] = dist[u] + 1;
        queue.push_back(n);
      }
    }
  }
  return dist;
}

// Core/edge split used for OSPF areas and IS-IS levels.
struct Hierarchy {
  RouterSet core;
  std::map<std::string, std::string> attach;  // router -> core router it hangs off
  std::map<std::string, uint32_t> area_index;  // attach router -> 1..k

  bool IsCore(const std::string& r) const { return core.contains(r); }
  uint32_t AreaOf(const std::string& r) const {
    return IsCore(r) ? 0 : area_index.at(attach.at(r));
  }
};

Hierarchy BuildHierarchy(const Topology& t, const RouterSet& members) {
  Hierarchy h;
  std::vector<std::string> order = BfsOrder(t, Hub(t, members), members);
  size_t core_size = std::max<size_t>(2, (members.size() + 2) / 3);
  std::deque<std::string> queue;
  for (size_t i = 0; i < core_size && i < order.size(); ++i) {
    h.core.insert(order[i]);
    h.attach[order[i]] = order[i];
    queue.push_back(order[i]);
  }
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const std::string& n : t.Neighbors(u)) {
      if (members.contains(n) && !h.attach.contains(n)) {
        h.attach[n] = h.attach[u];
        queue.push_back(n);
      }
    }
  }
  uint32_t next = 1;
  for (const std::string& r : order) {
    if (h.IsCore(r)) continue;
    const std::string& a = h.attach.at(r);
    if (!h.area_index.contains(a)) h.area_index[a] = next++;
  }
  return h;
}

std::string IsisSystemId(Ipv4 loopback) {
  char digits[13];
  std::snprintf(digits, sizeof(digits), "%03u%03u%03u%03u", (loopback.value >> 24) & 255,
                (loopback.value >> 16) & 255, (loopback.value >> 8) & 255, loopback.value & 255);
  std::string d(digits);
  return absl::StrCat(d.substr(0, 4), ".", d.substr(4, 4), ".", d.substr(8, 4));
}

std::string IsisArea(uint32_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "49.%04u", index);
  return buf;
}

std::string AclName(int ifid, absl::string_view direction) {
  return absl::StrCat("ACL-GI0-", ifid, "-", direction);
}

}  // namespace

absl::string_view IgpName(Igp igp) { return igp == Igp::kOspf ? "ospf" : "isis"; }

absl::string_view SessionKindName(SessionKind kind) {
  switch (kind) {
    case SessionKind::kEbgp:
      return "ebgp";
    case SessionKind::kIbgp:
      return "ibgp";
    case SessionKind::kRrClient:
      return "rr-client";
  }
  return "ibgp";
}

LinkInterface* RouterPlan::FindInterface(int ifid) {
  for (LinkInterface& i : interfaces) {
    if (i.ifid == ifid) return &i;
  }
  return nullptr;
}

const LinkInterface* RouterPlan::FindInterface(int ifid) const {
  for (const LinkInterface& i : interfaces) {
    if (i.ifid == ifid) return &i;
  }
  return nullptr;
}

const AsPlan* LogicalPlan::AsOf(absl::string_view router) const {
  for (const AsPlan& as : ases) {
    if (std::binary_search(as.members.begin(), as.members.end(), router)) return &as;
  }
  return nullptr;
}

bool LogicalPlan::IsAsbr(absl::string_view router) const {
  for (const Session& s : sessions) {
    if (s.kind == SessionKind::kEbgp && (s.a.router == router || s.b.router == router)) {
      return true;
    }
  }
  return false;
}

std::vector<Prefix> LogicalPlan::Universe() const {
  std::set<Prefix> out;
  for (const auto& [name, r] : routers) out.insert(Prefix::Host(r.loopback()));
  for (const OriginatedPrefix& o : originated) out.insert(o.prefix);
  return {out.begin(), out.end()};
}

std::vector<std::vector<std::string>> PartitionAses(const Topology& t,
                                                    const FeatureSet& features,
                                                    uint64_t seed) {
  if (!features.contains(Feature::kEbgp) || t.size() < 2) return {t.routers()};
  Rng rng(DeriveSeed(seed, "as-partition"));
  size_t n = t.size();
  size_t max_as = std::max<size_t>(2, (n + 24) / 25);
  size_t m = std::uniform_int_distribution<size_t>(2, max_as)(rng);

  RouterSet all(t.routers().begin(), t.routers().end());
  // AS0 is a BFS ball holding half the routers; the largest component of
  // the complement seeds the other ASes. Among all roots, prefer a
  // complement component of at least 4 routers, then the most links leaving
  // it, then its size, then the higher-degree root.
  RouterSet as0, rest;
  std::tuple<bool, size_t, size_t, int> best_key{false, 0, 0, -1};
  for (const std::string& root : t.routers()) {
    std::vector<std::string> order = BfsOrder(t, root, all);
    RouterSet ball(order.begin(), order.begin() + (n + 1) / 2);
    RouterSet remainder;
    for (const std::string& r : t.routers()) {
      if (!ball.contains(r)) remainder.insert(r);
    }
    if (remainder.empty()) continue;
    RouterSet seen, largest;
    for (const std::string& r : remainder) {
      if (seen.contains(r)) continue;
      std::vector<std::string> comp = BfsOrder(t, r, remainder);
      seen.insert(comp.begin(), comp.end());
      if (comp.size() > largest.size()) largest = RouterSet(comp.begin(), comp.end());
    }
    size_t cut = 0;
    for (const Link& l : t.links()) {
      cut += largest.contains(l.a.router) != largest.contains(l.b.router) ? 1 : 0;
    }
    std::tuple<bool, size_t, size_t, int> key{largest.size() >= 4, cut, largest.size(),
                                              t.Degree(root)};
    if (as0.empty() || key > best_key) {
      best_key = key;
      as0 = std::move(ball);
      rest = std::move(remainder);
    }
  }
  m = std::min(m, rest.size() + 1);

  // Components of the remainder, largest first.
  std::vector<std::vector<std::string>> components;
  RouterSet seen;
  for (const std::string& r : rest) {
    if (seen.contains(r)) continue;
    std::vector<std::string> comp = BfsOrder(t, r, rest);
    seen.insert(comp.begin(), comp.end());
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  std::vector<std::string> seeds;
  const auto& largest = components.front();
  seeds.push_back(largest[std::uniform_int_distribution<size_t>(0, largest.size() - 1)(rng)]);
  std::vector<std::string> shuffled(rest.begin(), rest.end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (const std::string& r : shuffled) {
    if (seeds.size() >= m - 1) break;
    if (r != seeds.front()) seeds.push_back(r);
  }

  std::map<std::string, size_t> owner;
  std::deque<std::string> queue;
  for (size_t i = 0; i < seeds.size(); ++i) {
    owner[seeds[i]] = i;
    queue.push_back(seeds[i]);
  }
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const std::string& v : t.Neighbors(u)) {
      if (rest.contains(v) && !owner.contains(v)) {
        owner[v] = owner[u];
        queue.push_back(v);
      }
    }
  }
  std::vector<std::vector<std::string>> out(seeds.size() + 1);
  for (const std::string& r : t.routers()) {
    auto it = owner.find(r);
    out[it == owner.end() ? 0 : it->second + 1].push_back(r);
  }
  return out;
}

absl::StatusOr<LogicalPlan> BuildPlan(const Topology& t, const FeatureSet& features,
                                      uint64_t seed) {
  if (!IsClosed(features)) {
    return absl::InvalidArgumentError("feature set is not dependency-closed");
  }
  auto has = [&](Feature f) { return features.contains(f); };

  LogicalPlan plan;
  plan.seed = seed;
  plan.features = features;
  plan.topology = t;

  std::vector<std::vector<std::string>> parts = PartitionAses(t, features, seed);
  std::map<std::string, size_t> as_index;
  for (size_t i = 0; i < parts.size(); ++i) {
    AsPlan as;
    as.asn = kFirstAsn + static_cast<uint32_t>(i);
    as.members = parts[i];
    as.igp = has(Feature::kIsis) && i % 2 == 1 ? Igp::kIsis : Igp::kOspf;
    bool want_hierarchy = as.igp == Igp::kOspf ? has(Feature::kOspfMultiArea)
                                               : has(Feature::kIsisMultiLevel);
    as.hierarchical = want_hierarchy && as.members.size() >= 4;
    as.ibgp = has(Feature::kIbgp) && as.members.size() >= 2;
    for (const std::string& r : as.members) as_index[r] = i;
    plan.ases.push_back(std::move(as));
  }

  auto any_as = [&](auto pred) {
    return std::any_of(plan.ases.begin(), plan.ases.end(), pred);
  };
  if (has(Feature::kIsis) && !any_as([](const AsPlan& a) { return a.igp == Igp::kIsis; })) {
    return absl::FailedPreconditionError("isis requested but topology yields a single AS");
  }
  if (has(Feature::kOspfMultiArea) &&
      !any_as([](const AsPlan& a) { return a.igp == Igp::kOspf && a.hierarchical; })) {
    return absl::FailedPreconditionError("ospf-multi-area needs an OSPF AS with >= 4 routers");
  }
  if (has(Feature::kIsisMultiLevel) &&
      !any_as([](const AsPlan& a) { return a.igp == Igp::kIsis && a.hierarchical; })) {
    return absl::FailedPreconditionError("isis-multi-level needs an IS-IS AS with >= 4 routers");
  }
  if (has(Feature::kRouteReflection) &&
      !any_as([](const AsPlan& a) { return a.ibgp && a.members.size() >= 4; })) {
    return absl::FailedPreconditionError("route-reflection needs an AS with >= 4 routers");
  }
  if (has(Feature::kIbgp) && !any_as([](const AsPlan& a) { return a.ibgp; })) {
    return absl::FailedPreconditionError("ibgp needs an AS with >= 2 routers");
  }

  // Routers and loopbacks.
  const uint32_t loopback_base = Addr("172.20.0.0").value;
  for (size_t o = 0; o < t.routers().size(); ++o) {
    const std::string& name = t.routers()[o];
    RouterPlan rp;
    rp.name = name;
    rp.asn = plan.ases[as_index[name]].asn;
    rp.bgp_asn = rp.asn;
    Ipv4 lb = Addr(loopback_base + static_cast<uint32_t>(o) + 1);
    rp.ospf_router_id = lb;
    rp.bgp_router_id = lb;
    rp.loopbacks.push_back(LocalNetwork{"Loopback0", InterfaceAddress{lb, 32}});
    plan.routers[name] = std::move(rp);
  }

  // Link addressing.
  uint32_t next_link = Addr("10.0.0.0").value;
  for (const Link& link : t.links()) {
    Prefix subnet(Addr(next_link), 31);
    plan.link_subnets.emplace_back(link, subnet);
    plan.routers[link.a.router].interfaces.push_back(
        LinkInterface{link.a.ifid, link.b.router, InterfaceAddress{Addr(next_link), 31}});
    plan.routers[link.b.router].interfaces.push_back(
        LinkInterface{link.b.ifid, link.a.router, InterfaceAddress{Addr(next_link + 1), 31}});
    next_link += 2;
  }

  // IGP.
  for (size_t i = 0; i < plan.ases.size(); ++i) {
    const AsPlan& as = plan.ases[i];
    RouterSet members(as.members.begin(), as.members.end());
    std::optional<Hierarchy> h;
    if (as.hierarchical) h = BuildHierarchy(t, members);
    for (const std::string& r : as.members) {
      RouterPlan& rp = plan.routers[r];
      if (as.igp == Igp::kOspf) {
        rp.ospf = true;
        uint32_t area = h ? h->AreaOf(r) : 0;
        rp.loopbacks[0].ospf_area = area;
        for (LinkInterface& li : rp.interfaces) {
          if (!members.contains(li.peer)) continue;
          uint32_t link_area = 0;
          if (h) {
            bool rc = h->IsCore(r), pc = h->IsCore(li.peer);
            if (rc && !pc) {
              link_area = h->AreaOf(li.peer);
            } else if (!rc && pc) {
              link_area = h->AreaOf(r);
            } else if (!rc && !pc) {
              link_area = std::min(h->AreaOf(r), h->AreaOf(li.peer));
            }
          }
          li.ospf_area = link_area;
          li.ospf_cost = kOspfLinkCost;
        }
      } else {
        IsisProcess isis{IsisArea(1), IsisSystemId(rp.loopback()), IsisLevel::kLevel1};
        if (h) {
          auto area_of_attach = [&](const std::string& a) {
            return IsisArea(1 + h->area_index.at(a));
          };
          if (!h->IsCore(r)) {
            isis.area = area_of_attach(h->attach.at(r));
          } else {
            std::string edge_neighbor;
            for (const std::string& n : t.Neighbors(r)) {
              if (members.contains(n) && !h->IsCore(n)) {
                edge_neighbor = n;
                break;
              }
            }
            if (edge_neighbor.empty()) {
              isis.level = IsisLevel::kLevel2;
            } else {
              isis.level = IsisLevel::kLevel12;
              isis.area = h->area_index.contains(r)
                              ? area_of_attach(r)
                              : area_of_attach(h->attach.at(edge_neighbor));
            }
          }
        }
        rp.isis = isis;
        rp.loopbacks[0].isis = true;
        for (LinkInterface& li : rp.interfaces) {
          if (members.contains(li.peer)) li.isis = true;
        }
      }
    }
  }

  // BGP sessions.
  bool policies = has(Feature::kRouteMaps);
  RouterSet asbrs;
  if (has(Feature::kEbgp)) {
    for (const Link& link : t.links()) {
      const std::string& u = link.a.router;
      const std::string& v = link.b.router;
      if (as_index[u] == as_index[v]) continue;
      const RouterPlan& ru = plan.routers[u];
      const RouterPlan& rv = plan.routers[v];
      Session s;
      s.kind = SessionKind::kEbgp;
      s.source = SessionSource::kInterface;
      s.a = SessionEnd{u, rv.FindInterface(link.b.ifid)->address.address, rv.asn};
      s.b = SessionEnd{v, ru.FindInterface(link.a.ifid)->address.address, ru.asn};
      if (policies) {
        s.a.route_map_in = absl::StrCat("RM-FROM-", v);
        s.a.route_map_out = absl::StrCat("RM-TO-", v);
        s.b.route_map_in = absl::StrCat("RM-FROM-", u);
        s.b.route_map_out = absl::StrCat("RM-TO-", u);
      }
      asbrs.insert(u);
      asbrs.insert(v);
      plan.sessions.push_back(std::move(s));
    }
  }
  auto ibgp_session = [&](SessionKind kind, const std::string& a, const std::string& b) {
    Session s;
    s.kind = kind;
    s.source = SessionSource::kLoopback;
    const RouterPlan& ra = plan.routers[a];
    const RouterPlan& rb = plan.routers[b];
    s.a = SessionEnd{a, rb.loopback(), rb.asn};
    s.b = SessionEnd{b, ra.loopback(), ra.asn};
    s.a.next_hop_self = asbrs.contains(a);
    s.b.next_hop_self = asbrs.contains(b);
    s.a.rr_client = kind == SessionKind::kRrClient;
    plan.sessions.push_back(std::move(s));
  };
  for (AsPlan& as : plan.ases) {
    if (!as.ibgp) continue;
    RouterSet members(as.members.begin(), as.members.end());
    if (has(Feature::kRouteReflection) && as.members.size() >= 4) {
      std::vector<std::string> ranked = as.members;
      bool prefer_asbr = has(Feature::kNextHopSelf);
      std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& x, const auto& y) {
        if (prefer_asbr && asbrs.contains(x) != asbrs.contains(y)) return asbrs.contains(x);
        return InducedDegree(t, x, members) > InducedDegree(t, y, members);
      });
      size_t count = as.members.size() >= 6 ? 2 : 1;
      std::vector<std::string> reflectors(ranked.begin(), ranked.begin() + count);
      std::vector<std::map<std::string, int>> dist;
      for (const std::string& r : reflectors) {
        dist.push_back(BfsDistance(t, r, members));
        as.clusters.push_back(RrCluster{plan.routers[r].loopback(), r, {}});
      }
      for (const std::string& c : as.members) {
        if (std::find(reflectors.begin(), reflectors.end(), c) != reflectors.end()) continue;
        size_t best = 0;
        for (size_t k = 1; k < reflectors.size(); ++k) {
          if (dist[k].at(c) < dist[best].at(c)) best = k;
        }
        as.clusters[best].clients.push_back(c);
      }
      for (size_t x = 0; x < reflectors.size(); ++x) {
        for (size_t y = x + 1; y < reflectors.size(); ++y) {
          ibgp_session(SessionKind::kIbgp, std::min(reflectors[x], reflectors[y]),
                       std::max(reflectors[x], reflectors[y]));
        }
      }
      for (const RrCluster& cl : as.clusters) {
        for (const std::string& c : cl.clients) ibgp_session(SessionKind::kRrClient, cl.reflector, c);
      }
    } else {
      for (size_t x = 0; x < as.members.size(); ++x) {
        for (size_t y = x + 1; y < as.members.size(); ++y) {
          ibgp_session(SessionKind::kIbgp, as.members[x], as.members[y]);
        }
      }
    }
  }
  for (const Session& s : plan.sessions) {
    plan.routers[s.a.router].bgp = true;
    plan.routers[s.b.router].bgp = true;
  }

  // Originated prefixes.
  uint32_t next_lan = Addr("192.168.0.0").value;
  uint32_t next_static = Addr("198.18.0.0").value;
  for (size_t i = 0; i < plan.ases.size(); ++i) {
    const AsPlan& as = plan.ases[i];
    std::vector<std::string> candidates;
    for (const std::string& r : as.members) {
      if (plan.routers[r].bgp) candidates.push_back(r);
    }
    if (candidates.empty()) candidates = as.members;
    Rng rng(DeriveSeed(seed, "originators", i));
    std::shuffle(candidates.begin(), candidates.end(), rng);
    size_t count = std::min(candidates.size(), std::max<size_t>(1, (as.members.size() + 3) / 4));
    std::vector<std::string> chosen(candidates.begin(), candidates.begin() + count);
    if (policies && chosen.size() < 2) chosen.push_back(chosen.front());

    size_t first = plan.originated.size();
    for (size_t j = 0; j < chosen.size(); ++j) {
      RouterPlan& rp = plan.routers[chosen[j]];
      OriginatedPrefix o;
      o.router = rp.name;
      if (has(Feature::kStaticRoutes) && j == 0) {
        o.prefix = Prefix(Addr(next_static), 24);
        o.via_static = true;
        next_static += 256;
        rp.statics.push_back(StaticRoute{o.prefix, std::nullopt, "Loopback0"});
      } else {
        o.prefix = Prefix(Addr(next_lan), 24);
        next_lan += 256;
        LocalNetwork lan{absl::StrCat("Loopback", rp.loopbacks.size()),
                         InterfaceAddress{Addr(o.prefix.network.value + 1), 24}};
        lan.ospf_area = rp.loopbacks[0].ospf_area;
        lan.isis = rp.loopbacks[0].isis;
        rp.loopbacks.push_back(std::move(lan));
      }
      if (rp.bgp) rp.networks.push_back(o.prefix);
      plan.originated.push_back(std::move(o));
    }
    if (policies && plan.originated.size() - first >= 2) {
      plan.originated.back().internal_only = true;
    }
  }

  // eBGP policy objects.
  if (policies) {
    std::vector<PrefixListEntry> exported;
    std::vector<Prefix> export_prefixes;
    for (const OriginatedPrefix& o : plan.originated) {
      if (!o.internal_only) export_prefixes.push_back(o.prefix);
    }
    std::sort(export_prefixes.begin(), export_prefixes.end());
    int seq = 5;
    for (const Prefix& p : export_prefixes) {
      exported.push_back(PrefixListEntry{seq, true, p});
      seq += 5;
    }
    exported.push_back(PrefixListEntry{seq, false, Prefix(Addr("0.0.0.0"), 0), std::nullopt, 32});
    std::vector<PrefixListEntry> infra{
        {5, true, Prefix(Addr("172.20.0.0"), 16), std::nullopt, 32},
        {10, true, Prefix(Addr("10.0.0.0"), 8), std::nullopt, 32},
    };
    for (const Session& s : plan.sessions) {
      if (s.kind != SessionKind::kEbgp) continue;
      for (const SessionEnd* e : {&s.a, &s.b}) {
        RouterPlan& rp = plan.routers[e->router];
        rp.prefix_lists["PL-EXPORT"] = exported;
        rp.prefix_lists["PL-INFRA"] = infra;
        rp.route_maps[*e->route_map_out] = {RouteMapClause{10, true, "PL-EXPORT"}};
        RouteMapClause accept{20, true};
        if (has(Feature::kLocalPrefPolicy)) accept.set_local_pref = kDefaultLocalPref;
        rp.route_maps[*e->route_map_in] = {RouteMapClause{10, false, "PL-INFRA"}, accept};
      }
    }
  }

  if (has(Feature::kRedistributionBgpOspf)) {
    for (const std::string& r : asbrs) {
      RouterPlan& rp = plan.routers[r];
      if (rp.ospf) rp.redistribute_bgp_asn = rp.bgp_asn;
    }
  }

  // ACL bindings on a sample of links.
  for (Feature f : {Feature::kAclIn, Feature::kAclOut}) {
    if (!has(f)) continue;
    bool inbound = f == Feature::kAclIn;
    Rng rng(DeriveSeed(seed, inbound ? "acl-in" : "acl-out"));
    std::vector<Link> links = t.links();
    std::shuffle(links.begin(), links.end(), rng);
    size_t count = std::max<size_t>(1, (links.size() + 3) / 4);
    for (size_t k = 0; k < count && k < links.size(); ++k) {
      const Endpoint& ep = rng() % 2 == 0 ? links[k].a : links[k].b;
      RouterPlan& rp = plan.routers[ep.router];
      std::string name = AclName(ep.ifid, inbound ? "IN" : "OUT");
      AclRule deny{10, false};
      deny.destination = AddressMatch{AddressMatch::Kind::kWildcard, Addr("198.51.100.0"),
                                      Addr("0.0.0.255")};
      rp.acls[name] = {deny, AclRule{20, true}};
      LinkInterface* li = rp.FindInterface(ep.ifid);
      (inbound ? li->acl_in : li->acl_out) = name;
    }
  }

  for (auto& [name, rp] : plan.routers) {
    std::sort(rp.interfaces.begin(), rp.interfaces.end(),
              [](const auto& x, const auto& y) { return x.ifid < y.ifid; });
  }
  if (absl::Status st = ValidatePlan(plan); !st.ok()) return st;
  return plan;
}

absl::Status ValidatePlan(const LogicalPlan& plan) {
  const Topology& t = plan.topology;
  std::set<Ipv4> loopbacks, ospf_ids, bgp_ids;
  for (const auto& [name, rp] : plan.routers) {
    if (!loopbacks.insert(rp.loopback()).second) {
      return absl::InternalError(absl::StrCat("duplicate loopback on ", name));
    }
    if (rp.ospf && !ospf_ids.insert(rp.ospf_router_id).second) {
      return absl::InternalError(absl::StrCat("duplicate OSPF router-id on ", name));
    }
    if (rp.bgp && !bgp_ids.insert(rp.bgp_router_id).second) {
      return absl::InternalError(absl::StrCat("duplicate BGP router-id on ", name));
    }
    for (const LinkInterface& li : rp.interfaces) {
      for (const std::optional<std::string>* acl : {&li.acl_in, &li.acl_out}) {
        if (*acl && !rp.acls.contains(**acl)) {
          return absl::InternalError(absl::StrCat("undefined ACL ", **acl, " on ", name));
        }
      }
    }
    for (const auto& [map_name, clauses] : rp.route_maps) {
      for (const RouteMapClause& c : clauses) {
        if (c.match_prefix_list && !rp.prefix_lists.contains(*c.match_prefix_list)) {
          return absl::InternalError(
              absl::StrCat("undefined prefix-list ", *c.match_prefix_list, " on ", name));
        }
      }
    }
    for (const Prefix& p : rp.networks) {
      bool backed = false;
      for (const LocalNetwork& l : rp.loopbacks) backed |= l.address.Subnet() == p;
      for (const LinkInterface& l : rp.interfaces) backed |= l.address.Subnet() == p;
      for (const StaticRoute& s : rp.statics) backed |= s.prefix == p;
      if (!backed) {
        return absl::InternalError(
            absl::StrCat("network ", p.ToString(), " on ", name, " has no local backing"));
      }
    }
  }
  for (const Link& link : t.links()) {
    const LinkInterface* a = plan.routers.at(link.a.router).FindInterface(link.a.ifid);
    const LinkInterface* b = plan.routers.at(link.b.router).FindInterface(link.b.ifid);
    if (a == nullptr || b == nullptr || a->address.Subnet() != b->address.Subnet() ||
        a->address.address == b->address.address) {
      return absl::InternalError(absl::StrCat("link ", link.a.router, "-", link.b.router,
                                              " endpoints are not in one subnet"));
    }
  }
  for (const Session& s : plan.sessions) {
    for (const SessionEnd* e : {&s.a, &s.b}) {
      const RouterPlan& rp = plan.routers.at(e->router);
      const RouterPlan& peer = plan.routers.at(s.Other(e->router).router);
      if (e->remote_as != peer.bgp_asn) {
        return absl::InternalError(
            absl::StrCat("session ", s.a.router, "-", s.b.router, " declares wrong remote-as"));
      }
      for (const std::optional<std::string>* m : {&e->route_map_in, &e->route_map_out}) {
        if (*m && !rp.route_maps.contains(**m)) {
          return absl::InternalError(absl::StrCat("undefined route-map ", **m, " on ", e->router));
        }
      }
    }
  }
  for (const AsPlan& as : plan.ases) {
    RouterSet members(as.members.begin(), as.members.end());
    if (BfsOrder(t, as.members.front(), members).size() != members.size()) {
      return absl::InternalError(absl::StrCat("AS ", as.asn, " is not connected"));
    }
    if (as.igp == Igp::kOspf && as.hierarchical) {
      RouterSet backbone;
      for (const std::string& r : as.members) {
        for (const LinkInterface& li : plan.routers.at(r).interfaces) {
          if (li.ospf_area == 0u) backbone.insert(r);
        }
      }
      // Area-0 adjacency graph must be connected.
      std::vector<std::string> order{*backbone.begin()};
      RouterSet seen{*backbone.begin()};
      for (size_t i = 0; i < order.size(); ++i) {
        for (const LinkInterface& li : plan.routers.at(order[i]).interfaces) {
          if (li.ospf_area == 0u && backbone.contains(li.peer) && seen.insert(li.peer).second) {
            order.push_back(li.peer);
          }
        }
      }
      if (seen.size() != backbone.size()) {
        return absl::InternalError(absl::StrCat("OSPF backbone of AS ", as.asn, " is split"));
      }
    }
  }
  return absl::OkStatus();
}

DeviceModel DeviceViewOf(const LogicalPlan& plan, absl::string_view router) {
  const RouterPlan& rp = plan.routers.at(std::string(router));
  DeviceModel m;
  m.hostname = rp.name;
  for (const LocalNetwork& l : rp.loopbacks) {
    InterfaceConfig i;
    i.name = l.interface;
    i.address = l.address;
    i.ospf_area = l.ospf_area;
    i.isis = l.isis;
    m.interfaces.push_back(std::move(i));
  }
  for (const LinkInterface& l : rp.interfaces) {
    InterfaceConfig i;
    i.name = InterfaceName(l.ifid);
    i.description = absl::StrCat("to ", l.peer);
    i.address = l.address;
    i.ospf_area = l.ospf_area;
    i.ospf_cost = l.ospf_cost;
    i.isis = l.isis;
    i.acl_in = l.acl_in;
    i.acl_out = l.acl_out;
    m.interfaces.push_back(std::move(i));
  }
  if (rp.ospf) m.ospf = OspfProcess{1, rp.ospf_router_id, rp.redistribute_bgp_asn};
  m.isis = rp.isis;
  if (rp.bgp) {
    BgpProcess bgp;
    bgp.asn = rp.bgp_asn;
    bgp.router_id = rp.bgp_router_id;
    for (const AsPlan& as : plan.ases) {
      for (const RrCluster& c : as.clusters) {
        if (c.reflector == rp.name) bgp.cluster_id = c.cluster_id;
      }
    }
    for (const Session& s : plan.sessions) {
      if (s.a.router != rp.name && s.b.router != rp.name) continue;
      const SessionEnd& e = s.End(rp.name);
      BgpNeighbor n;
      n.address = e.neighbor_address;
      n.remote_as = e.remote_as;
      if (s.source == SessionSource::kLoopback) n.update_source = "Loopback0";
      n.next_hop_self = e.next_hop_self;
      n.route_reflector_client = e.rr_client;
      n.shutdown = e.shutdown;
      n.route_map_in = e.route_map_in;
      n.route_map_out = e.route_map_out;
      bgp.neighbors.push_back(std::move(n));
    }
    std::sort(bgp.neighbors.begin(), bgp.neighbors.end(),
              [](const auto& x, const auto& y) { return x.address < y.address; });
    bgp.networks = rp.networks;
    m.bgp = std::move(bgp);
  }
  m.prefix_lists = rp.prefix_lists;
  m.route_maps = rp.route_maps;
  m.statics = rp.statics;
  m.acls = rp.acls;
  return m;
}

std::map<std::string, DeviceModel> DeviceView(const LogicalPlan& plan) {
  std::map<std::string, DeviceModel> out;
  for (const auto& [name, rp] : plan.routers) out[name] = DeviceViewOf(plan, name);
  return out;
}

}  // namespace netfix
