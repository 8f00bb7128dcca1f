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

#include "netfix/faults.h"

#include <algorithm>
#include <functional>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "netfix/rng.h"

namespace netfix {
namespace {

using nlohmann::json;

std::vector<FaultKind> BuildCatalog() {
  using F = Feature;
  using C = FaultClass;
  return {
      {"ebgp-wrong-remote-as", C::kBgp, {F::kEbgp},
       "eBGP neighbor configured with incorrect remote AS",
       "eBGP session reset due to ASN mismatch, cutting off inter-AS route exchange"},
      {"bgp-neighbor-shutdown", C::kBgp, {F::kEbgp},
       "Administratively shut down a BGP neighbor",
       "BGP peering is administratively disabled, withdrawing all prefixes learnt via the "
       "neighbor"},
      {"bgp-wrong-local-as", C::kBgp, {F::kEbgp},
       "Node configured with incorrect local ASN",
       "Misaligned local ASN breaks iBGP/eBGP sessions and splits the AS control plane"},
      {"bgp-invalid-next-hop", C::kBgp, {F::kRouteMaps},
       "Force invalid next-hop on eBGP advertisements",
       "Outbound policy rewrites next-hop to an unreachable address, causing downstream "
       "traffic blackholes"},
      {"rr-remove-next-hop-self", C::kBgp, {F::kRouteReflection, F::kNextHopSelf},
       "Remove next-hop-self from RR to client iBGP session",
       "iBGP routes advertised to clients retain original eBGP next-hop, which may be "
       "unreachable from clients causing traffic blackholes"},
      {"bgp-withdraw-network", C::kBgp, {F::kEbgp, F::kNetworkStatements},
       "Withdraw a BGP network statement from the process",
       "Prefix is no longer originated, withdrawing reachability from downstream peers"},
      {"bgp-remove-export-map", C::kBgp, {F::kRouteMaps, F::kCommunityFreeExport},
       "Remove outbound route-map from eBGP neighbor",
       "Export policy no longer enforced, allowing infrastructure routes (loopbacks, P2P) and "
       "unintended prefixes to leak to external peers"},
      {"bgp-swap-route-maps", C::kBgp, {F::kRouteMaps},
       "Swap inbound and outbound route-maps on a neighbor",
       "Inbound filters begin applying outbound and vice versa, breaking intended "
       "import/export policy"},
      {"bgp-leak-loopback", C::kBgp, {F::kRouteMaps, F::kPrefixLists},
       "Leak router loopback by stripping export/import policies",
       "ASBR originates its loopback /32 into eBGP and the peer accepts it because inbound "
       "filtering was removed"},
      {"rr-orphan-clients", C::kBgp, {F::kRouteReflection},
       "Break RR sessions to orphan clients",
       "iBGP sessions removed between RR and up to 5 (exclusive) clients, orphaning them from "
       "iBGP reachability"},
      {"rr-duplicate-cluster-id", C::kBgp, {F::kRouteReflection},
       "Duplicate cluster-id across route reflectors and isolate clients on one RR",
       "Conflicting cluster-ids cause route reflectors to drop one another's updates, "
       "stranding clients that now depend on the misconfigured RR"},
      {"ospf-extreme-cost", C::kOspf, {F::kOspf},
       "OSPF interface cost set to extreme value",
       "Artificially high OSPF cost diverts traffic away from the link based on alternate SPF "
       "paths"},
      {"ospf-disable-adjacency", C::kOspf, {F::kOspf},
       "Disable OSPF adjacency on a link",
       "Removing the link from OSPF prevents adjacency formation and withdraws LSAs learned "
       "across it"},
      {"ospf-missing-area", C::kOspf, {F::kOspfMultiArea},
       "Node missing OSPF area membership",
       "Router withdraws from all OSPF areas, tearing down adjacencies and LSAs"},
      {"ospf-duplicate-router-id", C::kOspf, {F::kOspf},
       "Assign duplicate OSPF router-ID to multiple routers",
       "OSPF adjacencies fail or LSAs rejected due to router-ID collision, fragmenting OSPF "
       "domain and blackholing traffic"},
      {"isis-disable-link", C::kIsis, {F::kIsis},
       "Disable IS-IS on an intra-AS link",
       "Removing the link from IS-IS prevents adjacency formation and withdraws LSPs learned "
       "across it"},
      {"isis-demote-l12", C::kIsis, {F::kIsisMultiLevel},
       "Demote a Level-1-2 IS-IS router to Level-1",
       "Reduces inter-area reachability by removing a backbone-capable router, risking L2 "
       "partitioning"},
      {"isis-wrong-area", C::kIsis, {F::kIsis},
       "Assign router to wrong IS-IS area",
       "Router in wrong area cannot form L1 adjacencies with its physical neighbors; causes "
       "partition of L1 domain and reachability loss"},
      {"duplicate-loopback", C::kAddressing, {F::kOspf},
       "Duplicate loopback IPv4 addresses",
       "Two routers share the same loopback, risking routing loops and control-plane "
       "instability"},
      {"link-mask-mismatch", C::kAddressing, {F::kOspf},
       "Link interfaces disagree on prefix length",
       "One side of a point-to-point link uses a mismatched subnet mask, preventing adjacency "
       "formation"},
      {"link-subnet-mismatch", C::kAddressing, {F::kOspf},
       "Link interfaces reside in different subnets",
       "Interfaces on a point-to-point link move to disjoint IPv4 subnets, breaking adjacency "
       "formation"},
      {"remove-static-route", C::kDevice, {F::kStaticRoutes},
       "Remove supporting static route for advertised prefix",
       "Advertised network disappears once the backing static route is withdrawn, causing a "
       "control-plane withdraw"},
      {"prefix-list-remove-permit", C::kPolicy, {F::kPrefixLists},
       "Remove permit entry from prefix-list",
       "Prefix-list no longer matches intended prefixes, causing route filtering to block "
       "previously allowed routes"},
      {"route-map-permit-to-deny", C::kPolicy, {F::kRouteMaps},
       "Convert BGP route-map permit clause into deny",
       "Previously exported prefixes are now filtered, withdrawing routes from neighbors"},
      {"lower-local-pref", C::kPolicy, {F::kLocalPrefPolicy},
       "Lower BGP local-preference on inbound policy",
       "Reduced local-preference makes an alternate egress the best path for affected "
       "prefixes"},
      {"drop-bgp-ospf-redistribution", C::kRedistribution, {F::kRedistributionBgpOspf},
       "Drop BGP to OSPF redistribution on an ASBR",
       "Internal OSPF loses external reachability because Type-5 LSAs are never originated"},
      {"acl-insert-deny-top", C::kSecurity, {F::kAclIn, F::kAclOut},
       "Insert implicit deny at top of interface ACL (inbound or outbound)",
       "Traffic on the protected interface is dropped in the ACL's direction before policy "
       "permits, breaking connectivity"},
  };
}

std::vector<std::string> SplitTarget(absl::string_view target) {
  return absl::StrSplit(target, ':');
}

// Ordered (x, peer) pairs for every configured session end.
struct EndRef {
  size_t session;
  bool is_a;
};

std::vector<EndRef> SessionEnds(const LogicalPlan& plan) {
  std::vector<EndRef> out;
  for (size_t i = 0; i < plan.sessions.size(); ++i) {
    out.push_back({i, true});
    out.push_back({i, false});
  }
  return out;
}

const SessionEnd& EndOf(const LogicalPlan& plan, const EndRef& e) {
  return e.is_a ? plan.sessions[e.session].a : plan.sessions[e.session].b;
}
const SessionEnd& PeerOf(const LogicalPlan& plan, const EndRef& e) {
  return e.is_a ? plan.sessions[e.session].b : plan.sessions[e.session].a;
}

std::string NeighborKey(absl::string_view x, absl::string_view peer) {
  return absl::StrCat("bgp-neighbor:", x, ":", peer);
}

Session* FindSession(LogicalPlan& plan, absl::string_view x, absl::string_view peer) {
  for (Session& s : plan.sessions) {
    if ((s.a.router == x && s.b.router == peer) || (s.b.router == x && s.a.router == peer)) {
      return &s;
    }
  }
  return nullptr;
}

// Link interfaces whose far end is in the same AS.
bool IntraAs(const LogicalPlan& plan, const RouterPlan& r, const LinkInterface& i) {
  return plan.routers.at(i.peer).asn == r.asn;
}

bool HasPermit(const std::vector<RouteMapClause>& clauses) {
  return std::any_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.permit; });
}

FaultInstance Make(absl::string_view kind, std::string target) {
  return FaultInstance{std::string(kind), std::move(target), {}};
}

std::vector<FaultInstance> Targets(const LogicalPlan& plan, absl::string_view kind) {
  std::vector<FaultInstance> out;
  auto each_end = [&](const std::function<bool(const Session&, const SessionEnd&,
                                               const SessionEnd&)>& pred) {
    for (const EndRef& e : SessionEnds(plan)) {
      const Session& s = plan.sessions[e.session];
      const SessionEnd& x = EndOf(plan, e);
      const SessionEnd& y = PeerOf(plan, e);
      if (pred(s, x, y)) out.push_back(Make(kind, NeighborKey(x.router, y.router)));
    }
  };
  if (kind == "ebgp-wrong-remote-as") {
    each_end([](const Session& s, const SessionEnd& x, const SessionEnd&) {
      return s.kind == SessionKind::kEbgp && x.remote_as != kWrongRemoteAs;
    });
  } else if (kind == "bgp-neighbor-shutdown") {
    each_end([](const Session&, const SessionEnd& x, const SessionEnd&) { return !x.shutdown; });
  } else if (kind == "bgp-wrong-local-as") {
    for (const auto& [name, r] : plan.routers) {
      if (r.bgp && r.bgp_asn != kWrongLocalAs) out.push_back(Make(kind, "bgp-asn:" + name));
    }
  } else if (kind == "bgp-invalid-next-hop") {
    for (const EndRef& e : SessionEnds(plan)) {
      const Session& s = plan.sessions[e.session];
      const SessionEnd& x = EndOf(plan, e);
      if (s.kind != SessionKind::kEbgp || !x.route_map_out) continue;
      const RouterPlan& r = plan.routers.at(x.router);
      auto it = r.route_maps.find(*x.route_map_out);
      if (it == r.route_maps.end() || !HasPermit(it->second)) continue;
      out.push_back(Make(kind, absl::StrCat("route-map:", x.router, ":", *x.route_map_out)));
    }
  } else if (kind == "rr-remove-next-hop-self") {
    for (const Session& s : plan.sessions) {
      if (s.kind == SessionKind::kRrClient && s.a.next_hop_self) {
        out.push_back(Make(kind, NeighborKey(s.a.router, s.b.router)));
      }
    }
  } else if (kind == "bgp-withdraw-network") {
    for (const auto& [name, r] : plan.routers) {
      if (!r.bgp) continue;
      for (const Prefix& p : r.networks) {
        out.push_back(Make(kind, absl::StrCat("network:", name, ":", p.ToString())));
      }
    }
  } else if (kind == "bgp-remove-export-map") {
    each_end([](const Session& s, const SessionEnd& x, const SessionEnd&) {
      return s.kind == SessionKind::kEbgp && x.route_map_out.has_value();
    });
  } else if (kind == "bgp-swap-route-maps") {
    each_end([](const Session&, const SessionEnd& x, const SessionEnd&) {
      return x.route_map_in && x.route_map_out && *x.route_map_in != *x.route_map_out;
    });
  } else if (kind == "bgp-leak-loopback") {
    each_end([&](const Session& s, const SessionEnd& x, const SessionEnd& y) {
      if (s.kind != SessionKind::kEbgp) return false;
      return x.route_map_out.has_value() || y.route_map_in.has_value();
    });
  } else if (kind == "rr-orphan-clients") {
    for (const AsPlan& as : plan.ases) {
      for (const RrCluster& c : as.clusters) {
        if (!c.clients.empty()) out.push_back(Make(kind, "rr-cluster:" + c.reflector));
      }
    }
  } else if (kind == "rr-duplicate-cluster-id") {
    for (const AsPlan& as : plan.ases) {
      for (const RrCluster& a : as.clusters) {
        for (const RrCluster& b : as.clusters) {
          if (a.reflector == b.reflector || a.cluster_id == b.cluster_id) continue;
          out.push_back(Make(kind, absl::StrCat("cluster-id:", b.reflector, "=", a.reflector)));
        }
      }
    }
  } else if (kind == "ospf-extreme-cost" || kind == "ospf-disable-adjacency") {
    bool cost = kind == "ospf-extreme-cost";
    for (const auto& [name, r] : plan.routers) {
      for (const LinkInterface& i : r.interfaces) {
        if (!i.ospf_area || !IntraAs(plan, r, i)) continue;
        if (cost && i.ospf_cost == kExtremeOspfCost) continue;
        out.push_back(Make(kind, absl::StrCat("iface:", name, ":", i.ifid)));
      }
    }
  } else if (kind == "ospf-missing-area") {
    for (const auto& [name, r] : plan.routers) {
      bool any = std::any_of(r.interfaces.begin(), r.interfaces.end(),
                             [](const auto& i) { return i.ospf_area.has_value(); }) ||
                 std::any_of(r.loopbacks.begin(), r.loopbacks.end(),
                             [](const auto& l) { return l.ospf_area.has_value(); });
      if (r.ospf && any) out.push_back(Make(kind, "ospf:" + name));
    }
  } else if (kind == "ospf-duplicate-router-id") {
    for (const auto& [a, ra] : plan.routers) {
      if (!ra.ospf) continue;
      for (const auto& [b, rb] : plan.routers) {
        if (a == b || !rb.ospf || ra.asn != rb.asn || ra.ospf_router_id == rb.ospf_router_id) {
          continue;
        }
        out.push_back(Make(kind, absl::StrCat("ospf-router-id:", b, "=", a)));
      }
    }
  } else if (kind == "isis-disable-link") {
    for (const auto& [name, r] : plan.routers) {
      for (const LinkInterface& i : r.interfaces) {
        if (i.isis && IntraAs(plan, r, i)) {
          out.push_back(Make(kind, absl::StrCat("iface:", name, ":", i.ifid)));
        }
      }
    }
  } else if (kind == "isis-demote-l12") {
    for (const auto& [name, r] : plan.routers) {
      if (r.isis && r.isis->level == IsisLevel::kLevel12) out.push_back(Make(kind, "isis:" + name));
    }
  } else if (kind == "isis-wrong-area") {
    for (const auto& [name, r] : plan.routers) {
      if (r.isis && r.isis->area != "49.0999") out.push_back(Make(kind, "isis:" + name));
    }
  } else if (kind == "duplicate-loopback") {
    for (const auto& [a, ra] : plan.routers) {
      for (const auto& [b, rb] : plan.routers) {
        if (a == b || ra.asn != rb.asn || ra.loopback() == rb.loopback()) continue;
        out.push_back(Make(kind, absl::StrCat("loopback:", b, "=", a)));
      }
    }
  } else if (kind == "link-mask-mismatch" || kind == "link-subnet-mismatch") {
    bool mask = kind == "link-mask-mismatch";
    for (const auto& [name, r] : plan.routers) {
      for (const LinkInterface& i : r.interfaces) {
        if (!(i.ospf_area || i.isis) || !IntraAs(plan, r, i)) continue;
        if (mask && i.address.length != 31) continue;
        out.push_back(Make(kind, absl::StrCat("iface:", name, ":", i.ifid)));
      }
    }
  } else if (kind == "remove-static-route") {
    for (const auto& [name, r] : plan.routers) {
      for (const StaticRoute& s : r.statics) {
        out.push_back(Make(kind, absl::StrCat("static:", name, ":", s.prefix.ToString())));
      }
    }
  } else if (kind == "prefix-list-remove-permit") {
    for (const auto& [name, r] : plan.routers) {
      for (const auto& [list, entries] : r.prefix_lists) {
        for (const PrefixListEntry& e : entries) {
          if (e.permit) {
            out.push_back(Make(kind, absl::StrCat("prefix-list:", name, ":", list, ":", e.seq)));
          }
        }
      }
    }
  } else if (kind == "route-map-permit-to-deny" || kind == "lower-local-pref") {
    bool lp = kind == "lower-local-pref";
    for (const auto& [name, r] : plan.routers) {
      for (const auto& [map, clauses] : r.route_maps) {
        for (const RouteMapClause& c : clauses) {
          if (lp ? !(c.permit && c.set_local_pref && *c.set_local_pref != kLoweredLocalPref)
                 : !c.permit) {
            continue;
          }
          out.push_back(Make(kind, absl::StrCat("route-map:", name, ":", map, ":", c.seq)));
        }
      }
    }
  } else if (kind == "drop-bgp-ospf-redistribution") {
    for (const auto& [name, r] : plan.routers) {
      if (r.redistribute_bgp_asn) out.push_back(Make(kind, "redistribute:" + name));
    }
  } else if (kind == "acl-insert-deny-top") {
    for (const auto& [name, r] : plan.routers) {
      for (const LinkInterface& i : r.interfaces) {
        for (bool in : {true, false}) {
          const auto& acl = in ? i.acl_in : i.acl_out;
          if (!acl || !r.acls.count(*acl)) continue;
          FaultInstance f = Make(kind, absl::StrCat("acl:", name, ":", *acl));
          f.params["direction"] = in ? "in" : "out";
          f.params["interface"] = InterfaceName(i.ifid);
          out.push_back(std::move(f));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FaultInstance& a, const FaultInstance& b) { return a.target < b.target; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) { return a.target == b.target; }),
            out.end());
  return out;
}

absl::Status Inapplicable(const FaultInstance& f) {
  return absl::FailedPreconditionError(
      absl::StrCat("inapplicable binding ", f.target, " for fault ", f.kind));
}

LinkInterface* FindIface(LogicalPlan& plan, absl::string_view router, absl::string_view ifid) {
  auto it = plan.routers.find(std::string(router));
  int id = 0;
  if (it == plan.routers.end() || !absl::SimpleAtoi(ifid, &id)) return nullptr;
  return it->second.FindInterface(id);
}

RrCluster* FindCluster(LogicalPlan& plan, absl::string_view reflector) {
  for (AsPlan& as : plan.ases) {
    for (RrCluster& c : as.clusters) {
      if (c.reflector == reflector) return &c;
    }
  }
  return nullptr;
}

void RemoveSession(LogicalPlan& plan, absl::string_view x, absl::string_view y) {
  plan.sessions.erase(std::remove_if(plan.sessions.begin(), plan.sessions.end(),
                                     [&](const Session& s) {
                                       return (s.a.router == x && s.b.router == y) ||
                                              (s.a.router == y && s.b.router == x);
                                     }),
                      plan.sessions.end());
}

// Mutates `plan`; fills drawn parameters into `f`.
absl::Status Apply(LogicalPlan& plan, FaultInstance& f, Rng& rng) {
  std::vector<std::string> t = SplitTarget(f.target);
  const std::string& kind = f.kind;
  auto neighbor = [&]() -> SessionEnd* {
    if (t.size() != 3 || t[0] != "bgp-neighbor") return nullptr;
    Session* s = FindSession(plan, t[1], t[2]);
    return s == nullptr ? nullptr : &s->End(t[1]);
  };
  auto router = [&]() -> RouterPlan* {
    if (t.size() < 2) return nullptr;
    auto it = plan.routers.find(t[1]);
    return it == plan.routers.end() ? nullptr : &it->second;
  };
  // "x=y" pair targets.
  auto pair = [&]() -> std::pair<std::string, std::string> {
    if (t.size() != 2) return {};
    std::vector<std::string> p = absl::StrSplit(t[1], '=');
    if (p.size() != 2) return {};
    return {p[0], p[1]};
  };

  if (kind == "ebgp-wrong-remote-as") {
    SessionEnd* e = neighbor();
    if (!e) return Inapplicable(f);
    e->remote_as = kWrongRemoteAs;
    f.params["remote_as"] = absl::StrCat(kWrongRemoteAs);
  } else if (kind == "bgp-neighbor-shutdown") {
    SessionEnd* e = neighbor();
    if (!e) return Inapplicable(f);
    e->shutdown = true;
  } else if (kind == "bgp-wrong-local-as") {
    RouterPlan* r = router();
    if (!r || !r->bgp) return Inapplicable(f);
    r->bgp_asn = kWrongLocalAs;
    f.params["local_as"] = absl::StrCat(kWrongLocalAs);
  } else if (kind == "bgp-invalid-next-hop") {
    RouterPlan* r = router();
    if (!r || t.size() != 3 || !r->route_maps.count(t[2])) return Inapplicable(f);
    Ipv4 nh{(10u << 24) | (255u << 16) | (255u << 8) |
            static_cast<uint32_t>(std::uniform_int_distribution<int>(1, 254)(rng))};
    for (RouteMapClause& c : r->route_maps[t[2]]) {
      if (c.permit) c.set_next_hop = nh;
    }
    f.params["next_hop"] = nh.ToString();
  } else if (kind == "rr-remove-next-hop-self") {
    SessionEnd* e = neighbor();
    if (!e || !e->next_hop_self) return Inapplicable(f);
    e->next_hop_self = false;
  } else if (kind == "bgp-withdraw-network") {
    RouterPlan* r = router();
    if (!r || t.size() != 3) return Inapplicable(f);
    auto p = Prefix::Parse(t[2]);
    auto it = p ? std::find(r->networks.begin(), r->networks.end(), *p) : r->networks.end();
    if (it == r->networks.end()) return Inapplicable(f);
    r->networks.erase(it);
  } else if (kind == "bgp-remove-export-map") {
    SessionEnd* e = neighbor();
    if (!e || !e->route_map_out) return Inapplicable(f);
    f.params["route_map"] = *e->route_map_out;
    e->route_map_out.reset();
  } else if (kind == "bgp-swap-route-maps") {
    SessionEnd* e = neighbor();
    if (!e || !e->route_map_in || !e->route_map_out) return Inapplicable(f);
    std::swap(e->route_map_in, e->route_map_out);
  } else if (kind == "bgp-leak-loopback") {
    Session* s = t.size() == 3 ? FindSession(plan, t[1], t[2]) : nullptr;
    if (!s) return Inapplicable(f);
    SessionEnd& x = s->End(t[1]);
    SessionEnd& y = s->End(t[2]);
    RouterPlan& rx = plan.routers.at(t[1]);
    Prefix lo = Prefix::Host(rx.loopback());
    if (std::find(rx.networks.begin(), rx.networks.end(), lo) == rx.networks.end()) {
      rx.networks.push_back(lo);
    }
    x.route_map_out.reset();
    y.route_map_in.reset();
    f.params["prefix"] = lo.ToString();
  } else if (kind == "rr-orphan-clients") {
    RrCluster* c = t.size() == 2 ? FindCluster(plan, t[1]) : nullptr;
    if (!c || c->clients.empty()) return Inapplicable(f);
    int max = std::min<int>(kMaxOrphanedClients, static_cast<int>(c->clients.size()));
    int k = std::uniform_int_distribution<int>(1, max)(rng);
    std::vector<std::string> pool = c->clients;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    for (const std::string& client : pool) RemoveSession(plan, c->reflector, client);
    f.params["count"] = absl::StrCat(k);
    f.params["clients"] = absl::StrJoin(pool, ",");
  } else if (kind == "rr-duplicate-cluster-id") {
    auto [b, a] = pair();
    RrCluster* cb = FindCluster(plan, b);
    RrCluster* ca = FindCluster(plan, a);
    if (!ca || !cb) return Inapplicable(f);
    cb->cluster_id = ca->cluster_id;
    // Clients of a that also peer with b lose that session.
    for (const std::string& client : ca->clients) RemoveSession(plan, b, client);
    f.params["cluster_id"] = ca->cluster_id.ToString();
  } else if (kind == "ospf-extreme-cost") {
    LinkInterface* i = t.size() == 3 ? FindIface(plan, t[1], t[2]) : nullptr;
    if (!i || !i->ospf_area) return Inapplicable(f);
    i->ospf_cost = kExtremeOspfCost;
    f.params["cost"] = absl::StrCat(kExtremeOspfCost);
  } else if (kind == "ospf-disable-adjacency") {
    LinkInterface* i = t.size() == 3 ? FindIface(plan, t[1], t[2]) : nullptr;
    if (!i || !i->ospf_area) return Inapplicable(f);
    i->ospf_area.reset();
    i->ospf_cost.reset();
  } else if (kind == "ospf-missing-area") {
    RouterPlan* r = router();
    if (!r || !r->ospf) return Inapplicable(f);
    for (LinkInterface& i : r->interfaces) i.ospf_area.reset();
    for (LocalNetwork& l : r->loopbacks) l.ospf_area.reset();
  } else if (kind == "ospf-duplicate-router-id") {
    auto [b, a] = pair();
    if (!plan.routers.count(a) || !plan.routers.count(b)) return Inapplicable(f);
    plan.routers[b].ospf_router_id = plan.routers[a].ospf_router_id;
    f.params["router_id"] = plan.routers[a].ospf_router_id.ToString();
  } else if (kind == "isis-disable-link") {
    LinkInterface* i = t.size() == 3 ? FindIface(plan, t[1], t[2]) : nullptr;
    if (!i || !i->isis) return Inapplicable(f);
    i->isis = false;
  } else if (kind == "isis-demote-l12") {
    RouterPlan* r = router();
    if (!r || !r->isis || r->isis->level != IsisLevel::kLevel12) return Inapplicable(f);
    r->isis->level = IsisLevel::kLevel1;
  } else if (kind == "isis-wrong-area") {
    RouterPlan* r = router();
    if (!r || !r->isis) return Inapplicable(f);
    r->isis->area = "49.0999";
    f.params["area"] = "49.0999";
  } else if (kind == "duplicate-loopback") {
    auto [b, a] = pair();
    if (!plan.routers.count(a) || !plan.routers.count(b)) return Inapplicable(f);
    plan.routers[b].loopbacks.front().address = plan.routers[a].loopbacks.front().address;
    f.params["address"] = plan.routers[a].loopback().ToString();
  } else if (kind == "link-mask-mismatch") {
    LinkInterface* i = t.size() == 3 ? FindIface(plan, t[1], t[2]) : nullptr;
    if (!i || i->address.length != 31) return Inapplicable(f);
    i->address.length = 30;
    f.params["length"] = "30";
  } else if (kind == "link-subnet-mismatch") {
    LinkInterface* i = t.size() == 3 ? FindIface(plan, t[1], t[2]) : nullptr;
    if (!i) return Inapplicable(f);
    uint32_t third = std::uniform_int_distribution<uint32_t>(0, 255)(rng);
    uint32_t fourth = 2 * std::uniform_int_distribution<uint32_t>(0, 127)(rng);
    fourth |= i->address.address.value & 1;
    i->address.address = Ipv4{(10u << 24) | (254u << 16) | (third << 8) | fourth};
    f.params["address"] = absl::StrCat(i->address.address.ToString(), "/", i->address.length);
  } else if (kind == "remove-static-route") {
    RouterPlan* r = router();
    auto p = t.size() == 3 ? Prefix::Parse(t[2]) : std::nullopt;
    if (!r || !p) return Inapplicable(f);
    auto it = std::find_if(r->statics.begin(), r->statics.end(),
                           [&](const StaticRoute& s) { return s.prefix == *p; });
    if (it == r->statics.end()) return Inapplicable(f);
    r->statics.erase(it);
  } else if (kind == "prefix-list-remove-permit") {
    RouterPlan* r = router();
    int seq = 0;
    if (!r || t.size() != 4 || !absl::SimpleAtoi(t[3], &seq) || !r->prefix_lists.count(t[2])) {
      return Inapplicable(f);
    }
    auto& entries = r->prefix_lists[t[2]];
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const PrefixListEntry& e) { return e.seq == seq && e.permit; });
    if (it == entries.end()) return Inapplicable(f);
    f.params["prefix"] = it->prefix.ToString();
    entries.erase(it);
  } else if (kind == "route-map-permit-to-deny" || kind == "lower-local-pref") {
    RouterPlan* r = router();
    int seq = 0;
    if (!r || t.size() != 4 || !absl::SimpleAtoi(t[3], &seq) || !r->route_maps.count(t[2])) {
      return Inapplicable(f);
    }
    auto& clauses = r->route_maps[t[2]];
    auto it = std::find_if(clauses.begin(), clauses.end(),
                           [&](const RouteMapClause& c) { return c.seq == seq && c.permit; });
    if (it == clauses.end()) return Inapplicable(f);
    if (kind == "lower-local-pref") {
      if (!it->set_local_pref) return Inapplicable(f);
      it->set_local_pref = kLoweredLocalPref;
      f.params["local_pref"] = absl::StrCat(kLoweredLocalPref);
    } else {
      // A deny clause carries no set actions.
      it->permit = false;
      it->set_local_pref.reset();
      it->set_next_hop.reset();
    }
  } else if (kind == "drop-bgp-ospf-redistribution") {
    RouterPlan* r = router();
    if (!r || !r->redistribute_bgp_asn) return Inapplicable(f);
    r->redistribute_bgp_asn.reset();
  } else if (kind == "acl-insert-deny-top") {
    RouterPlan* r = router();
    if (!r || t.size() != 3 || !r->acls.count(t[2])) return Inapplicable(f);
    auto& rules = r->acls[t[2]];
    int first = rules.empty() ? 10 : rules.front().seq;
    AclRule deny;
    deny.seq = first > 5 ? std::min(5, first - 1) : first - 1;
    if (deny.seq < 1) return Inapplicable(f);
    deny.permit = false;
    rules.insert(rules.begin(), deny);
    f.params["seq"] = absl::StrCat(deny.seq);
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown fault kind '", kind, "'"));
  }
  return absl::OkStatus();
}

size_t CountBlock(const std::vector<std::string>& lines, size_t from, size_t to,
                  const std::vector<std::string>& all) {
  size_t k = to - from;
  if (k == 0 || k > all.size()) return 0;
  size_t n = 0;
  for (size_t i = 0; i + k <= all.size(); ++i) {
    if (std::equal(lines.begin() + from, lines.begin() + to, all.begin() + i)) ++n;
  }
  return n;
}

json Lines(const std::vector<std::string>& v) { return json(v); }

}  // namespace

absl::string_view FaultClassName(FaultClass c) {
  switch (c) {
    case FaultClass::kBgp:
      return "bgp";
    case FaultClass::kOspf:
      return "ospf";
    case FaultClass::kIsis:
      return "isis";
    case FaultClass::kAddressing:
      return "addressing";
    case FaultClass::kDevice:
      return "device";
    case FaultClass::kPolicy:
      return "policy";
    case FaultClass::kRedistribution:
      return "redistribution";
    case FaultClass::kSecurity:
      return "security";
  }
  return "";
}

const std::vector<FaultKind>& FaultCatalog() {
  static const std::vector<FaultKind>* catalog = new std::vector<FaultKind>(BuildCatalog());
  return *catalog;
}

const FaultKind* FindFaultKind(absl::string_view id) {
  for (const FaultKind& k : FaultCatalog()) {
    if (k.id == id) return &k;
  }
  return nullptr;
}

int FaultKindIndex(absl::string_view id) {
  const auto& c = FaultCatalog();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

json CatalogJson() {
  json kinds = json::array();
  for (const FaultKind& k : FaultCatalog()) {
    kinds.push_back({{"id", k.id},
                     {"class", std::string(FaultClassName(k.protocol_class))},
                     {"required_features", FeatureNames(k.required_features)},
                     {"summary", k.summary},
                     {"expected_effect", k.expected_effect}});
  }
  return {{"version", 1}, {"faults", kinds}};
}

json FaultInstance::ToJson() const {
  return {{"kind", kind}, {"target", target}, {"params", params}};
}

absl::StatusOr<FaultInstance> FaultInstance::FromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.contains("target")) {
    return absl::InvalidArgumentError("fault instance needs 'kind' and 'target'");
  }
  FaultInstance f;
  f.kind = doc.at("kind").get<std::string>();
  f.target = doc.at("target").get<std::string>();
  if (doc.contains("params")) f.params = doc.at("params").get<std::map<std::string, std::string>>();
  if (!FindFaultKind(f.kind)) {
    return absl::InvalidArgumentError(absl::StrCat("unknown fault kind '", f.kind, "'"));
  }
  return f;
}

std::vector<FaultInstance> ApplicableTargets(const LogicalPlan& plan, absl::string_view kind) {
  const FaultKind* k = FindFaultKind(kind);
  if (k == nullptr) return {};
  return Targets(plan, kind);
}

std::set<std::string> Claims(const LogicalPlan& plan, const FaultInstance& f) {
  std::set<std::string> out = {f.target};
  std::vector<std::string> t = SplitTarget(f.target);
  if (f.kind == "bgp-leak-loopback" && t.size() == 3) {
    out.insert(NeighborKey(t[2], t[1]));
  } else if (f.kind == "bgp-invalid-next-hop" && t.size() == 3) {
    auto r = plan.routers.find(t[1]);
    if (r != plan.routers.end() && r->second.route_maps.count(t[2])) {
      for (const RouteMapClause& c : r->second.route_maps.at(t[2])) {
        out.insert(absl::StrCat(f.target, ":", c.seq));
      }
    }
  } else if (f.kind == "rr-orphan-clients" && t.size() == 2) {
    for (const AsPlan& as : plan.ases) {
      for (const RrCluster& c : as.clusters) {
        if (c.reflector != t[1]) continue;
        for (const std::string& client : c.clients) {
          out.insert(NeighborKey(c.reflector, client));
          out.insert(NeighborKey(client, c.reflector));
        }
      }
    }
  } else if (f.kind == "rr-duplicate-cluster-id" && t.size() == 2) {
    std::vector<std::string> p = absl::StrSplit(t[1], '=');
    if (p.size() == 2) out.insert("rr-cluster:" + p[0]);
  } else if (f.kind == "ospf-missing-area" && t.size() == 2) {
    auto r = plan.routers.find(t[1]);
    if (r != plan.routers.end()) {
      for (const LinkInterface& i : r->second.interfaces) {
        if (i.ospf_area) out.insert(absl::StrCat("iface:", t[1], ":", i.ifid));
      }
    }
  }
  return out;
}

int GroundTruthDiff::LinesEdited() const {
  int n = 0;
  for (const DiffHunk& h : hunks) n += std::max(h.removed, h.added);
  return n;
}

EditScript GroundTruthDiff::Forward() const {
  EditScript out;
  for (const DiffHunk& h : hunks) out.push_back({h.router, h.before, h.after});
  return out;
}

EditScript GroundTruthDiff::Backward() const {
  EditScript out;
  for (auto it = hunks.rbegin(); it != hunks.rend(); ++it) {
    out.push_back({it->router, it->after, it->before});
  }
  return out;
}

json GroundTruthDiff::ToJson() const {
  json hs = json::array();
  for (const DiffHunk& h : hunks) {
    hs.push_back({{"router", h.router},
                  {"fault", h.fault},
                  {"line", h.line},
                  {"before", Lines(h.before)},
                  {"after", Lines(h.after)},
                  {"removed", h.removed},
                  {"added", h.added}});
  }
  return {{"affected_routers", affected_routers},
          {"lines_edited", LinesEdited()},
          {"hunks", hs}};
}

absl::StatusOr<GroundTruthDiff> GroundTruthDiff::FromJson(const json& doc) {
  GroundTruthDiff d;
  try {
    for (const json& h : doc.at("hunks")) {
      DiffHunk hunk;
      hunk.router = h.at("router").get<std::string>();
      hunk.fault = h.at("fault").get<std::string>();
      hunk.line = h.at("line").get<int>();
      hunk.before = h.at("before").get<std::vector<std::string>>();
      hunk.after = h.at("after").get<std::vector<std::string>>();
      hunk.removed = h.at("removed").get<int>();
      hunk.added = h.at("added").get<int>();
      d.hunks.push_back(std::move(hunk));
    }
    d.affected_routers = doc.at("affected_routers").get<std::set<std::string>>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad diff document: ", e.what()));
  }
  return d;
}

std::optional<DiffHunk> DiffLines(const std::vector<std::string>& a,
                                  const std::vector<std::string>& b) {
  size_t na = a.size(), nb = b.size();
  size_t s = 0;
  while (s < na && s < nb && a[s] == b[s]) ++s;
  size_t e = 0;
  while (e < na - s && e < nb - s && a[na - 1 - e] == b[nb - 1 - e]) ++e;
  if (s == na - e && s == nb - e) return std::nullopt;
  DiffHunk h;
  h.removed = static_cast<int>(na - e - s);
  h.added = static_cast<int>(nb - e - s);
  // [s, ea) in a and [s, eb) in b; widen symmetrically with shared context.
  size_t lo = s, hia = na - e, hib = nb - e;
  bool above = true;
  while (CountBlock(a, lo, hia, a) != 1 || CountBlock(b, lo, hib, b) != 1) {
    bool can_up = lo > 0;
    bool can_down = hia < na;
    if (!can_up && !can_down) break;
    if ((above && can_up) || !can_down) {
      --lo;
    } else {
      ++hia;
      ++hib;
    }
    above = !above;
  }
  h.line = static_cast<int>(lo) + 1;
  h.before.assign(a.begin() + lo, a.begin() + hia);
  h.after.assign(b.begin() + lo, b.begin() + hib);
  return h;
}

absl::StatusOr<Injection> Inject(const LogicalPlan& plan, const std::vector<FaultInstance>& faults,
                                 uint64_t seed) {
  if (faults.empty()) return absl::InvalidArgumentError("no faults");
  std::map<std::string, std::string> owner;
  for (const FaultInstance& f : faults) {
    if (!FindFaultKind(f.kind)) {
      return absl::InvalidArgumentError(absl::StrCat("unknown fault kind '", f.kind, "'"));
    }
    std::vector<FaultInstance> surface = Targets(plan, f.kind);
    bool found = std::any_of(surface.begin(), surface.end(),
                             [&](const FaultInstance& c) { return c.target == f.target; });
    if (!found) return Inapplicable(f);
    for (const std::string& c : Claims(plan, f)) {
      auto [it, inserted] = owner.emplace(c, f.Label());
      if (!inserted) {
        return absl::FailedPreconditionError(
            absl::StrCat("conflicting bindings: ", it->second, " and ", f.Label()));
      }
    }
  }

  Injection out;
  out.broken = plan;
  ConfigSet golden = Render(plan);
  ConfigSet prev = golden;
  for (size_t i = 0; i < faults.size(); ++i) {
    FaultInstance f = faults[i];
    for (const FaultInstance& c : Targets(plan, f.kind)) {
      if (c.target == f.target) f.params.insert(c.params.begin(), c.params.end());
    }
    Rng rng(DeriveSeed(seed, f.kind, i));
    if (absl::Status s = Apply(out.broken, f, rng); !s.ok()) return s;
    ConfigSet next = Render(out.broken);
    for (const auto& [router, text] : next) {
      const std::string& before = prev.at(router);
      if (before == text) continue;
      auto hunk = DiffLines(SplitLines(before), SplitLines(text));
      if (!hunk) continue;
      hunk->router = router;
      hunk->fault = f.Label();
      out.diff.hunks.push_back(std::move(*hunk));
    }
    out.faults.push_back(std::move(f));
    prev = std::move(next);
  }
  for (const auto& [router, text] : prev) {
    if (golden.at(router) != text) out.diff.affected_routers.insert(router);
  }
  if (out.diff.affected_routers.empty()) {
    return absl::FailedPreconditionError("faults left every configuration unchanged");
  }
  return out;
}

bool ValidateTangibility(const ForwardingTable& golden, const ForwardingTable& broken) {
  if (golden.routers() != broken.routers()) return true;
  for (size_t p = 0; p < golden.universe().size(); ++p) {
    auto bp = broken.PrefixIndex(golden.universe()[p]);
    if (!bp || !golden.SameForwarding(static_cast<int>(p), broken, *bp)) return true;
  }
  return false;
}

std::vector<std::vector<bool>> FeasiblePairs(const LogicalPlan& reference) {
  const auto& catalog = FaultCatalog();
  size_t n = catalog.size();
  std::vector<std::vector<std::set<std::string>>> claims(n);
  for (size_t k = 0; k < n; ++k) {
    for (const FaultInstance& f : ApplicableTargets(reference, catalog[k].id)) {
      claims[k].push_back(Claims(reference, f));
    }
  }
  auto disjoint = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const std::string& x : a) {
      if (b.count(x)) return false;
    }
    return true;
  };
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      bool ok = false;
      for (size_t x = 0; x < claims[i].size() && !ok; ++x) {
        for (size_t y = 0; y < claims[j].size() && !ok; ++y) {
          ok = disjoint(claims[i][x], claims[j][y]);
        }
      }
      out[i][j] = out[j][i] = ok;
    }
  }
  return out;
}

}  // namespace netfix
