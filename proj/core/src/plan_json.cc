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

// Canonical plan document. nlohmann::json objects keep keys sorted, which
// gives the stable key order plan.json relies on.

#include "absl/strings/str_cat.h"
#include "netfix/plan.h"

namespace netfix {
namespace {

using nlohmann::json;

json AddressJson(const InterfaceAddress& a) {
  return absl::StrCat(a.address.ToString(), "/", a.length);
}

template <typename T>
json Opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json EndJson(const SessionEnd& e) {
  return {{"router", e.router},
          {"neighbor", e.neighbor_address.ToString()},
          {"remote_as", e.remote_as},
          {"next_hop_self", e.next_hop_self},
          {"rr_client", e.rr_client},
          {"shutdown", e.shutdown},
          {"route_map_in", Opt(e.route_map_in)},
          {"route_map_out", Opt(e.route_map_out)}};
}

json PolicyJson(const RouterPlan& rp) {
  json pl = json::object();
  for (const auto& [name, entries] : rp.prefix_lists) {
    json rows = json::array();
    for (const PrefixListEntry& e : entries) {
      rows.push_back({{"seq", e.seq},
                      {"action", e.permit ? "permit" : "deny"},
                      {"prefix", e.prefix.ToString()},
                      {"ge", Opt(e.ge)},
                      {"le", Opt(e.le)}});
    }
    pl[name] = rows;
  }
  json rm = json::object();
  for (const auto& [name, clauses] : rp.route_maps) {
    json rows = json::array();
    for (const RouteMapClause& c : clauses) {
      rows.push_back({{"seq", c.seq},
                      {"action", c.permit ? "permit" : "deny"},
                      {"match_prefix_list", Opt(c.match_prefix_list)},
                      {"set_local_pref", Opt(c.set_local_pref)},
                      {"set_next_hop", c.set_next_hop ? json(c.set_next_hop->ToString())
                                                      : json(nullptr)}});
    }
    rm[name] = rows;
  }
  json acls = json::object();
  for (const auto& [name, rules] : rp.acls) {
    json rows = json::array();
    for (const AclRule& r : rules) {
      rows.push_back({{"seq", r.seq},
                      {"action", r.permit ? "permit" : "deny"},
                      {"source", r.source.ToString()},
                      {"destination", r.destination.ToString()}});
    }
    acls[name] = rows;
  }
  return {{"prefix_lists", pl}, {"route_maps", rm}, {"acls", acls}};
}

json RouterJson(const RouterPlan& rp) {
  json loopbacks = json::array();
  for (const LocalNetwork& l : rp.loopbacks) {
    loopbacks.push_back({{"interface", l.interface},
                         {"address", AddressJson(l.address)},
                         {"ospf_area", Opt(l.ospf_area)},
                         {"isis", l.isis}});
  }
  json interfaces = json::array();
  for (const LinkInterface& i : rp.interfaces) {
    interfaces.push_back({{"ifid", i.ifid},
                          {"name", InterfaceName(i.ifid)},
                          {"peer", i.peer},
                          {"address", AddressJson(i.address)},
                          {"ospf_area", Opt(i.ospf_area)},
                          {"ospf_cost", Opt(i.ospf_cost)},
                          {"isis", i.isis},
                          {"acl_in", Opt(i.acl_in)},
                          {"acl_out", Opt(i.acl_out)}});
  }
  json networks = json::array();
  for (const Prefix& p : rp.networks) networks.push_back(p.ToString());
  json statics = json::array();
  for (const StaticRoute& s : rp.statics) {
    statics.push_back({{"prefix", s.prefix.ToString()},
                       {"next_hop", s.next_hop ? json(s.next_hop->ToString()) : json(nullptr)},
                       {"interface", Opt(s.interface)}});
  }
  json out = {{"asn", rp.asn},
              {"bgp", rp.bgp},
              {"bgp_asn", rp.bgp_asn},
              {"bgp_router_id", rp.bgp_router_id.ToString()},
              {"ospf", rp.ospf},
              {"ospf_router_id", rp.ospf_router_id.ToString()},
              {"redistribute_bgp_asn", Opt(rp.redistribute_bgp_asn)},
              {"loopbacks", loopbacks},
              {"interfaces", interfaces},
              {"networks", networks},
              {"statics", statics},
              {"policies", PolicyJson(rp)}};
  if (rp.isis) {
    out["isis"] = {{"area", rp.isis->area},
                   {"system_id", rp.isis->system_id},
                   {"level", IsisLevelName(rp.isis->level)}};
  } else {
    out["isis"] = nullptr;
  }
  return out;
}

}  // namespace

nlohmann::json LogicalPlan::ToJson() const {
  json ases_json = json::array();
  for (const AsPlan& as : ases) {
    json clusters = json::array();
    for (const RrCluster& c : as.clusters) {
      clusters.push_back({{"cluster_id", c.cluster_id.ToString()},
                          {"reflector", c.reflector},
                          {"clients", c.clients}});
    }
    ases_json.push_back({{"asn", as.asn},
                         {"members", as.members},
                         {"igp", IgpName(as.igp)},
                         {"hierarchical", as.hierarchical},
                         {"ibgp", as.ibgp ? (as.clusters.empty() ? "full-mesh" : "rr-clusters")
                                          : "none"},
                         {"clusters", clusters}});
  }
  json subnets = json::array();
  for (const auto& [link, prefix] : link_subnets) {
    subnets.push_back({{"a", link.a.router},
                       {"a_ifid", link.a.ifid},
                       {"b", link.b.router},
                       {"b_ifid", link.b.ifid},
                       {"subnet", prefix.ToString()}});
  }
  json routers_json = json::object();
  for (const auto& [name, rp] : routers) routers_json[name] = RouterJson(rp);
  json sessions_json = json::array();
  for (const Session& s : sessions) {
    sessions_json.push_back({{"kind", SessionKindName(s.kind)},
                             {"source", s.source == SessionSource::kLoopback ? "loopback"
                                                                             : "interface"},
                             {"a", EndJson(s.a)},
                             {"b", EndJson(s.b)}});
  }
  json originated_json = json::array();
  for (const OriginatedPrefix& o : originated) {
    originated_json.push_back({{"prefix", o.prefix.ToString()},
                               {"router", o.router},
                               {"via_static", o.via_static},
                               {"internal_only", o.internal_only}});
  }
  return {{"version", version},
          {"seed", seed},
          {"features", FeatureNames(features)},
          {"topology", topology.name()},
          {"ases", ases_json},
          {"link_subnets", subnets},
          {"routers", routers_json},
          {"sessions", sessions_json},
          {"originated", originated_json}};
}

}  // namespace netfix
