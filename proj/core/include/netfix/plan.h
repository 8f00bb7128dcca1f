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

#ifndef NETFIX_PLAN_H_
#define NETFIX_PLAN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/device_model.h"
#include "netfix/features.h"
#include "netfix/ip.h"
#include "netfix/topo.h"
#include "nlohmann/json.hpp"

namespace netfix {

inline constexpr int kPlanVersion = 1;
inline constexpr uint32_t kFirstAsn = 65001;

enum class Igp { kOspf, kIsis };
enum class SessionKind { kEbgp, kIbgp, kRrClient };
enum class SessionSource { kInterface, kLoopback };

absl::string_view IgpName(Igp igp);
absl::string_view SessionKindName(SessionKind kind);

struct RrCluster {
  Ipv4 cluster_id;
  std::string reflector;
  std::vector<std::string> clients;
};

struct AsPlan {
  uint32_t asn = 0;
  std::vector<std::string> members;  // sorted
  Igp igp = Igp::kOspf;
  bool hierarchical = false;  // OSPF multi-area or IS-IS multi-level
  bool ibgp = false;
  // Empty with ibgp set means full mesh.
  std::vector<RrCluster> clusters;
};

// What one side of a BGP session configures.
struct SessionEnd {
  std::string router;
  Ipv4 neighbor_address;  // the peer address as written in the config
  uint32_t remote_as = 0;
  bool next_hop_self = false;
  bool rr_client = false;  // the peer is this router's client
  bool shutdown = false;
  std::optional<std::string> route_map_in;
  std::optional<std::string> route_map_out;
};

struct Session {
  SessionKind kind = SessionKind::kIbgp;
  SessionSource source = SessionSource::kLoopback;
  SessionEnd a;  // reflector side for kRrClient
  SessionEnd b;

  SessionEnd& End(absl::string_view router) { return a.router == router ? a : b; }
  const SessionEnd& End(absl::string_view router) const { return a.router == router ? a : b; }
  const SessionEnd& Other(absl::string_view router) const { return a.router == router ? b : a; }
};

struct LinkInterface {
  int ifid = 0;
  std::string peer;
  InterfaceAddress address;
  std::optional<uint32_t> ospf_area;
  std::optional<uint32_t> ospf_cost;
  bool isis = false;
  std::optional<std::string> acl_in;
  std::optional<std::string> acl_out;
};

// A locally attached network carried on a loopback (Loopback0 is the router
// address; Loopback1.. are stub LANs).
struct LocalNetwork {
  std::string interface;
  InterfaceAddress address;
  std::optional<uint32_t> ospf_area;
  bool isis = false;
};

struct RouterPlan {
  std::string name;
  uint32_t asn = 0;      // AS membership
  uint32_t bgp_asn = 0;  // ASN in `router bgp`; differs from asn only when faulted
  bool bgp = false;
  bool ospf = false;
  Ipv4 ospf_router_id;
  Ipv4 bgp_router_id;
  std::optional<uint32_t> redistribute_bgp_asn;
  std::optional<IsisProcess> isis;
  std::vector<LocalNetwork> loopbacks;  // [0] is Loopback0
  std::vector<LinkInterface> interfaces;  // sorted by ifid
  std::vector<Prefix> networks;
  std::vector<StaticRoute> statics;
  std::map<std::string, std::vector<PrefixListEntry>> prefix_lists;
  std::map<std::string, std::vector<RouteMapClause>> route_maps;
  std::map<std::string, std::vector<AclRule>> acls;

  Ipv4 loopback() const { return loopbacks.front().address.address; }
  LinkInterface* FindInterface(int ifid);
  const LinkInterface* FindInterface(int ifid) const;
};

struct OriginatedPrefix {
  Prefix prefix;
  std::string router;
  bool via_static = false;
  bool internal_only = false;  // kept out of PL-EXPORT
};

struct LogicalPlan {
  int version = kPlanVersion;
  uint64_t seed = 0;
  FeatureSet features;
  Topology topology;
  std::vector<AsPlan> ases;
  std::vector<std::pair<Link, Prefix>> link_subnets;
  std::map<std::string, RouterPlan> routers;
  std::vector<Session> sessions;
  std::vector<OriginatedPrefix> originated;

  const AsPlan* AsOf(absl::string_view router) const;
  // Routers with at least one eBGP session.
  bool IsAsbr(absl::string_view router) const;
  // Golden destinations: every Loopback0 /32 and every originated prefix.
  std::vector<Prefix> Universe() const;
  nlohmann::json ToJson() const;
};

// AS member lists, AS0 first. Each list is sorted.
std::vector<std::vector<std::string>> PartitionAses(const Topology& t,
                                                    const FeatureSet& features,
                                                    uint64_t seed);

absl::StatusOr<LogicalPlan> BuildPlan(const Topology& t, const FeatureSet& features,
                                      uint64_t seed);

// Checks the intra- and inter-device invariants of a golden plan.
absl::Status ValidatePlan(const LogicalPlan& plan);

// Per-router device models the plan renders to.
std::map<std::string, DeviceModel> DeviceView(const LogicalPlan& plan);
DeviceModel DeviceViewOf(const LogicalPlan& plan, absl::string_view router);

}  // namespace netfix

#endif  // NETFIX_PLAN_H_
