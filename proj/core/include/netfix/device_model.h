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

#ifndef NETFIX_DEVICE_MODEL_H_
#define NETFIX_DEVICE_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netfix/ip.h"
#include "absl/strings/string_view.h"

namespace netfix {

enum class IsisLevel { kLevel1, kLevel2, kLevel12 };

absl::string_view IsisLevelName(IsisLevel level);  // level-1 / level-2-only / level-1-2
std::optional<IsisLevel> IsisLevelFromName(absl::string_view name);
inline bool HasLevel1(IsisLevel l) { return l != IsisLevel::kLevel2; }
inline bool HasLevel2(IsisLevel l) { return l != IsisLevel::kLevel1; }

struct InterfaceAddress {
  Ipv4 address;
  int length = 32;

  Prefix Subnet() const { return Prefix(address, length); }
  friend bool operator==(const InterfaceAddress&, const InterfaceAddress&) = default;
};

struct InterfaceConfig {
  std::string name;
  std::string description;
  std::optional<InterfaceAddress> address;
  std::optional<uint32_t> ospf_area;
  std::optional<uint32_t> ospf_cost;
  bool isis = false;
  std::optional<uint32_t> isis_metric;
  std::optional<std::string> acl_in;
  std::optional<std::string> acl_out;
  bool shutdown = false;

  bool IsLoopback() const { return name.rfind("Loopback", 0) == 0; }
  friend bool operator==(const InterfaceConfig&, const InterfaceConfig&) = default;
};

struct OspfProcess {
  int process_id = 1;
  std::optional<Ipv4> router_id;
  // `redistribute bgp <asn> subnets`
  std::optional<uint32_t> redistribute_bgp_asn;

  friend bool operator==(const OspfProcess&, const OspfProcess&) = default;
};

struct IsisProcess {
  std::string area;       // e.g. "49.0001"
  std::string system_id;  // e.g. "1720.2000.0001"
  IsisLevel level = IsisLevel::kLevel1;

  std::string Net() const { return area + "." + system_id + ".00"; }
  friend bool operator==(const IsisProcess&, const IsisProcess&) = default;
};

struct BgpNeighbor {
  Ipv4 address;
  std::optional<uint32_t> remote_as;
  std::optional<std::string> update_source;
  bool next_hop_self = false;
  bool route_reflector_client = false;
  bool shutdown = false;
  std::optional<std::string> route_map_in;
  std::optional<std::string> route_map_out;

  friend bool operator==(const BgpNeighbor&, const BgpNeighbor&) = default;
};

struct BgpProcess {
  uint32_t asn = 0;
  std::optional<Ipv4> router_id;
  std::optional<Ipv4> cluster_id;
  std::vector<BgpNeighbor> neighbors;
  std::vector<Prefix> networks;

  BgpNeighbor* FindNeighbor(Ipv4 address);
  const BgpNeighbor* FindNeighbor(Ipv4 address) const;
  friend bool operator==(const BgpProcess&, const BgpProcess&) = default;
};

struct PrefixListEntry {
  int seq = 5;
  bool permit = true;
  Prefix prefix;
  std::optional<int> ge;
  std::optional<int> le;

  bool Matches(const Prefix& p) const;
  friend bool operator==(const PrefixListEntry&, const PrefixListEntry&) = default;
};

struct RouteMapClause {
  int seq = 10;
  bool permit = true;
  std::optional<std::string> match_prefix_list;
  std::optional<uint32_t> set_local_pref;
  std::optional<Ipv4> set_next_hop;

  friend bool operator==(const RouteMapClause&, const RouteMapClause&) = default;
};

// `any`, `host A.B.C.D` or `A.B.C.D W.W.W.W` (wildcard bits).
struct AddressMatch {
  enum class Kind { kAny, kHost, kWildcard };
  Kind kind = Kind::kAny;
  Ipv4 address;
  Ipv4 wildcard;

  bool Matches(Ipv4 a) const;
  std::string ToString() const;
  friend bool operator==(const AddressMatch&, const AddressMatch&) = default;
};

struct AclRule {
  int seq = 10;
  bool permit = true;
  AddressMatch source;
  AddressMatch destination;

  friend bool operator==(const AclRule&, const AclRule&) = default;
};

// First-match evaluation with implicit deny; an empty list permits.
bool AclPermits(const std::vector<AclRule>& rules, Ipv4 source, Ipv4 destination);

struct StaticRoute {
  Prefix prefix;
  std::optional<Ipv4> next_hop;
  std::optional<std::string> interface;  // e.g. Null0, Loopback0

  friend bool operator==(const StaticRoute&, const StaticRoute&) = default;
};

// Structured per-router view of a configuration file.
struct DeviceModel {
  std::string hostname;
  std::vector<InterfaceConfig> interfaces;
  std::optional<OspfProcess> ospf;
  std::optional<IsisProcess> isis;
  std::optional<BgpProcess> bgp;
  std::map<std::string, std::vector<PrefixListEntry>> prefix_lists;
  std::map<std::string, std::vector<RouteMapClause>> route_maps;
  std::vector<StaticRoute> statics;
  std::map<std::string, std::vector<AclRule>> acls;

  InterfaceConfig* FindInterface(absl::string_view name);
  const InterfaceConfig* FindInterface(absl::string_view name) const;
  friend bool operator==(const DeviceModel&, const DeviceModel&) = default;
};

}  // namespace netfix

#endif  // NETFIX_DEVICE_MODEL_H_
