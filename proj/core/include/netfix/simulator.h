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

#ifndef NETFIX_SIMULATOR_H_
#define NETFIX_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/device_model.h"
#include "netfix/forwarding_table.h"
#include "netfix/ip.h"
#include "netfix/topo.h"

namespace netfix {

enum class Protocol { kConnected, kStatic, kOspf, kIsis, kEbgp, kIbgp };

absl::string_view ProtocolName(Protocol p);
int AdminDistance(Protocol p);

// A selected route in a router's RIB.
struct RouteEntry {
  Prefix prefix;
  Protocol protocol = Protocol::kConnected;
  uint32_t igp_metric = 0;
  uint32_t local_pref = 0;
  uint32_t as_path_length = 0;
  Ipv4 origin_router_id;
  Ipv4 next_hop;
  std::string learned_from;
  ForwardingAction action;

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

struct BgpSessionState {
  std::string a;
  std::string b;
  bool ebgp = false;
  size_t routes_to_a = 0;  // routes a accepted from b
  size_t routes_to_b = 0;
};

struct SimulationResult {
  ForwardingTable table;
  std::map<std::string, std::vector<RouteEntry>> ribs;
  std::vector<BgpSessionState> sessions;
  int bgp_rounds = 0;

  size_t RouteCount() const;
};

struct SimulationOptions {
  // Visit BGP speakers in reverse name order. The fixpoint must not depend
  // on it.
  bool reverse_speaker_order = false;
};

// Routers missing from `models` are simulated with an empty configuration.
absl::StatusOr<SimulationResult> ComputeDataplane(
    const std::map<std::string, DeviceModel>& models, const Topology& t,
    const std::vector<Prefix>& universe, const SimulationOptions& options = {});

// True iff `router`'s connected/IGP/static forwarding delivers `address` to
// some router owning it.
bool ReachableTransport(const std::map<std::string, DeviceModel>& models, const Topology& t,
                        absl::string_view router, Ipv4 address);

// RIB entries present in one result and absent or different in the other.
size_t CountRouteDifferences(const SimulationResult& a, const SimulationResult& b);

}  // namespace netfix

#endif  // NETFIX_SIMULATOR_H_
