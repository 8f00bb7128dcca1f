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

#ifndef NETFIX_FORWARDING_TABLE_H_
#define NETFIX_FORWARDING_TABLE_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "netfix/device_model.h"
#include "netfix/ip.h"
#include "nlohmann/json.hpp"

namespace netfix {

enum class ActionKind { kDrop, kAccept, kForward };

struct ForwardingAction {
  ActionKind kind = ActionKind::kDrop;
  std::vector<int> next_hops;  // router indices, sorted; only for kForward

  friend bool operator==(const ForwardingAction&, const ForwardingAction&) = default;
};

// ACLs met by traffic crossing the link from one router to its neighbor.
struct HopFilter {
  std::optional<std::vector<AclRule>> egress;   // out ACL on the sender
  std::optional<std::vector<AclRule>> ingress;  // in ACL on the receiver

  bool Permits(Ipv4 source, Ipv4 destination) const;
  // True if some rule matches on a specific source.
  bool SourceSensitive() const;
  friend bool operator==(const HopFilter&, const HopFilter&) = default;
};

class ForwardingTable {
 public:
  ForwardingTable() = default;
  // `routers` must be sorted; `universe` is sorted and de-duplicated here.
  // `flow_sources[i]` is the canonical flow source address of router i.
  ForwardingTable(std::vector<std::string> routers, std::vector<Prefix> universe,
                  std::vector<Ipv4> flow_sources);

  const std::vector<std::string>& routers() const { return routers_; }
  const std::vector<Prefix>& universe() const { return universe_; }
  std::optional<int> RouterIndex(absl::string_view name) const;
  std::optional<int> PrefixIndex(const Prefix& p) const;

  const ForwardingAction& Action(int prefix, int router) const {
    return actions_[prefix][router];
  }
  const ForwardingAction& Action(absl::string_view router, const Prefix& p) const;
  void SetAction(int prefix, int router, ForwardingAction action);

  void SetHopFilter(int from, int to, HopFilter filter);
  const HopFilter* FindHopFilter(int from, int to) const;
  const std::map<std::pair<int, int>, HopFilter>& hop_filters() const { return filters_; }
  Ipv4 FlowSource(int router) const { return flow_sources_[router]; }

  // Whether the hop from -> to passes the flow (source router's canonical
  // source, first address of p).
  bool HopPermits(int from, int to, int source_router, const Prefix& p) const;
  // True if mining p needs one forwarding graph per source router.
  bool NeedsPerSourceGraphs(int prefix) const;
  // Same actions and same filters on every hop used, for prefix index
  // `prefix` of this table and `other_prefix` of `other`.
  bool SameForwarding(int prefix, const ForwardingTable& other, int other_prefix) const;

  size_t EntryCount() const { return routers_.size() * universe_.size(); }
  // Number of (router, prefix) entries whose action differs.
  size_t CountDifferences(const ForwardingTable& other) const;

  // Human rows (node, destination, action), one per next hop.
  std::vector<std::array<std::string, 3>> Rows(const Prefix& p, bool short_prefix = false) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<ForwardingTable> FromJson(const nlohmann::json& doc);

  friend bool operator==(const ForwardingTable&, const ForwardingTable&) = default;

 private:
  std::vector<std::string> routers_;
  std::vector<Prefix> universe_;
  std::vector<Ipv4> flow_sources_;
  std::vector<std::vector<ForwardingAction>> actions_;  // [prefix][router]
  std::map<std::pair<int, int>, HopFilter> filters_;
};

}  // namespace netfix

#endif  // NETFIX_FORWARDING_TABLE_H_
