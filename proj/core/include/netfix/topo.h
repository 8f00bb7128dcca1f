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

#ifndef NETFIX_TOPO_H_
#define NETFIX_TOPO_H_

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nlohmann/json.hpp"
#include "absl/strings/string_view.h"

namespace netfix {

// One side of a physical link.
struct Endpoint {
  std::string router;
  int ifid = 0;

  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

// An undirected point-to-point link; `a` < `b` after construction.
struct Link {
  Endpoint a;
  Endpoint b;

  friend auto operator<=>(const Link&, const Link&) = default;
};

// Name of the physical interface with the given id, e.g. GigabitEthernet0/3.
std::string InterfaceName(int ifid);
std::optional<int> InterfaceIdFromName(absl::string_view name);

// Undirected device/interface graph. Immutable after construction.
class Topology {
 public:
  // Validates the invariants (no self-loops, no duplicate links, endpoints
  // used once, connected) and canonicalizes ordering.
  static absl::StatusOr<Topology> Create(std::string name,
                                         std::vector<std::string> routers,
                                         std::vector<Link> links,
                                         std::vector<std::string> warnings = {});

  const std::string& name() const { return name_; }
  // Sorted router names.
  const std::vector<std::string>& routers() const { return routers_; }
  // Sorted links.
  const std::vector<Link>& links() const { return links_; }
  size_t size() const { return routers_.size(); }

  std::optional<int> Index(absl::string_view router) const;
  bool HasRouter(absl::string_view router) const { return Index(router).has_value(); }
  // Neighbors of `router`, sorted by name.
  const std::vector<std::string>& Neighbors(absl::string_view router) const;
  int Degree(absl::string_view router) const;
  // The link joining two routers, if any.
  const Link* LinkBetween(absl::string_view a, absl::string_view b) const;
  // The link attached to a router interface, if any.
  const Link* LinkAt(const Endpoint& endpoint) const;
  // The far end of the link at `endpoint`.
  std::optional<Endpoint> Peer(const Endpoint& endpoint) const;
  // Interfaces on `router`, sorted by id.
  std::vector<int> InterfaceIds(absl::string_view router) const;

  // Native document: {name, routers, links: [[r, ifid, r, ifid], ...]}.
  nlohmann::json ToJson() const;

  // Non-fatal notices produced while loading (e.g. collapsed parallel edges).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::string name_;
  std::vector<std::string> routers_;
  std::vector<Link> links_;
  std::map<std::string, int, std::less<>> index_;
  std::vector<std::vector<std::string>> neighbors_;
  std::map<std::pair<std::string, std::string>, size_t> link_by_pair_;
  std::map<Endpoint, size_t> link_by_endpoint_;
  std::vector<std::string> warnings_;
};

// Parses either a native JSON document or a Topology Zoo style GML document.
// `fallback_name` names GML graphs that carry no usable label.
absl::StatusOr<Topology> LoadTopology(absl::string_view document,
                                      absl::string_view fallback_name = "topology");
absl::StatusOr<Topology> LoadTopologyFile(const std::string& path);

// Lowercase alphanumeric-plus-hyphen hostname form of a node label.
std::string SanitizeRouterName(absl::string_view label);

enum class Tier { kSmall, kMedium, kLarge };

// Small < 50 routers, Medium 50..100 inclusive, Large > 100.
Tier ClassifyTier(size_t router_count);
inline Tier ClassifyTier(const Topology& t) { return ClassifyTier(t.size()); }
absl::string_view TierName(Tier tier);
std::optional<Tier> TierFromName(absl::string_view name);

}  // namespace netfix

#endif  // NETFIX_TOPO_H_
