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

#include "netfix/topo.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"

namespace netfix {
namespace {

constexpr absl::string_view kInterfacePrefix = "GigabitEthernet0/";

const std::vector<std::string> kNoNeighbors;

// Minimal GML reader: a GML document is a list of `key value` pairs where a
// value is a number, a quoted string or a bracketed nested list.
struct GmlValue {
  std::string scalar;
  bool is_list = false;
  std::vector<std::pair<std::string, GmlValue>> items;

  const GmlValue* Find(absl::string_view key) const {
    for (const auto& [k, v] : items) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

class GmlParser {
 public:
  explicit GmlParser(absl::string_view text) : text_(text) {}

  absl::StatusOr<GmlValue> ParseDocument() {
    GmlValue root;
    root.is_list = true;
    absl::Status status = ParseItems(root, /*nested=*/false);
    if (!status.ok()) return status;
    return root;
  }

 private:
  void SkipSpace() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string ReadToken() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '[' && text_[pos_] != ']') {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  absl::Status ParseItems(GmlValue& list, bool nested) {
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) {
        if (nested) return absl::InvalidArgumentError("gml: unterminated list");
        return absl::OkStatus();
      }
      if (text_[pos_] == ']') {
        if (!nested) return absl::InvalidArgumentError("gml: unbalanced ']'");
        ++pos_;
        return absl::OkStatus();
      }
      std::string key = ReadToken();
      if (key.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("gml: expected key at offset ", pos_));
      }
      SkipSpace();
      if (pos_ >= text_.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("gml: missing value for key '", key, "'"));
      }
      GmlValue value;
      char c = text_[pos_];
      if (c == '[') {
        ++pos_;
        value.is_list = true;
        absl::Status status = ParseItems(value, /*nested=*/true);
        if (!status.ok()) return status;
      } else if (c == '"') {
        size_t end = text_.find('"', pos_ + 1);
        if (end == absl::string_view::npos) {
          return absl::InvalidArgumentError("gml: unterminated string");
        }
        value.scalar = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
      } else {
        value.scalar = ReadToken();
      }
      list.items.emplace_back(std::move(key), std::move(value));
    }
  }

  absl::string_view text_;
  size_t pos_ = 0;
};

std::optional<long> ParseLong(absl::string_view s) {
  long v = 0;
  // Topology Zoo ids are integers but some exporters write "3.0".
  size_t dot = s.find('.');
  absl::string_view digits = s.substr(0, dot);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

// Assigns interface ids per router in sorted-neighbor order.
std::vector<Link> AssignInterfaces(
    const std::set<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> neighbors;
  for (const auto& [a, b] : edges) {
    neighbors[a].push_back(b);
    neighbors[b].push_back(a);
  }
  for (auto& [r, n] : neighbors) std::sort(n.begin(), n.end());
  auto ifid = [&](const std::string& r, const std::string& n) {
    const auto& list = neighbors[r];
    return static_cast<int>(std::lower_bound(list.begin(), list.end(), n) -
                            list.begin());
  };
  std::vector<Link> links;
  for (const auto& [a, b] : edges) {
    links.push_back(Link{{a, ifid(a, b)}, {b, ifid(b, a)}});
  }
  return links;
}

absl::StatusOr<Topology> LoadGml(absl::string_view document,
                                 absl::string_view fallback_name) {
  GmlParser parser(document);
  absl::StatusOr<GmlValue> root = parser.ParseDocument();
  if (!root.ok()) return root.status();
  const GmlValue* graph = root->Find("graph");
  if (graph == nullptr || !graph->is_list) {
    return absl::InvalidArgumentError("gml: no graph block");
  }
  std::string name(fallback_name);
  if (const GmlValue* label = graph->Find("label"); label && !label->is_list) {
    std::string sanitized = SanitizeRouterName(label->scalar);
    if (!sanitized.empty()) name = sanitized;
  }
  std::map<long, std::string> names;
  std::set<std::string> taken;
  std::vector<std::string> warnings;
  for (const auto& [key, value] : graph->items) {
    if (key != "node" || !value.is_list) continue;
    const GmlValue* id = value.Find("id");
    if (id == nullptr) return absl::InvalidArgumentError("gml: node without id");
    std::optional<long> node_id = ParseLong(id->scalar);
    if (!node_id) return absl::InvalidArgumentError("gml: non-integer node id");
    if (names.count(*node_id)) {
      return absl::InvalidArgumentError(
          absl::StrCat("gml: duplicate node id ", *node_id));
    }
    std::string base;
    if (const GmlValue* label = value.Find("label"); label && !label->is_list) {
      base = SanitizeRouterName(label->scalar);
    }
    if (base.empty()) base = absl::StrCat("n", *node_id);
    std::string router = base;
    for (int suffix = 2; taken.count(router); ++suffix) {
      router = absl::StrCat(base, "-", suffix);
    }
    taken.insert(router);
    names[*node_id] = router;
  }
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& [key, value] : graph->items) {
    if (key != "edge" || !value.is_list) continue;
    const GmlValue* source = value.Find("source");
    const GmlValue* target = value.Find("target");
    if (source == nullptr || target == nullptr) {
      return absl::InvalidArgumentError("gml: edge without source/target");
    }
    std::optional<long> s = ParseLong(source->scalar);
    std::optional<long> t = ParseLong(target->scalar);
    if (!s || !t || !names.count(*s) || !names.count(*t)) {
      return absl::InvalidArgumentError("gml: edge references unknown node");
    }
    if (*s == *t) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on node ", names[*s]));
    }
    std::pair<std::string, std::string> edge{names[*s], names[*t]};
    if (edge.first > edge.second) std::swap(edge.first, edge.second);
    if (!edges.insert(edge).second) {
      warnings.push_back(absl::StrCat("collapsed parallel edge ", edge.first,
                                      " -- ", edge.second));
    }
  }
  std::vector<std::string> routers;
  for (const auto& [id, router] : names) routers.push_back(router);
  return Topology::Create(std::move(name), std::move(routers),
                          AssignInterfaces(edges), std::move(warnings));
}

absl::StatusOr<Topology> LoadNative(absl::string_view document) {
  nlohmann::json doc = nlohmann::json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("topology: malformed JSON document");
  }
  if (!doc.contains("routers") || !doc["routers"].is_array() ||
      !doc.contains("links") || !doc["links"].is_array()) {
    return absl::InvalidArgumentError("topology: missing routers/links");
  }
  std::string name = doc.value("name", "topology");
  std::vector<std::string> routers;
  for (const auto& r : doc["routers"]) {
    if (!r.is_string()) return absl::InvalidArgumentError("topology: router name must be a string");
    routers.push_back(r.get<std::string>());
  }
  std::vector<Link> links;
  std::vector<std::string> warnings;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& l : doc["links"]) {
    if (!l.is_array() || l.size() != 4 || !l[0].is_string() ||
        !l[1].is_number_integer() || !l[2].is_string() ||
        !l[3].is_number_integer()) {
      return absl::InvalidArgumentError(
          "topology: link must be [router, ifid, router, ifid]");
    }
    Link link{{l[0].get<std::string>(), l[1].get<int>()},
              {l[2].get<std::string>(), l[3].get<int>()}};
    if (link.a.router == link.b.router) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on router ", link.a.router));
    }
    if (link.b < link.a) std::swap(link.a, link.b);
    if (std::find(links.begin(), links.end(), link) != links.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate link ", link.a.router, " -- ", link.b.router));
    }
    if (!pairs.insert({link.a.router, link.b.router}).second) {
      warnings.push_back(absl::StrCat("collapsed parallel edge ", link.a.router,
                                      " -- ", link.b.router));
      continue;
    }
    links.push_back(std::move(link));
  }
  return Topology::Create(std::move(name), std::move(routers), std::move(links),
                          std::move(warnings));
}

}  // namespace

std::string InterfaceName(int ifid) {
  return absl::StrCat(kInterfacePrefix, ifid);
}

std::optional<int> InterfaceIdFromName(absl::string_view name) {
  if (!absl::StartsWith(name, kInterfacePrefix)) return std::nullopt;
  absl::string_view digits = name.substr(kInterfacePrefix.size());
  int id = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    return std::nullopt;
  }
  return id;
}

absl::StatusOr<Topology> Topology::Create(std::string name,
                                          std::vector<std::string> routers,
                                          std::vector<Link> links,
                                          std::vector<std::string> warnings) {
  Topology t;
  t.name_ = std::move(name);
  std::sort(routers.begin(), routers.end());
  if (std::adjacent_find(routers.begin(), routers.end()) != routers.end()) {
    return absl::InvalidArgumentError("duplicate router name");
  }
  if (routers.empty()) return absl::InvalidArgumentError("topology has no routers");
  t.routers_ = std::move(routers);
  for (size_t i = 0; i < t.routers_.size(); ++i) t.index_[t.routers_[i]] = i;
  for (Link& link : links) {
    if (link.b < link.a) std::swap(link.a, link.b);
  }
  std::sort(links.begin(), links.end());
  t.neighbors_.resize(t.routers_.size());
  for (size_t i = 0; i < links.size(); ++i) {
    const Link& link = links[i];
    if (!t.index_.count(link.a.router) || !t.index_.count(link.b.router)) {
      return absl::InvalidArgumentError("link references unknown router");
    }
    if (link.a.router == link.b.router) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on router ", link.a.router));
    }
    if (i > 0 && links[i - 1] == link) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate link ", link.a.router, " -- ", link.b.router));
    }
    for (const Endpoint& e : {link.a, link.b}) {
      if (e.ifid < 0) return absl::InvalidArgumentError("negative interface id");
      if (!t.link_by_endpoint_.emplace(e, i).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("interface ", e.router, ":", e.ifid,
                         " used by more than one link"));
      }
    }
    if (!t.link_by_pair_.emplace(std::make_pair(link.a.router, link.b.router), i)
             .second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate link ", link.a.router, " -- ", link.b.router));
    }
    t.link_by_pair_.emplace(std::make_pair(link.b.router, link.a.router), i);
    t.neighbors_[t.index_[link.a.router]].push_back(link.b.router);
    t.neighbors_[t.index_[link.b.router]].push_back(link.a.router);
  }
  t.links_ = std::move(links);
  for (auto& n : t.neighbors_) std::sort(n.begin(), n.end());

  std::vector<bool> seen(t.routers_.size(), false);
  std::queue<size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  size_t visited = 1;
  while (!frontier.empty()) {
    size_t r = frontier.front();
    frontier.pop();
    for (const std::string& n : t.neighbors_[r]) {
      size_t j = t.index_[n];
      if (!seen[j]) {
        seen[j] = true;
        ++visited;
        frontier.push(j);
      }
    }
  }
  if (visited != t.routers_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("topology is disconnected (", visited, " of ",
                     t.routers_.size(), " routers reachable)"));
  }
  t.warnings_ = std::move(warnings);
  return t;
}

std::optional<int> Topology::Index(absl::string_view router) const {
  auto it = index_.find(router);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& Topology::Neighbors(absl::string_view router) const {
  std::optional<int> i = Index(router);
  return i ? neighbors_[*i] : kNoNeighbors;
}

int Topology::Degree(absl::string_view router) const {
  return static_cast<int>(Neighbors(router).size());
}

const Link* Topology::LinkBetween(absl::string_view a, absl::string_view b) const {
  auto it = link_by_pair_.find({std::string(a), std::string(b)});
  return it == link_by_pair_.end() ? nullptr : &links_[it->second];
}

const Link* Topology::LinkAt(const Endpoint& endpoint) const {
  auto it = link_by_endpoint_.find(endpoint);
  return it == link_by_endpoint_.end() ? nullptr : &links_[it->second];
}

std::optional<Endpoint> Topology::Peer(const Endpoint& endpoint) const {
  const Link* link = LinkAt(endpoint);
  if (link == nullptr) return std::nullopt;
  return link->a == endpoint ? link->b : link->a;
}

std::vector<int> Topology::InterfaceIds(absl::string_view router) const {
  std::vector<int> ids;
  for (auto it = link_by_endpoint_.lower_bound(Endpoint{std::string(router), 0});
       it != link_by_endpoint_.end() && it->first.router == router; ++it) {
    ids.push_back(it->first.ifid);
  }
  return ids;
}

nlohmann::json Topology::ToJson() const {
  nlohmann::json links = nlohmann::json::array();
  for (const Link& l : links_) {
    links.push_back({l.a.router, l.a.ifid, l.b.router, l.b.ifid});
  }
  return {{"name", name_}, {"routers", routers_}, {"links", std::move(links)}};
}

absl::StatusOr<Topology> LoadTopology(absl::string_view document,
                                      absl::string_view fallback_name) {
  size_t first = document.find_first_not_of(" \t\r\n");
  if (first != absl::string_view::npos && document[first] == '{') {
    return LoadNative(document);
  }
  return LoadGml(document, fallback_name);
}

absl::StatusOr<Topology> LoadTopologyFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot read ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return LoadTopology(buffer.str(), SanitizeRouterName(stem));
}

std::string SanitizeRouterName(absl::string_view label) {
  std::string out;
  for (char c : label) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

Tier ClassifyTier(size_t router_count) {
  if (router_count < 50) return Tier::kSmall;
  if (router_count <= 100) return Tier::kMedium;
  return Tier::kLarge;
}

absl::string_view TierName(Tier tier) {
  switch (tier) {
    case Tier::kSmall:
      return "small";
    case Tier::kMedium:
      return "medium";
    case Tier::kLarge:
      return "large";
  }
  return "small";
}

std::optional<Tier> TierFromName(absl::string_view name) {
  if (name == "small") return Tier::kSmall;
  if (name == "medium") return Tier::kMedium;
  if (name == "large") return Tier::kLarge;
  return std::nullopt;
}

}  // namespace netfix
