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

#include "netfix/forwarding_table.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace netfix {
namespace {

using nlohmann::json;

bool RuleSourceSpecific(const AclRule& r) { return r.source.kind != AddressMatch::Kind::kAny; }

json RulesJson(const std::vector<AclRule>& rules) {
  json out = json::array();
  for (const AclRule& r : rules) {
    out.push_back({{"seq", r.seq},
                   {"action", r.permit ? "permit" : "deny"},
                   {"source", r.source.ToString()},
                   {"destination", r.destination.ToString()}});
  }
  return out;
}

std::optional<AddressMatch> ParseMatch(const std::string& text) {
  std::vector<std::string> parts = absl::StrSplit(text, ' ');
  AddressMatch m;
  if (parts.size() == 1 && parts[0] == "any") return m;
  if (parts.size() != 2) return std::nullopt;
  auto b = Ipv4::Parse(parts[1]);
  if (!b) return std::nullopt;
  if (parts[0] == "host") {
    m.kind = AddressMatch::Kind::kHost;
    m.address = *b;
    return m;
  }
  auto a = Ipv4::Parse(parts[0]);
  if (!a) return std::nullopt;
  m.kind = AddressMatch::Kind::kWildcard;
  m.address = *a;
  m.wildcard = *b;
  return m;
}

absl::StatusOr<std::optional<std::vector<AclRule>>> RulesFromJson(const json& j) {
  if (j.is_null()) return std::optional<std::vector<AclRule>>();
  std::vector<AclRule> rules;
  for (const json& r : j) {
    AclRule rule;
    rule.seq = r.at("seq").get<int>();
    rule.permit = r.at("action").get<std::string>() == "permit";
    auto s = ParseMatch(r.at("source").get<std::string>());
    auto d = ParseMatch(r.at("destination").get<std::string>());
    if (!s || !d) return absl::InvalidArgumentError("bad ACL rule in forwarding table");
    rule.source = *s;
    rule.destination = *d;
    rules.push_back(rule);
  }
  return std::optional<std::vector<AclRule>>(std::move(rules));
}

}  // namespace

bool HopFilter::Permits(Ipv4 source, Ipv4 destination) const {
  if (egress && !AclPermits(*egress, source, destination)) return false;
  if (ingress && !AclPermits(*ingress, source, destination)) return false;
  return true;
}

bool HopFilter::SourceSensitive() const {
  for (const auto* rules : {&egress, &ingress}) {
    if (*rules && std::any_of((*rules)->begin(), (*rules)->end(), RuleSourceSpecific)) {
      return true;
    }
  }
  return false;
}

ForwardingTable::ForwardingTable(std::vector<std::string> routers, std::vector<Prefix> universe,
                                 std::vector<Ipv4> flow_sources)
    : routers_(std::move(routers)),
      universe_(std::move(universe)),
      flow_sources_(std::move(flow_sources)) {
  std::sort(universe_.begin(), universe_.end());
  universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());
  flow_sources_.resize(routers_.size());
  actions_.assign(universe_.size(), std::vector<ForwardingAction>(routers_.size()));
}

std::optional<int> ForwardingTable::RouterIndex(absl::string_view name) const {
  auto it = std::lower_bound(routers_.begin(), routers_.end(), name);
  if (it == routers_.end() || *it != name) return std::nullopt;
  return static_cast<int>(it - routers_.begin());
}

std::optional<int> ForwardingTable::PrefixIndex(const Prefix& p) const {
  auto it = std::lower_bound(universe_.begin(), universe_.end(), p);
  if (it == universe_.end() || *it != p) return std::nullopt;
  return static_cast<int>(it - universe_.begin());
}

const ForwardingAction& ForwardingTable::Action(absl::string_view router, const Prefix& p) const {
  return actions_[PrefixIndex(p).value()][RouterIndex(router).value()];
}

void ForwardingTable::SetAction(int prefix, int router, ForwardingAction action) {
  std::sort(action.next_hops.begin(), action.next_hops.end());
  action.next_hops.erase(std::unique(action.next_hops.begin(), action.next_hops.end()),
                         action.next_hops.end());
  actions_[prefix][router] = std::move(action);
}

void ForwardingTable::SetHopFilter(int from, int to, HopFilter filter) {
  filters_[{from, to}] = std::move(filter);
}

const HopFilter* ForwardingTable::FindHopFilter(int from, int to) const {
  auto it = filters_.find({from, to});
  return it == filters_.end() ? nullptr : &it->second;
}

bool ForwardingTable::HopPermits(int from, int to, int source_router, const Prefix& p) const {
  const HopFilter* f = FindHopFilter(from, to);
  return f == nullptr || f->Permits(flow_sources_[source_router], p.network);
}

bool ForwardingTable::NeedsPerSourceGraphs(int prefix) const {
  if (filters_.empty()) return false;
  for (size_t r = 0; r < routers_.size(); ++r) {
    for (int s : actions_[prefix][r].next_hops) {
      const HopFilter* f = FindHopFilter(static_cast<int>(r), s);
      if (f != nullptr && f->SourceSensitive()) return true;
    }
  }
  return false;
}

bool ForwardingTable::SameForwarding(int prefix, const ForwardingTable& other,
                                     int other_prefix) const {
  if (actions_[prefix] != other.actions_[other_prefix]) return false;
  for (size_t r = 0; r < routers_.size(); ++r) {
    for (int s : actions_[prefix][r].next_hops) {
      const HopFilter* a = FindHopFilter(static_cast<int>(r), s);
      const HopFilter* b = other.FindHopFilter(static_cast<int>(r), s);
      if ((a == nullptr) != (b == nullptr)) return false;
      if (a != nullptr && !(*a == *b)) return false;
      if (a != nullptr && flow_sources_ != other.flow_sources_) return false;
    }
  }
  return true;
}

size_t ForwardingTable::CountDifferences(const ForwardingTable& other) const {
  size_t n = 0;
  for (size_t p = 0; p < universe_.size(); ++p) {
    auto op = other.PrefixIndex(universe_[p]);
    for (size_t r = 0; r < routers_.size(); ++r) {
      if (!op || !(actions_[p][r] == other.actions_[*op][r])) ++n;
    }
  }
  return n;
}

std::vector<std::array<std::string, 3>> ForwardingTable::Rows(const Prefix& p,
                                                              bool short_prefix) const {
  std::vector<std::array<std::string, 3>> rows;
  auto pi = PrefixIndex(p);
  if (!pi) return rows;
  std::string dest = short_prefix ? p.ToShortString() : p.ToString();
  for (size_t r = 0; r < routers_.size(); ++r) {
    const ForwardingAction& a = actions_[*pi][r];
    switch (a.kind) {
      case ActionKind::kDrop:
        rows.push_back({routers_[r], dest, "Drop"});
        break;
      case ActionKind::kAccept:
        rows.push_back({routers_[r], dest, "Accept"});
        break;
      case ActionKind::kForward:
        for (int s : a.next_hops) rows.push_back({routers_[r], dest, "Fwd " + routers_[s]});
        break;
    }
  }
  return rows;
}

nlohmann::json ForwardingTable::ToJson() const {
  json universe = json::array();
  for (const Prefix& p : universe_) universe.push_back(p.ToString());
  json sources = json::object();
  for (size_t r = 0; r < routers_.size(); ++r) sources[routers_[r]] = flow_sources_[r].ToString();
  json entries = json::array();
  for (size_t r = 0; r < routers_.size(); ++r) {
    for (size_t p = 0; p < universe_.size(); ++p) {
      const ForwardingAction& a = actions_[p][r];
      json hops = json::array();
      for (int s : a.next_hops) hops.push_back(routers_[s]);
      const char* kind = a.kind == ActionKind::kForward  ? "forward"
                         : a.kind == ActionKind::kAccept ? "accept"
                                                         : "drop";
      entries.push_back({{"router", routers_[r]},
                         {"prefix", universe_[p].ToString()},
                         {"action", kind},
                         {"next_hops", hops}});
    }
  }
  json filters = json::array();
  for (const auto& [key, f] : filters_) {
    filters.push_back({{"from", routers_[key.first]},
                       {"to", routers_[key.second]},
                       {"egress", f.egress ? RulesJson(*f.egress) : json(nullptr)},
                       {"ingress", f.ingress ? RulesJson(*f.ingress) : json(nullptr)}});
  }
  return {{"routers", routers_},
          {"universe", universe},
          {"flow_sources", sources},
          {"entries", entries},
          {"hop_filters", filters}};
}

absl::StatusOr<ForwardingTable> ForwardingTable::FromJson(const nlohmann::json& doc) {
  try {
    std::vector<std::string> routers = doc.at("routers").get<std::vector<std::string>>();
    std::vector<Prefix> universe;
    for (const json& p : doc.at("universe")) {
      auto prefix = Prefix::Parse(p.get<std::string>());
      if (!prefix) return absl::InvalidArgumentError("bad prefix in forwarding table");
      universe.push_back(*prefix);
    }
    std::vector<Ipv4> sources;
    for (const std::string& r : routers) {
      sources.push_back(Ipv4::Parse(doc.at("flow_sources").at(r).get<std::string>()).value_or(Ipv4{}));
    }
    ForwardingTable table(routers, universe, sources);
    for (const json& e : doc.at("entries")) {
      auto r = table.RouterIndex(e.at("router").get<std::string>());
      auto prefix = Prefix::Parse(e.at("prefix").get<std::string>());
      if (!r || !prefix || !table.PrefixIndex(*prefix)) {
        return absl::InvalidArgumentError("forwarding entry refers to unknown router or prefix");
      }
      ForwardingAction a;
      std::string kind = e.at("action").get<std::string>();
      a.kind = kind == "forward"  ? ActionKind::kForward
               : kind == "accept" ? ActionKind::kAccept
                                  : ActionKind::kDrop;
      for (const json& h : e.at("next_hops")) {
        auto s = table.RouterIndex(h.get<std::string>());
        if (!s) return absl::InvalidArgumentError("unknown next hop in forwarding table");
        a.next_hops.push_back(*s);
      }
      table.SetAction(*table.PrefixIndex(*prefix), *r, std::move(a));
    }
    for (const json& f : doc.at("hop_filters")) {
      auto from = table.RouterIndex(f.at("from").get<std::string>());
      auto to = table.RouterIndex(f.at("to").get<std::string>());
      if (!from || !to) return absl::InvalidArgumentError("unknown router in hop filter");
      HopFilter filter;
      auto eg = RulesFromJson(f.at("egress"));
      auto in = RulesFromJson(f.at("ingress"));
      if (!eg.ok()) return eg.status();
      if (!in.ok()) return in.status();
      filter.egress = *eg;
      filter.ingress = *in;
      table.SetHopFilter(*from, *to, std::move(filter));
    }
    return table;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed forwarding table: ", e.what()));
  }
}

}  // namespace netfix
