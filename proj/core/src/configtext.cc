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

#include <algorithm>
#include <functional>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "netfix/configtext.h"
#include "netfix/plan.h"

namespace netfix {
namespace {

std::string AddressAndMask(Ipv4 address, int length) {
  return absl::StrCat(address.ToString(), " ", MaskFromLength(length).ToString());
}

void RenderInterface(const InterfaceConfig& i, std::vector<std::string>& out) {
  out.push_back(absl::StrCat("interface ", i.name));
  if (!i.description.empty()) out.push_back(absl::StrCat(" description ", i.description));
  if (i.address) {
    out.push_back(absl::StrCat(" ip address ",
                               AddressAndMask(i.address->address, i.address->length)));
  }
  if (i.ospf_area) out.push_back(absl::StrCat(" ip ospf 1 area ", *i.ospf_area));
  if (i.ospf_cost) out.push_back(absl::StrCat(" ip ospf cost ", *i.ospf_cost));
  if (i.isis) out.push_back(" ip router isis");
  if (i.isis_metric) out.push_back(absl::StrCat(" isis metric ", *i.isis_metric));
  if (i.acl_in) out.push_back(absl::StrCat(" ip access-group ", *i.acl_in, " in"));
  if (i.acl_out) out.push_back(absl::StrCat(" ip access-group ", *i.acl_out, " out"));
  if (i.shutdown) out.push_back(" shutdown");
  out.push_back("!");
}

void RenderBgp(const BgpProcess& bgp, std::vector<std::string>& out) {
  out.push_back(absl::StrCat("router bgp ", bgp.asn));
  if (bgp.router_id) out.push_back(absl::StrCat(" bgp router-id ", bgp.router_id->ToString()));
  if (bgp.cluster_id) {
    out.push_back(absl::StrCat(" bgp cluster-id ", bgp.cluster_id->ToString()));
  }
  for (const BgpNeighbor& n : bgp.neighbors) {
    std::string head = absl::StrCat(" neighbor ", n.address.ToString());
    if (n.remote_as) out.push_back(absl::StrCat(head, " remote-as ", *n.remote_as));
    if (n.update_source) out.push_back(absl::StrCat(head, " update-source ", *n.update_source));
    if (n.route_reflector_client) out.push_back(absl::StrCat(head, " route-reflector-client"));
    if (n.next_hop_self) out.push_back(absl::StrCat(head, " next-hop-self"));
    if (n.route_map_in) out.push_back(absl::StrCat(head, " route-map ", *n.route_map_in, " in"));
    if (n.route_map_out) {
      out.push_back(absl::StrCat(head, " route-map ", *n.route_map_out, " out"));
    }
    if (n.shutdown) out.push_back(absl::StrCat(head, " shutdown"));
  }
  for (const Prefix& p : bgp.networks) {
    out.push_back(absl::StrCat(" network ", p.network.ToString(), " mask ",
                               p.Mask().ToString()));
  }
  out.push_back("!");
}

}  // namespace

std::vector<std::string> SplitLines(absl::string_view text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  return lines;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::string RenderDevice(const DeviceModel& m) {
  std::vector<std::string> out;
  out.push_back(absl::StrCat("hostname ", m.hostname));
  out.push_back("!");
  for (const InterfaceConfig& i : m.interfaces) RenderInterface(i, out);
  if (m.ospf) {
    out.push_back(absl::StrCat("router ospf ", m.ospf->process_id));
    if (m.ospf->router_id) {
      out.push_back(absl::StrCat(" router-id ", m.ospf->router_id->ToString()));
    }
    if (m.ospf->redistribute_bgp_asn) {
      out.push_back(absl::StrCat(" redistribute bgp ", *m.ospf->redistribute_bgp_asn,
                                 " subnets"));
    }
    out.push_back("!");
  }
  if (m.isis) {
    out.push_back("router isis");
    out.push_back(absl::StrCat(" net ", m.isis->Net()));
    out.push_back(absl::StrCat(" is-type ", IsisLevelName(m.isis->level)));
    out.push_back("!");
  }
  if (m.bgp) RenderBgp(*m.bgp, out);
  if (!m.prefix_lists.empty()) {
    for (const auto& [name, entries] : m.prefix_lists) {
      for (const PrefixListEntry& e : entries) {
        std::string line = absl::StrCat("ip prefix-list ", name, " seq ", e.seq,
                                        e.permit ? " permit " : " deny ",
                                        e.prefix.ToString());
        if (e.ge) absl::StrAppend(&line, " ge ", *e.ge);
        if (e.le) absl::StrAppend(&line, " le ", *e.le);
        out.push_back(std::move(line));
      }
    }
    out.push_back("!");
  }
  for (const auto& [name, clauses] : m.route_maps) {
    for (const RouteMapClause& c : clauses) {
      out.push_back(absl::StrCat("route-map ", name, c.permit ? " permit " : " deny ", c.seq));
      if (c.match_prefix_list) {
        out.push_back(absl::StrCat(" match ip address prefix-list ", *c.match_prefix_list));
      }
      if (c.set_local_pref) out.push_back(absl::StrCat(" set local-preference ", *c.set_local_pref));
      if (c.set_next_hop) out.push_back(absl::StrCat(" set ip next-hop ", c.set_next_hop->ToString()));
      out.push_back("!");
    }
  }
  if (!m.statics.empty()) {
    for (const StaticRoute& s : m.statics) {
      std::string line = absl::StrCat("ip route ", AddressAndMask(s.prefix.network, s.prefix.length));
      if (s.next_hop) absl::StrAppend(&line, " ", s.next_hop->ToString());
      if (s.interface) absl::StrAppend(&line, " ", *s.interface);
      out.push_back(std::move(line));
    }
    out.push_back("!");
  }
  for (const auto& [name, rules] : m.acls) {
    out.push_back(absl::StrCat("ip access-list extended ", name));
    for (const AclRule& r : rules) {
      out.push_back(absl::StrCat(" ", r.seq, r.permit ? " permit ip " : " deny ip ",
                                 r.source.ToString(), " ", r.destination.ToString()));
    }
    out.push_back("!");
  }
  out.push_back("end");
  return JoinLines(out);
}

ConfigSet RenderDevices(const std::map<std::string, DeviceModel>& models) {
  ConfigSet out;
  for (const auto& [name, model] : models) out[name] = RenderDevice(model);
  return out;
}

ConfigSet Render(const LogicalPlan& plan) { return RenderDevices(DeviceView(plan)); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Stanza { kNone, kInterface, kOspf, kIsis, kBgp, kRouteMap, kAcl, kUnknown };

std::optional<uint32_t> ParseU32(absl::string_view s) {
  uint32_t v = 0;
  if (!absl::SimpleAtoi(s, &v)) return std::nullopt;
  return v;
}

std::optional<int> ParseInt(absl::string_view s) {
  int v = 0;
  if (!absl::SimpleAtoi(s, &v)) return std::nullopt;
  return v;
}

std::optional<InterfaceAddress> ParseAddressMask(absl::string_view a, absl::string_view m) {
  auto addr = Ipv4::Parse(a);
  auto mask = Ipv4::Parse(m);
  if (!addr || !mask) return std::nullopt;
  auto len = LengthFromMask(*mask);
  if (!len) return std::nullopt;
  return InterfaceAddress{*addr, *len};
}

// Parses an ACL address operand starting at tokens[i]; advances i.
std::optional<AddressMatch> ParseAddressMatch(const std::vector<absl::string_view>& t,
                                              size_t& i) {
  if (i >= t.size()) return std::nullopt;
  AddressMatch m;
  if (t[i] == "any") {
    ++i;
    return m;
  }
  if (t[i] == "host") {
    if (i + 1 >= t.size()) return std::nullopt;
    auto a = Ipv4::Parse(t[i + 1]);
    if (!a) return std::nullopt;
    m.kind = AddressMatch::Kind::kHost;
    m.address = *a;
    i += 2;
    return m;
  }
  if (i + 1 >= t.size()) return std::nullopt;
  auto a = Ipv4::Parse(t[i]);
  auto w = Ipv4::Parse(t[i + 1]);
  if (!a || !w) return std::nullopt;
  m.kind = AddressMatch::Kind::kWildcard;
  m.address = *a;
  m.wildcard = *w;
  i += 2;
  return m;
}

int ClassfulLength(Ipv4 a) {
  uint32_t first = a.value >> 24;
  if (first < 128) return 8;
  if (first < 192) return 16;
  return 24;
}

class Parser {
 public:
  absl::StatusOr<ParsedDevice> Run(absl::string_view text) {
    std::vector<std::string> lines = SplitLines(text);
    bool ended = false;
    for (size_t n = 0; n < lines.size(); ++n) {
      line_no_ = n + 1;
      const std::string& raw = lines[n];
      absl::string_view stripped = absl::StripAsciiWhitespace(raw);
      if (ended) {
        if (!stripped.empty()) Warn(raw);
        continue;
      }
      if (stripped.empty()) continue;
      if (stripped[0] == '!') {
        stanza_ = Stanza::kNone;
        continue;
      }
      bool indented = raw[0] == ' ' || raw[0] == '\t';
      std::vector<absl::string_view> t =
          absl::StrSplit(stripped, absl::ByAnyChar(" \t"), absl::SkipEmpty());
      if (indented && stanza_ != Stanza::kNone) {
        if (stanza_ == Stanza::kUnknown) continue;  // body of an ignored stanza
        if (!Child(t)) Warn(raw);
        continue;
      }
      if (t.size() == 1 && t[0] == "end") {
        ended = true;
        continue;
      }
      stanza_ = Stanza::kNone;
      if (!TopLevel(t)) {
        Warn(raw);
        stanza_ = Stanza::kUnknown;
      }
    }
    if (!ended) {
      return absl::InvalidArgumentError("unterminated configuration (missing 'end')");
    }
    for (auto& [name, clauses] : result_.model.route_maps) {
      std::stable_sort(clauses.begin(), clauses.end(),
                       [](const auto& a, const auto& b) { return a.seq < b.seq; });
    }
    for (auto& [name, entries] : result_.model.prefix_lists) {
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.seq < b.seq; });
    }
    for (auto& [name, rules] : result_.model.acls) {
      std::stable_sort(rules.begin(), rules.end(),
                       [](const auto& a, const auto& b) { return a.seq < b.seq; });
    }
    FindDangling();
    return std::move(result_);
  }

 private:
  DeviceModel& m() { return result_.model; }

  void Warn(absl::string_view raw) {
    result_.warnings.push_back(absl::StrCat("line ", line_no_, ": unrecognized '",
                                            absl::StripAsciiWhitespace(raw), "'"));
  }

  bool TopLevel(const std::vector<absl::string_view>& t) {
    if (t[0] == "hostname" && t.size() == 2) {
      m().hostname = std::string(t[1]);
      return true;
    }
    if (t[0] == "interface" && t.size() == 2) {
      InterfaceConfig* existing = m().FindInterface(t[1]);
      if (existing == nullptr) {
        m().interfaces.push_back(InterfaceConfig{.name = std::string(t[1])});
        iface_ = m().interfaces.size() - 1;
      } else {
        iface_ = static_cast<size_t>(existing - m().interfaces.data());
      }
      stanza_ = Stanza::kInterface;
      return true;
    }
    if (t[0] == "router" && t.size() >= 2) {
      if (t[1] == "ospf" && t.size() == 3) {
        auto pid = ParseInt(t[2]);
        if (!pid) return false;
        if (!m().ospf) m().ospf = OspfProcess{};
        m().ospf->process_id = *pid;
        stanza_ = Stanza::kOspf;
        return true;
      }
      if (t[1] == "isis" && t.size() <= 3) {
        if (!m().isis) m().isis = IsisProcess{.level = IsisLevel::kLevel12};
        stanza_ = Stanza::kIsis;
        return true;
      }
      if (t[1] == "bgp" && t.size() == 3) {
        auto asn = ParseU32(t[2]);
        if (!asn) return false;
        if (!m().bgp) m().bgp = BgpProcess{};
        m().bgp->asn = *asn;
        stanza_ = Stanza::kBgp;
        return true;
      }
      return false;
    }
    if (t[0] == "route-map" && (t.size() == 3 || t.size() == 4)) {
      if (t[2] != "permit" && t[2] != "deny") return false;
      int seq = 10;
      if (t.size() == 4) {
        auto s = ParseInt(t[3]);
        if (!s) return false;
        seq = *s;
      }
      auto& clauses = m().route_maps[std::string(t[1])];
      auto it = std::find_if(clauses.begin(), clauses.end(),
                             [&](const RouteMapClause& c) { return c.seq == seq; });
      if (it == clauses.end()) {
        clauses.push_back(RouteMapClause{.seq = seq});
        it = clauses.end() - 1;
      }
      it->permit = t[2] == "permit";
      route_map_ = std::string(t[1]);
      clause_seq_ = seq;
      stanza_ = Stanza::kRouteMap;
      return true;
    }
    if (t[0] == "ip" && t.size() >= 2) {
      if (t[1] == "prefix-list") return PrefixListLine(t);
      if (t[1] == "route") return StaticLine(t);
      if (t[1] == "access-list" && t.size() == 4 && t[2] == "extended") {
        acl_ = std::string(t[3]);
        m().acls[acl_];
        stanza_ = Stanza::kAcl;
        return true;
      }
    }
    return false;
  }

  bool PrefixListLine(const std::vector<absl::string_view>& t) {
    // ip prefix-list NAME [seq N] permit|deny P [ge X] [le Y]
    if (t.size() < 5) return false;
    size_t i = 3;
    auto& entries = m().prefix_lists[std::string(t[2])];
    PrefixListEntry e;
    e.seq = entries.empty() ? 5 : entries.back().seq + 5;
    if (t[i] == "seq") {
      if (i + 1 >= t.size()) return false;
      auto s = ParseInt(t[i + 1]);
      if (!s) return false;
      e.seq = *s;
      i += 2;
    }
    if (i + 1 >= t.size() || (t[i] != "permit" && t[i] != "deny")) return false;
    e.permit = t[i] == "permit";
    auto p = Prefix::Parse(t[i + 1]);
    if (!p) return false;
    e.prefix = *p;
    i += 2;
    while (i < t.size()) {
      if (i + 1 >= t.size()) return false;
      auto v = ParseInt(t[i + 1]);
      if (!v || *v < 0 || *v > 32) return false;
      if (t[i] == "ge") {
        e.ge = *v;
      } else if (t[i] == "le") {
        e.le = *v;
      } else {
        return false;
      }
      i += 2;
    }
    auto same = std::find_if(entries.begin(), entries.end(),
                             [&](const PrefixListEntry& x) { return x.seq == e.seq; });
    if (same != entries.end()) {
      *same = e;
    } else {
      entries.push_back(e);
    }
    return true;
  }

  bool StaticLine(const std::vector<absl::string_view>& t) {
    // ip route A M (NH | IFACE [NH])
    if (t.size() < 5 || t.size() > 6) return false;
    auto am = ParseAddressMask(t[2], t[3]);
    if (!am) return false;
    StaticRoute s{.prefix = Prefix(am->address, am->length)};
    for (size_t i = 4; i < t.size(); ++i) {
      if (auto nh = Ipv4::Parse(t[i])) {
        if (s.next_hop) return false;
        s.next_hop = *nh;
      } else {
        if (s.interface) return false;
        s.interface = std::string(t[i]);
      }
    }
    m().statics.push_back(std::move(s));
    return true;
  }

  bool Child(const std::vector<absl::string_view>& t) {
    switch (stanza_) {
      case Stanza::kInterface:
        return InterfaceChild(t);
      case Stanza::kOspf:
        return OspfChild(t);
      case Stanza::kIsis:
        return IsisChild(t);
      case Stanza::kBgp:
        return BgpChild(t);
      case Stanza::kRouteMap:
        return RouteMapChild(t);
      case Stanza::kAcl:
        return AclChild(t);
      default:
        return false;
    }
  }

  bool InterfaceChild(const std::vector<absl::string_view>& t) {
    InterfaceConfig& i = m().interfaces[iface_];
    if (t[0] == "description") {
      std::vector<absl::string_view> rest(t.begin() + 1, t.end());
      i.description = absl::StrJoin(rest, " ");
      return true;
    }
    if (t[0] == "shutdown" && t.size() == 1) {
      i.shutdown = true;
      return true;
    }
    if (t[0] == "no" && t.size() == 2 && t[1] == "shutdown") {
      i.shutdown = false;
      return true;
    }
    if (t[0] == "no" && t.size() == 3 && t[1] == "ip" && t[2] == "address") {
      i.address.reset();
      return true;
    }
    if (t[0] == "isis" && t.size() == 3 && t[1] == "metric") {
      auto v = ParseU32(t[2]);
      if (!v) return false;
      i.isis_metric = *v;
      return true;
    }
    if (t[0] != "ip" || t.size() < 2) return false;
    if (t[1] == "address" && t.size() == 4) {
      auto am = ParseAddressMask(t[2], t[3]);
      if (!am) return false;
      i.address = *am;
      return true;
    }
    if (t[1] == "ospf") {
      if (t.size() == 5 && t[3] == "area") {
        auto area = ParseU32(t[4]);
        if (!area || !ParseInt(t[2])) return false;
        i.ospf_area = *area;
        return true;
      }
      if (t.size() == 4 && t[2] == "cost") {
        auto cost = ParseU32(t[3]);
        if (!cost || *cost == 0 || *cost > 65535) return false;
        i.ospf_cost = *cost;
        return true;
      }
      return false;
    }
    if (t[1] == "router" && (t.size() == 3 || t.size() == 4) && t[2] == "isis") {
      i.isis = true;
      return true;
    }
    if (t[1] == "access-group" && t.size() == 4) {
      if (t[3] == "in") {
        i.acl_in = std::string(t[2]);
      } else if (t[3] == "out") {
        i.acl_out = std::string(t[2]);
      } else {
        return false;
      }
      return true;
    }
    return false;
  }

  bool OspfChild(const std::vector<absl::string_view>& t) {
    if (t[0] == "router-id" && t.size() == 2) {
      auto a = Ipv4::Parse(t[1]);
      if (!a) return false;
      m().ospf->router_id = *a;
      return true;
    }
    if (t[0] == "redistribute" && t.size() >= 3 && t.size() <= 4 && t[1] == "bgp") {
      auto asn = ParseU32(t[2]);
      if (!asn) return false;
      if (t.size() == 4 && t[3] != "subnets") return false;
      m().ospf->redistribute_bgp_asn = *asn;
      return true;
    }
    return false;
  }

  bool IsisChild(const std::vector<absl::string_view>& t) {
    if (t[0] == "net" && t.size() == 2) {
      // area.sysid(3 groups).00
      std::vector<absl::string_view> parts = absl::StrSplit(t[1], '.');
      if (parts.size() < 5 || parts.back() != "00") return false;
      size_t n = parts.size();
      m().isis->system_id = absl::StrJoin({parts[n - 4], parts[n - 3], parts[n - 2]}, ".");
      std::vector<absl::string_view> area(parts.begin(), parts.begin() + (n - 4));
      m().isis->area = absl::StrJoin(area, ".");
      return true;
    }
    if (t[0] == "is-type" && t.size() == 2) {
      auto level = IsisLevelFromName(t[1]);
      if (!level) return false;
      m().isis->level = *level;
      return true;
    }
    return false;
  }

  bool BgpChild(const std::vector<absl::string_view>& t) {
    BgpProcess& bgp = *m().bgp;
    if (t[0] == "bgp" && t.size() == 3) {
      auto a = Ipv4::Parse(t[2]);
      if (!a) return false;
      if (t[1] == "router-id") {
        bgp.router_id = *a;
        return true;
      }
      if (t[1] == "cluster-id") {
        bgp.cluster_id = *a;
        return true;
      }
      return false;
    }
    if (t[0] == "network" && (t.size() == 2 || t.size() == 4)) {
      auto a = Ipv4::Parse(t[1]);
      if (!a) return false;
      int len = ClassfulLength(*a);
      if (t.size() == 4) {
        if (t[2] != "mask") return false;
        auto mask = Ipv4::Parse(t[3]);
        if (!mask) return false;
        auto l = LengthFromMask(*mask);
        if (!l) return false;
        len = *l;
      }
      Prefix p(*a, len);
      if (std::find(bgp.networks.begin(), bgp.networks.end(), p) == bgp.networks.end()) {
        bgp.networks.push_back(p);
      }
      return true;
    }
    if (t[0] != "neighbor" || t.size() < 3) return false;
    auto addr = Ipv4::Parse(t[1]);
    if (!addr) return false;
    auto attr = [&]() -> BgpNeighbor& {
      BgpNeighbor* n = bgp.FindNeighbor(*addr);
      if (n != nullptr) return *n;
      bgp.neighbors.push_back(BgpNeighbor{.address = *addr});
      return bgp.neighbors.back();
    };
    if (t[2] == "remote-as" && t.size() == 4) {
      auto asn = ParseU32(t[3]);
      if (!asn) return false;
      attr().remote_as = *asn;
      return true;
    }
    if (t[2] == "update-source" && t.size() == 4) {
      attr().update_source = std::string(t[3]);
      return true;
    }
    if (t.size() == 3) {
      if (t[2] == "route-reflector-client") {
        attr().route_reflector_client = true;
        return true;
      }
      if (t[2] == "next-hop-self") {
        attr().next_hop_self = true;
        return true;
      }
      if (t[2] == "shutdown") {
        attr().shutdown = true;
        return true;
      }
      return false;
    }
    if (t[2] == "route-map" && t.size() == 5) {
      if (t[4] == "in") {
        attr().route_map_in = std::string(t[3]);
        return true;
      }
      if (t[4] == "out") {
        attr().route_map_out = std::string(t[3]);
        return true;
      }
    }
    return false;
  }

  RouteMapClause& CurrentClause() {
    auto& clauses = m().route_maps[route_map_];
    for (RouteMapClause& c : clauses) {
      if (c.seq == clause_seq_) return c;
    }
    clauses.push_back(RouteMapClause{.seq = clause_seq_});
    return clauses.back();
  }

  bool RouteMapChild(const std::vector<absl::string_view>& t) {
    if (t.size() == 5 && t[0] == "match" && t[1] == "ip" && t[2] == "address" &&
        t[3] == "prefix-list") {
      CurrentClause().match_prefix_list = std::string(t[4]);
      return true;
    }
    if (t.size() == 3 && t[0] == "set" && t[1] == "local-preference") {
      auto v = ParseU32(t[2]);
      if (!v) return false;
      CurrentClause().set_local_pref = *v;
      return true;
    }
    if (t.size() == 4 && t[0] == "set" && t[1] == "ip" && t[2] == "next-hop") {
      auto a = Ipv4::Parse(t[3]);
      if (!a) return false;
      CurrentClause().set_next_hop = *a;
      return true;
    }
    return false;
  }

  bool AclChild(const std::vector<absl::string_view>& t) {
    auto& rules = m().acls[acl_];
    AclRule r;
    r.seq = rules.empty() ? 10 : rules.back().seq + 10;
    size_t i = 0;
    if (auto s = ParseInt(t[0])) {
      r.seq = *s;
      i = 1;
    }
    if (i + 1 >= t.size()) return false;
    if (t[i] != "permit" && t[i] != "deny") return false;
    r.permit = t[i] == "permit";
    if (t[i + 1] != "ip") return false;
    i += 2;
    auto src = ParseAddressMatch(t, i);
    if (!src) return false;
    auto dst = ParseAddressMatch(t, i);
    if (!dst || i != t.size()) return false;
    r.source = *src;
    r.destination = *dst;
    auto same = std::find_if(rules.begin(), rules.end(),
                             [&](const AclRule& x) { return x.seq == r.seq; });
    if (same != rules.end()) {
      *same = r;
    } else {
      rules.push_back(r);
    }
    return true;
  }

  void FindDangling() {
    const DeviceModel& d = result_.model;
    auto add = [&](std::string kind, const std::string& name, std::string context) {
      result_.dangling.push_back({std::move(kind), name, std::move(context)});
    };
    for (const InterfaceConfig& i : d.interfaces) {
      if (i.acl_in && !d.acls.contains(*i.acl_in)) add("access-list", *i.acl_in, i.name);
      if (i.acl_out && !d.acls.contains(*i.acl_out)) add("access-list", *i.acl_out, i.name);
    }
    if (d.bgp) {
      for (const BgpNeighbor& n : d.bgp->neighbors) {
        std::string ctx = absl::StrCat("neighbor ", n.address.ToString());
        if (n.route_map_in && !d.route_maps.contains(*n.route_map_in)) {
          add("route-map", *n.route_map_in, ctx);
        }
        if (n.route_map_out && !d.route_maps.contains(*n.route_map_out)) {
          add("route-map", *n.route_map_out, ctx);
        }
        if (n.update_source && d.FindInterface(*n.update_source) == nullptr) {
          add("interface", *n.update_source, ctx);
        }
      }
    }
    for (const auto& [name, clauses] : d.route_maps) {
      for (const RouteMapClause& c : clauses) {
        if (c.match_prefix_list && !d.prefix_lists.contains(*c.match_prefix_list)) {
          add("prefix-list", *c.match_prefix_list, absl::StrCat("route-map ", name, " ", c.seq));
        }
      }
    }
  }

  ParsedDevice result_;
  Stanza stanza_ = Stanza::kNone;
  size_t line_no_ = 0;
  size_t iface_ = 0;
  std::string route_map_;
  int clause_seq_ = 10;
  std::string acl_;
};

}  // namespace

absl::StatusOr<ParsedDevice> ParseDevice(absl::string_view text) {
  return Parser().Run(text);
}

std::map<std::string, DeviceModel> ParsedConfigs::Models() const {
  std::map<std::string, DeviceModel> out;
  for (const auto& [name, d] : devices) out[name] = d.model;
  return out;
}

ParsedConfigs ParseConfigs(const ConfigSet& configs) {
  ParsedConfigs out;
  for (const auto& [router, text] : configs) {
    auto parsed = ParseDevice(text);
    if (parsed.ok()) {
      out.devices[router] = *std::move(parsed);
    } else {
      out.errors[router] = std::string(parsed.status().message());
      ParsedDevice empty;
      empty.model.hostname = router;
      out.devices[router] = std::move(empty);
    }
  }
  return out;
}

}  // namespace netfix
