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

#include "netfix/device_model.h"

#include "absl/strings/str_cat.h"

namespace netfix {

absl::string_view IsisLevelName(IsisLevel level) {
  switch (level) {
    case IsisLevel::kLevel1:
      return "level-1";
    case IsisLevel::kLevel2:
      return "level-2-only";
    case IsisLevel::kLevel12:
      return "level-1-2";
  }
  return "level-1-2";
}

std::optional<IsisLevel> IsisLevelFromName(absl::string_view name) {
  if (name == "level-1") return IsisLevel::kLevel1;
  if (name == "level-2-only" || name == "level-2") return IsisLevel::kLevel2;
  if (name == "level-1-2") return IsisLevel::kLevel12;
  return std::nullopt;
}

BgpNeighbor* BgpProcess::FindNeighbor(Ipv4 address) {
  for (BgpNeighbor& n : neighbors) {
    if (n.address == address) return &n;
  }
  return nullptr;
}

const BgpNeighbor* BgpProcess::FindNeighbor(Ipv4 address) const {
  for (const BgpNeighbor& n : neighbors) {
    if (n.address == address) return &n;
  }
  return nullptr;
}

bool PrefixListEntry::Matches(const Prefix& p) const {
  if (!prefix.Contains(p.network) || p.length < prefix.length) return false;
  if (!ge && !le) return p.length == prefix.length;
  int lo = ge.value_or(prefix.length);
  int hi = le.value_or(32);
  return p.length >= lo && p.length <= hi;
}

bool AddressMatch::Matches(Ipv4 a) const {
  switch (kind) {
    case Kind::kAny:
      return true;
    case Kind::kHost:
      return a == address;
    case Kind::kWildcard:
      return (a.value & ~wildcard.value) == (address.value & ~wildcard.value);
  }
  return false;
}

std::string AddressMatch::ToString() const {
  switch (kind) {
    case Kind::kAny:
      return "any";
    case Kind::kHost:
      return absl::StrCat("host ", address.ToString());
    case Kind::kWildcard:
      return absl::StrCat(address.ToString(), " ", wildcard.ToString());
  }
  return "any";
}

bool AclPermits(const std::vector<AclRule>& rules, Ipv4 source,
                Ipv4 destination) {
  if (rules.empty()) return true;
  for (const AclRule& rule : rules) {
    if (rule.source.Matches(source) && rule.destination.Matches(destination)) {
      return rule.permit;
    }
  }
  return false;
}

InterfaceConfig* DeviceModel::FindInterface(absl::string_view name) {
  for (InterfaceConfig& i : interfaces) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

const InterfaceConfig* DeviceModel::FindInterface(absl::string_view name) const {
  for (const InterfaceConfig& i : interfaces) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

}  // namespace netfix
