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

#include "netfix/features.h"

#include <algorithm>
#include <deque>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace netfix {
namespace {

struct FeatureInfo {
  Feature feature;
  absl::string_view name;
};

constexpr FeatureInfo kFeatures[] = {
    {Feature::kEbgp, "ebgp"},
    {Feature::kIbgp, "ibgp"},
    {Feature::kRouteReflection, "route-reflection"},
    {Feature::kOspf, "ospf"},
    {Feature::kOspfMultiArea, "ospf-multi-area"},
    {Feature::kIsis, "isis"},
    {Feature::kIsisMultiLevel, "isis-multi-level"},
    {Feature::kStaticRoutes, "static-routes"},
    {Feature::kRedistributionBgpOspf, "redistribution-bgp-ospf"},
    {Feature::kAclIn, "acl-in"},
    {Feature::kAclOut, "acl-out"},
    {Feature::kRouteMaps, "route-maps"},
    {Feature::kPrefixLists, "prefix-lists"},
    {Feature::kLocalPrefPolicy, "local-pref-policy"},
    {Feature::kCommunityFreeExport, "community-free-export"},
    {Feature::kNextHopSelf, "next-hop-self"},
    {Feature::kNetworkStatements, "network-statements"},
};

}  // namespace

const std::vector<Feature>& AllFeatures() {
  static const auto* all = [] {
    auto* v = new std::vector<Feature>;
    for (const FeatureInfo& f : kFeatures) v->push_back(f.feature);
    return v;
  }();
  return *all;
}

absl::string_view FeatureName(Feature f) {
  for (const FeatureInfo& info : kFeatures) {
    if (info.feature == f) return info.name;
  }
  return "unknown";
}

std::optional<Feature> FeatureFromName(absl::string_view name) {
  for (const FeatureInfo& info : kFeatures) {
    if (info.name == name) return info.feature;
  }
  return std::nullopt;
}

const std::map<Feature, std::vector<Feature>>& FeatureDependencies() {
  using F = Feature;
  static const auto* deps = new std::map<Feature, std::vector<Feature>>{
      {F::kEbgp, {}},
      {F::kIbgp, {F::kEbgp, F::kOspf}},
      {F::kRouteReflection, {F::kIbgp}},
      {F::kOspf, {}},
      {F::kOspfMultiArea, {F::kOspf}},
      {F::kIsis, {F::kEbgp}},
      {F::kIsisMultiLevel, {F::kIsis}},
      {F::kStaticRoutes, {F::kEbgp, F::kNetworkStatements}},
      {F::kRedistributionBgpOspf, {F::kEbgp, F::kOspf}},
      {F::kAclIn, {}},
      {F::kAclOut, {}},
      {F::kRouteMaps, {F::kEbgp, F::kPrefixLists}},
      {F::kPrefixLists, {F::kRouteMaps}},
      {F::kLocalPrefPolicy, {F::kRouteMaps, F::kIbgp}},
      {F::kCommunityFreeExport, {F::kRouteMaps}},
      {F::kNextHopSelf, {F::kIbgp}},
      {F::kNetworkStatements, {}},
  };
  return *deps;
}

const FeatureSet& BaselineFeatures() {
  static const auto* base = new FeatureSet{Feature::kOspf, Feature::kNetworkStatements};
  return *base;
}

FeatureSet ResolveDependencies(const FeatureSet& requested) {
  FeatureSet out;
  std::deque<Feature> queue(requested.begin(), requested.end());
  queue.insert(queue.end(), BaselineFeatures().begin(), BaselineFeatures().end());
  while (!queue.empty()) {
    Feature f = queue.front();
    queue.pop_front();
    if (!out.insert(f).second) continue;
    for (Feature d : FeatureDependencies().at(f)) queue.push_back(d);
  }
  return out;
}

absl::StatusOr<FeatureSet> ParseFeatureNames(const std::vector<std::string>& names) {
  FeatureSet out;
  for (const std::string& n : names) {
    auto f = FeatureFromName(n);
    if (!f) return absl::InvalidArgumentError(absl::StrCat("unknown feature flag '", n, "'"));
    out.insert(*f);
  }
  return out;
}

absl::StatusOr<FeatureSet> ResolveDependencies(const std::vector<std::string>& names) {
  auto parsed = ParseFeatureNames(names);
  if (!parsed.ok()) return parsed.status();
  return ResolveDependencies(*parsed);
}

bool IsClosed(const FeatureSet& features) {
  for (Feature b : BaselineFeatures()) {
    if (!features.contains(b)) return false;
  }
  for (Feature f : features) {
    for (Feature d : FeatureDependencies().at(f)) {
      if (!features.contains(d)) return false;
    }
  }
  return true;
}

std::vector<std::string> FeatureNames(const FeatureSet& features) {
  std::vector<std::string> out;
  for (Feature f : features) out.emplace_back(FeatureName(f));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace netfix
