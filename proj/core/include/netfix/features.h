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

#ifndef NETFIX_FEATURES_H_
#define NETFIX_FEATURES_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace netfix {

enum class Feature {
  kEbgp,
  kIbgp,
  kRouteReflection,
  kOspf,
  kOspfMultiArea,
  kIsis,
  kIsisMultiLevel,
  kStaticRoutes,
  kRedistributionBgpOspf,
  kAclIn,
  kAclOut,
  kRouteMaps,
  kPrefixLists,
  kLocalPrefPolicy,
  kCommunityFreeExport,
  kNextHopSelf,
  kNetworkStatements,
};

using FeatureSet = std::set<Feature>;

const std::vector<Feature>& AllFeatures();
absl::string_view FeatureName(Feature f);
std::optional<Feature> FeatureFromName(absl::string_view name);

// Direct prerequisites of each feature.
const std::map<Feature, std::vector<Feature>>& FeatureDependencies();
// Always enabled.
const FeatureSet& BaselineFeatures();

// Minimal superset of `requested` closed under FeatureDependencies, plus the
// baseline.
FeatureSet ResolveDependencies(const FeatureSet& requested);
absl::StatusOr<FeatureSet> ResolveDependencies(const std::vector<std::string>& names);

bool IsClosed(const FeatureSet& features);

std::vector<std::string> FeatureNames(const FeatureSet& features);
absl::StatusOr<FeatureSet> ParseFeatureNames(const std::vector<std::string>& names);

}  // namespace netfix

#endif  // NETFIX_FEATURES_H_
