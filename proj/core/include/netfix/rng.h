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

#ifndef NETFIX_RNG_H_
#define NETFIX_RNG_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace netfix {

using Rng = std::mt19937_64;

// Mixes a named sub-stream into a base seed so that independent pipeline
// stages draw from uncorrelated generators.
inline uint64_t DeriveSeed(uint64_t base, absl::string_view tag) {
  uint64_t h = 1469598103934665603ull ^ base;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  // splitmix64 finalizer
  h += 0x9e3779b97f4a7c15ull;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
  return h ^ (h >> 31);
}

inline uint64_t DeriveSeed(uint64_t base, absl::string_view tag,
                           uint64_t index) {
  return DeriveSeed(DeriveSeed(base, tag) + index, "#");
}

}  // namespace netfix

#endif  // NETFIX_RNG_H_
