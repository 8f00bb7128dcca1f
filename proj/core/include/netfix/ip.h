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

#ifndef NETFIX_IP_H_
#define NETFIX_IP_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "absl/strings/string_view.h"

namespace netfix {

// An IPv4 address in host byte order.
struct Ipv4 {
  uint32_t value = 0;

  static std::optional<Ipv4> Parse(absl::string_view text);
  std::string ToString() const;

  friend auto operator<=>(const Ipv4&, const Ipv4&) = default;
};

// Dotted-quad mask for a prefix length, e.g. 24 -> 255.255.255.0.
Ipv4 MaskFromLength(int length);
// Inverse of MaskFromLength; nullopt for non-contiguous masks.
std::optional<int> LengthFromMask(Ipv4 mask);

// A canonical IPv4 prefix (host bits cleared).
struct Prefix {
  Ipv4 network;
  int length = 32;

  Prefix() = default;
  Prefix(Ipv4 address, int len);

  // Accepts "a.b.c.d/len".
  static std::optional<Prefix> Parse(absl::string_view text);
  static Prefix Host(Ipv4 address) { return Prefix(address, 32); }

  bool Contains(Ipv4 address) const;
  bool Contains(const Prefix& other) const;
  Ipv4 Mask() const { return MaskFromLength(length); }
  Ipv4 FirstAddress() const { return network; }
  Ipv4 LastAddress() const;

  std::string ToString() const;
  // Abbreviated form with trailing zero octets dropped: 10.1.0.0/24 -> 10.1/24.
  std::string ToShortString() const;

  friend auto operator<=>(const Prefix&, const Prefix&) = default;
};

}  // namespace netfix

#endif  // NETFIX_IP_H_
