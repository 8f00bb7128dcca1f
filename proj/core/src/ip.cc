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

#include "netfix/ip.h"

#include <charconv>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace netfix {

std::optional<Ipv4> Ipv4::Parse(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, '.');
  if (parts.size() != 4) return std::nullopt;
  uint32_t value = 0;
  for (absl::string_view part : parts) {
    if (part.empty() || part.size() > 3) return std::nullopt;
    unsigned octet = 0;
    auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), octet);
    if (ec != std::errc() || ptr != part.data() + part.size() || octet > 255) {
      return std::nullopt;
    }
    value = (value << 8) | octet;
  }
  return Ipv4{value};
}

std::string Ipv4::ToString() const {
  return absl::StrCat(value >> 24, ".", (value >> 16) & 0xff, ".",
                      (value >> 8) & 0xff, ".", value & 0xff);
}

Ipv4 MaskFromLength(int length) {
  if (length <= 0) return Ipv4{0};
  if (length >= 32) return Ipv4{0xffffffffu};
  return Ipv4{~((1u << (32 - length)) - 1)};
}

std::optional<int> LengthFromMask(Ipv4 mask) {
  uint32_t inverted = ~mask.value;
  // A contiguous mask inverts to 2^k - 1.
  if ((inverted & (inverted + 1)) != 0) return std::nullopt;
  int length = 0;
  for (uint32_t v = mask.value; v != 0; v <<= 1) ++length;
  return length;
}

Prefix::Prefix(Ipv4 address, int len)
    : network{address.value & MaskFromLength(len).value}, length(len) {}

std::optional<Prefix> Prefix::Parse(absl::string_view text) {
  size_t slash = text.find('/');
  if (slash == absl::string_view::npos) return std::nullopt;
  std::optional<Ipv4> address = Ipv4::Parse(text.substr(0, slash));
  if (!address) return std::nullopt;
  absl::string_view len_text = text.substr(slash + 1);
  int len = -1;
  auto [ptr, ec] =
      std::from_chars(len_text.data(), len_text.data() + len_text.size(), len);
  if (ec != std::errc() || ptr != len_text.data() + len_text.size() ||
      len < 0 || len > 32) {
    return std::nullopt;
  }
  return Prefix(*address, len);
}

bool Prefix::Contains(Ipv4 address) const {
  return (address.value & Mask().value) == network.value;
}

bool Prefix::Contains(const Prefix& other) const {
  return other.length >= length && Contains(other.network);
}

Ipv4 Prefix::LastAddress() const {
  return Ipv4{network.value | ~Mask().value};
}

std::string Prefix::ToString() const {
  return absl::StrCat(network.ToString(), "/", length);
}

std::string Prefix::ToShortString() const {
  uint32_t octets[4] = {network.value >> 24, (network.value >> 16) & 0xff,
                        (network.value >> 8) & 0xff, network.value & 0xff};
  int keep = 4;
  while (keep > 1 && octets[keep - 1] == 0) --keep;
  std::string out = absl::StrCat(octets[0]);
  for (int i = 1; i < keep; ++i) absl::StrAppend(&out, ".", octets[i]);
  return absl::StrCat(out, "/", length);
}

}  // namespace netfix
