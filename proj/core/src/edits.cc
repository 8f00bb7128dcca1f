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
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "netfix/configtext.h"

namespace netfix {
namespace {

constexpr absl::string_view kFileHeader = "FILE:";
constexpr absl::string_view kSearch = "<<<<<<< SEARCH";
constexpr absl::string_view kDivider = "=======";
constexpr absl::string_view kReplace = ">>>>>>> REPLACE";

// Distance capped at bound + 1.
size_t BoundedLevenshtein(absl::string_view a, absl::string_view b, size_t bound) {
  size_t la = a.size(), lb = b.size();
  size_t diff = la > lb ? la - lb : lb - la;
  if (diff > bound) return bound + 1;
  std::vector<size_t> prev(lb + 1), cur(lb + 1);
  for (size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (size_t i = 1; i <= la; ++i) {
    cur[0] = i;
    size_t row_min = cur[0];
    for (size_t j = 1; j <= lb; ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return bound + 1;
    std::swap(prev, cur);
  }
  return std::min(prev[lb], bound + 1);
}

std::string JoinBlock(const std::vector<std::string>& lines, size_t from, size_t count) {
  std::string out;
  for (size_t i = 0; i < count; ++i) {
    if (i > 0) out += '\n';
    out += lines[from + i];
  }
  return out;
}

struct Located {
  std::vector<size_t> positions;
  MatchTier tier = MatchTier::kExact;
};

Located Locate(const std::vector<std::string>& lines, const std::vector<std::string>& search) {
  Located out;
  size_t k = search.size();
  if (k == 0 || k > lines.size()) return out;
  size_t windows = lines.size() - k + 1;

  for (size_t i = 0; i < windows; ++i) {
    if (std::equal(search.begin(), search.end(), lines.begin() + i)) out.positions.push_back(i);
  }
  if (!out.positions.empty()) return out;

  out.tier = MatchTier::kWhitespace;
  std::vector<std::string> norm_lines, norm_search;
  for (const std::string& l : lines) norm_lines.push_back(NormalizeWhitespace(l));
  for (const std::string& l : search) norm_search.push_back(NormalizeWhitespace(l));
  for (size_t i = 0; i < windows; ++i) {
    if (std::equal(norm_search.begin(), norm_search.end(), norm_lines.begin() + i)) {
      out.positions.push_back(i);
    }
  }
  if (!out.positions.empty()) return out;

  out.tier = MatchTier::kFuzzy;
  std::string needle = JoinBlock(search, 0, k);
  size_t bound = FuzzyThreshold(needle.size());
  size_t best = bound + 1;
  for (size_t i = 0; i < windows; ++i) {
    size_t d = BoundedLevenshtein(needle, JoinBlock(lines, i, k), bound);
    if (d > bound) continue;
    if (d < best) {
      best = d;
      out.positions.clear();
    }
    if (d == best) out.positions.push_back(i);
  }
  return out;
}

// Region of the file closest to the search block, for feedback.
std::string Nearest(const std::vector<std::string>& lines, const std::vector<std::string>& search) {
  if (lines.empty()) return "";
  size_t k = std::min(search.size(), lines.size());
  std::string needle = JoinBlock(search, 0, search.size());
  size_t best = std::numeric_limits<size_t>::max();
  size_t best_at = 0;
  for (size_t i = 0; i + k <= lines.size(); ++i) {
    size_t d = Levenshtein(needle, JoinBlock(lines, i, k));
    if (d < best) {
      best = d;
      best_at = i;
    }
  }
  return JoinBlock(lines, best_at, k);
}

}  // namespace

size_t FuzzyThreshold(size_t chars) {
  return std::max<size_t>(2, (chars * 5 + 99) / 100);
}

size_t Levenshtein(absl::string_view a, absl::string_view b) {
  return BoundedLevenshtein(a, b, std::max(a.size(), b.size()));
}

std::string NormalizeWhitespace(absl::string_view line) {
  std::string out;
  bool blank = false;
  for (char c : absl::StripAsciiWhitespace(line)) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c))) {
      blank = true;
      continue;
    }
    if (blank) out += ' ';
    blank = false;
    out += c;
  }
  return out;
}

std::string FormatEditScript(const EditScript& script) {
  std::string out;
  for (const Edit& e : script) {
    absl::StrAppend(&out, kFileHeader, " ", e.router, "\n", kSearch, "\n");
    for (const std::string& l : e.search) absl::StrAppend(&out, l, "\n");
    absl::StrAppend(&out, kDivider, "\n");
    for (const std::string& l : e.replace) absl::StrAppend(&out, l, "\n");
    absl::StrAppend(&out, kReplace, "\n");
  }
  return out;
}

absl::StatusOr<EditScript> ParseEditScript(absl::string_view text) {
  enum class State { kOutside, kSearch, kReplace };
  EditScript script;
  State state = State::kOutside;
  std::string router;
  Edit current;
  for (const std::string& line : SplitLines(text)) {
    absl::string_view trimmed = absl::StripTrailingAsciiWhitespace(line);
    switch (state) {
      case State::kOutside:
        if (absl::StartsWith(absl::StripLeadingAsciiWhitespace(trimmed), kFileHeader)) {
          router = std::string(absl::StripAsciiWhitespace(
              absl::StripLeadingAsciiWhitespace(trimmed).substr(kFileHeader.size())));
        } else if (trimmed == kSearch) {
          if (router.empty()) return absl::InvalidArgumentError("edit block without FILE header");
          current = Edit{.router = router};
          state = State::kSearch;
        } else if (trimmed == kDivider || trimmed == kReplace) {
          return absl::InvalidArgumentError(absl::StrCat(
              "malformed edit block in FILE ", router.empty() ? "<none>" : router));
        }
        break;
      case State::kSearch:
        if (trimmed == kDivider) {
          state = State::kReplace;
        } else if (trimmed == kSearch || trimmed == kReplace ||
                   absl::StartsWith(trimmed, kFileHeader)) {
          return absl::InvalidArgumentError(
              absl::StrCat("malformed edit block in FILE ", router));
        } else {
          current.search.push_back(line);
        }
        break;
      case State::kReplace:
        if (trimmed == kReplace) {
          if (current.search.empty()) {
            return absl::InvalidArgumentError(
                absl::StrCat("empty SEARCH block in FILE ", router));
          }
          script.push_back(std::move(current));
          current = Edit{};
          state = State::kOutside;
        } else if (trimmed == kSearch || trimmed == kDivider ||
                   absl::StartsWith(trimmed, kFileHeader)) {
          return absl::InvalidArgumentError(
              absl::StrCat("malformed edit block in FILE ", router));
        } else {
          current.replace.push_back(line);
        }
        break;
    }
  }
  if (state != State::kOutside) {
    return absl::InvalidArgumentError(absl::StrCat("malformed edit block in FILE ", router));
  }
  return script;
}

std::string MatchFailure::Message() const {
  std::string out = absl::StrCat("edit ", edit_index + 1, " for FILE ", router, ": search block ",
                                 reason == "ambiguous" ? "matches more than one region"
                                                       : "was not found");
  if (!nearest.empty()) absl::StrAppend(&out, "\nclosest region in the file:\n", nearest);
  return out;
}

ApplyOutcome ApplyEdits(const ConfigSet& configs, const EditScript& script) {
  ApplyOutcome out;
  out.configs = configs;
  for (size_t n = 0; n < script.size(); ++n) {
    const Edit& e = script[n];
    auto it = out.configs.find(e.router);
    if (it == out.configs.end()) {
      out.failure = MatchFailure{e.router, n, "not-found", ""};
      return out;
    }
    std::vector<std::string> lines = SplitLines(it->second);
    Located loc = Locate(lines, e.search);
    if (loc.positions.size() != 1) {
      MatchFailure f{e.router, n, loc.positions.empty() ? "not-found" : "ambiguous", ""};
      f.nearest = loc.positions.empty()
                      ? Nearest(lines, e.search)
                      : JoinBlock(lines, loc.positions[0], e.search.size());
      out.failure = std::move(f);
      return out;
    }
    size_t at = loc.positions[0];
    std::vector<std::string> next(lines.begin(), lines.begin() + at);
    next.insert(next.end(), e.replace.begin(), e.replace.end());
    next.insert(next.end(), lines.begin() + at + e.search.size(), lines.end());
    it->second = JoinLines(next);
    out.tiers.push_back(loc.tier);
  }
  return out;
}

}  // namespace netfix
