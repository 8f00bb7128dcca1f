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

#include "netfix/harness.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "netfix/resources.h"

namespace netfix {
namespace {

using nlohmann::json;

constexpr absl::string_view kInstructions =
    R"(You are a network engineer troubleshooting a misconfigured network.
Some router configurations below contain faults that make the network violate
the specifications listed further down. Every listed specification held before
the faults were introduced.

Work through the problem step by step before answering: find which
specifications fail and where traffic goes wrong, locate the routers whose
configuration causes it, explain each fault, then write the minimal edits that
restore every specification without breaking others.

Your answer must contain exactly these three sections, in this order:

### LOCALIZATION
One router name per line: every router whose configuration must change.

### DIAGNOSIS
A description of every fault you found.

### RECONFIGURATION
One or more edit blocks. Each block names a router file and gives a SEARCH
snippet copied verbatim from that file (it must occur exactly once in it)
and the REPLACE text that takes its place:

FILE: <router>
<<<<<<< SEARCH
<lines copied from the file>
=======
<replacement lines>
>>>>>>> REPLACE

Use the delimiters exactly as shown. Keep SEARCH blocks short but unique.
)";

constexpr absl::string_view kRetrievalInstructions =
    R"(You are a network engineer troubleshooting a misconfigured network.
Some router configurations contain faults that make the network violate the
specifications listed below. You will get the configuration files you ask for
in a second step.

List every router whose configuration file you need to see to diagnose and
fix the problem. Answer with this section and nothing else:

### FILES
One router name per line.
)";

std::string ViolationsText(const PredicateSet& v) {
  std::string out;
  for (const Predicate& p : v.items) absl::StrAppend(&out, p.ToString(), "\n");
  return out;
}

std::string FileHeader(absl::string_view router) {
  return absl::StrCat("=== ", router, ".cfg ===\n");
}

// Section name of a header line, or empty.
std::string HeaderName(absl::string_view line) {
  absl::string_view s = absl::StripAsciiWhitespace(line);
  if (!absl::StartsWith(s, "#") && !absl::StartsWith(s, "*")) return "";
  while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == ' ')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == '*' || s.back() == ':' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  return absl::AsciiStrToUpper(s);
}

// Splits `text` into sections keyed by header name; text before the first
// header is dropped. The first occurrence of a header wins.
std::map<std::string, std::vector<std::string>> Sections(absl::string_view text,
                                                         const std::set<std::string>& names) {
  std::map<std::string, std::vector<std::string>> out;
  std::vector<std::string>* current = nullptr;
  for (const std::string& line : SplitLines(text)) {
    std::string h = HeaderName(line);
    if (names.count(h)) {
      if (out.count(h)) {
        current = nullptr;
      } else {
        current = &out[h];
      }
      continue;
    }
    if (current != nullptr) current->push_back(line);
  }
  return out;
}

std::vector<std::string> NameList(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  for (const std::string& line : lines) {
    for (absl::string_view token : absl::StrSplit(line, absl::ByAnyChar(", \t"))) {
      token = absl::StripAsciiWhitespace(token);
      while (!token.empty() && (token.front() == '-' || token.front() == '*' ||
                                token.front() == '`' || token.front() == '\'')) {
        token.remove_prefix(1);
      }
      while (!token.empty() && (token.back() == '`' || token.back() == '\'' ||
                                token.back() == '.' || token.back() == ':')) {
        token.remove_suffix(1);
      }
      absl::ConsumeSuffix(&token, ".cfg");
      if (token.empty()) continue;
      // "1." style numbering.
      if (std::all_of(token.begin(), token.end(), [](char c) { return absl::ascii_isdigit(c); })) {
        continue;
      }
      if (std::find(out.begin(), out.end(), token) == out.end()) out.emplace_back(token);
    }
  }
  return out;
}

bool Blank(const std::vector<std::string>& lines) {
  return std::all_of(lines.begin(), lines.end(), [](const std::string& l) {
    return absl::StripAsciiWhitespace(l).empty();
  });
}

size_t RequestTokens(const std::vector<ChatMessage>& messages) {
  size_t n = 0;
  for (const ChatMessage& m : messages) n += EstimateTokens(m.content);
  return n;
}

}  // namespace

size_t EstimateTokens(absl::string_view text) {
  return (text.size() + kCharsPerToken - 1) / kCharsPerToken;
}

absl::string_view ContextStrategyName(ContextStrategy s) {
  switch (s) {
    case ContextStrategy::kFull:
      return "full";
    case ContextStrategy::kOracle:
      return "oracle";
    case ContextStrategy::kRetrieval:
      return "retrieval";
  }
  return "full";
}

std::optional<ContextStrategy> ContextStrategyFromName(absl::string_view name) {
  for (ContextStrategy s :
       {ContextStrategy::kFull, ContextStrategy::kOracle, ContextStrategy::kRetrieval}) {
    if (ContextStrategyName(s) == name) return s;
  }
  return std::nullopt;
}

std::string TopologyText(const Topology& t) {
  std::string out;
  for (const std::string& r : t.routers()) {
    std::vector<std::string> parts;
    for (int ifid : t.InterfaceIds(r)) {
      auto peer = t.Peer(Endpoint{r, ifid});
      if (!peer) continue;
      parts.push_back(absl::StrCat(peer->router, " (", InterfaceName(ifid), " - ",
                                   InterfaceName(peer->ifid), ")"));
    }
    absl::StrAppend(&out, r, ": ", absl::StrJoin(parts, ", "), "\n");
  }
  return out;
}

std::vector<std::string> PromptFiles(const ProblemInput& input,
                                     const std::set<std::string>* selected) {
  std::vector<std::string> out;
  for (const auto& [router, text] : input.broken) {
    bool include = true;
    if (selected != nullptr) {
      include = selected->count(router) > 0;
    } else if (input.strategy == ContextStrategy::kOracle) {
      include = input.oracle_routers.count(router) > 0;
    }
    if (include) out.push_back(router);
  }
  return out;
}

absl::StatusOr<std::string> BuildPrompt(const ProblemInput& input, size_t budget_tokens,
                                        const std::set<std::string>* selected) {
  std::string head = absl::StrCat(kInstructions, "\n## Topology\n", TopologyText(input.topology),
                                   "\n## Violated specifications\n",
                                   ViolationsText(input.violations),
                                   "\n## Configuration files\n");
  std::vector<std::string> files = PromptFiles(input, selected);
  std::vector<std::vector<std::string>> bodies;
  size_t fixed = head.size();
  size_t body_chars = 0;
  for (const std::string& r : files) {
    fixed += FileHeader(r).size() + 1;  // trailing blank line
    bodies.push_back(SplitLines(input.broken.at(r)));
    for (const std::string& l : bodies.back()) body_chars += l.size() + 1;
  }
  const size_t sentinel = kElisionSentinel.size() + 1;
  size_t budget = budget_tokens * kCharsPerToken;
  if (fixed + sentinel * files.size() > budget) {
    return absl::InvalidArgumentError(absl::StrCat(
        "token budget ", budget_tokens, " cannot hold the instructions, topology and violations (",
        EstimateTokens(std::string(fixed + sentinel * files.size(), ' ')), " tokens needed)"));
  }
  std::vector<bool> truncated(files.size(), false);
  size_t total = fixed + body_chars;
  for (size_t i = 0; total > budget; i = (i + 1) % files.size()) {
    if (bodies[i].empty()) continue;
    total -= bodies[i].back().size() + 1;
    bodies[i].pop_back();
    if (!truncated[i]) {
      truncated[i] = true;
      total += sentinel;
    }
  }
  std::string out = head;
  for (size_t i = 0; i < files.size(); ++i) {
    absl::StrAppend(&out, FileHeader(files[i]), JoinLines(bodies[i]));
    if (truncated[i]) absl::StrAppend(&out, kElisionSentinel, "\n");
    out += "\n";
  }
  return out;
}

std::string BuildRetrievalPrompt(const ProblemInput& input) {
  std::string names;
  for (const auto& [router, text] : input.broken) absl::StrAppend(&names, router, "\n");
  return absl::StrCat(kRetrievalInstructions, "\n## Routers\n", names, "\n## Topology\n",
                      TopologyText(input.topology), "\n## Violated specifications\n",
                      ViolationsText(input.violations));
}

std::variant<Solution, ParseFeedback> ParseSolution(absl::string_view text) {
  const std::string loc(kLocalizationHeader.substr(4));
  const std::string diag(kDiagnosisHeader.substr(4));
  const std::string reconf(kReconfigurationHeader.substr(4));
  auto sections = Sections(text, {loc, diag, reconf});
  for (absl::string_view h : {kLocalizationHeader, kDiagnosisHeader, kReconfigurationHeader}) {
    if (!sections.count(std::string(h.substr(4)))) {
      return ParseFeedback{absl::StrCat(
          "missing section ", h, ". Reply with the sections ", kLocalizationHeader, ", ",
          kDiagnosisHeader, " and ", kReconfigurationHeader, ".")};
    }
  }
  Solution s;
  s.faulty_routers = NameList(sections[loc]);
  if (s.faulty_routers.empty()) {
    return ParseFeedback{absl::StrCat("section ", kLocalizationHeader, " is empty")};
  }
  if (Blank(sections[diag])) {
    return ParseFeedback{absl::StrCat("section ", kDiagnosisHeader, " is empty")};
  }
  s.diagnosis = std::string(absl::StripAsciiWhitespace(JoinLines(sections[diag])));
  auto script = ParseEditScript(JoinLines(sections[reconf]));
  if (!script.ok()) return ParseFeedback{std::string(script.status().message())};
  if (script->empty()) {
    return ParseFeedback{absl::StrCat("section ", kReconfigurationHeader,
                                      " contains no edit blocks")};
  }
  s.edits = *std::move(script);
  return s;
}

std::variant<std::vector<std::string>, ParseFeedback> ParseFileList(absl::string_view text) {
  const std::string files(kFilesHeader.substr(4));
  auto sections = Sections(text, {files});
  if (!sections.count(files)) {
    return ParseFeedback{absl::StrCat("missing section ", kFilesHeader,
                                      ". List one router name per line under it.")};
  }
  return NameList(sections[files]);
}

Localization LocalizationF1(const std::set<std::string>& predicted,
                            const std::set<std::string>& truth) {
  Localization out;
  size_t hit = 0;
  for (const std::string& r : predicted) hit += truth.count(r);
  if (!predicted.empty()) out.precision = static_cast<double>(hit) / predicted.size();
  if (!truth.empty()) out.recall = static_cast<double>(hit) / truth.size();
  if (out.precision + out.recall > 0) {
    out.f1 = 2 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

absl::StatusOr<ModelConfig> ModelConfig::FromJson(const json& doc) {
  ModelConfig c;
  try {
    c.kind = doc.value("kind", c.kind);
    c.base_url = doc.value("base_url", "");
    c.model = doc.value("model", "");
    c.temperature = doc.value("temperature", 0.0);
    c.timeout_s = doc.value("timeout_s", c.timeout_s);
    c.api_key_env = doc.value("api_key_env", "");
    c.script_dir = doc.value("script_dir", "");
    c.max_attempts = doc.value("max_attempts", c.max_attempts);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad model config: ", e.what()));
  }
  if (c.kind == "http") {
    if (c.base_url.empty() || c.model.empty()) {
      return absl::InvalidArgumentError("model config needs base_url and model");
    }
  } else if (c.kind == "script") {
    if (c.script_dir.empty()) return absl::InvalidArgumentError("script model needs script_dir");
  } else if (c.kind != "perfect" && c.kind != "null") {
    return absl::InvalidArgumentError(absl::StrCat("unknown model kind '", c.kind, "'"));
  }
  if (c.max_attempts < 1) return absl::InvalidArgumentError("max_attempts must be positive");
  return c;
}

json ModelConfig::ToJson() const {
  return {{"kind", kind},           {"base_url", base_url},       {"model", model},
          {"temperature", temperature}, {"timeout_s", timeout_s}, {"api_key_env", api_key_env},
          {"script_dir", script_dir},   {"max_attempts", max_attempts}};
}

ScriptedModelClient::ScriptedModelClient(std::vector<std::string> replies, std::string name)
    : replies_(std::move(replies)), name_(std::move(name)) {}

absl::StatusOr<std::string> ScriptedModelClient::Complete(const std::vector<ChatMessage>&) {
  if (next_ >= replies_.size()) {
    return absl::ResourceExhaustedError(
        absl::StrCat("script exhausted after ", replies_.size(), " replies"));
  }
  return replies_[next_++];
}

absl::StatusOr<std::vector<std::string>> LoadScript(const std::string& dir,
                                                    const std::string& scenario) {
  namespace fs = std::filesystem;
  fs::path root = fs::path(dir) / scenario;
  if (!fs::is_directory(root)) root = dir;
  if (!fs::is_directory(root)) {
    return absl::NotFoundError(absl::StrCat("script directory ", dir, " not found"));
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(root)) {
    std::string name = e.path().filename().string();
    if (e.is_regular_file() && absl::StartsWith(name, "reply-") && absl::EndsWith(name, ".txt")) {
      files.push_back(e.path());
    }
  }
  if (files.empty()) {
    return absl::NotFoundError(absl::StrCat("no reply-*.txt files in ", root.string()));
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> out;
  for (const fs::path& p : files) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    out.push_back(buf.str());
  }
  return out;
}

std::string PerfectReply(const ScenarioTruth& truth) {
  std::string out = absl::StrCat(kLocalizationHeader, "\n");
  for (const std::string& r : truth.diff.affected_routers) absl::StrAppend(&out, r, "\n");
  absl::StrAppend(&out, "\n", kDiagnosisHeader, "\n");
  for (const FaultInstance& f : truth.faults) {
    const FaultKind* k = FindFaultKind(f.kind);
    absl::StrAppend(&out, "- ", f.Label(), ": ", k ? k->summary : f.kind, "\n");
  }
  absl::StrAppend(&out, "\n", kReconfigurationHeader, "\n", FormatEditScript(truth.diff.Backward()));
  return out;
}

std::string NullReply() {
  return absl::StrCat(kLocalizationHeader, "\n\n", kDiagnosisHeader, "\n\n",
                      kReconfigurationHeader, "\n");
}

absl::StatusOr<std::string> PerfectSolverClient::Complete(const std::vector<ChatMessage>& messages) {
  if (!messages.empty() && absl::StrContains(messages.back().content, kFilesHeader)) {
    std::string out = absl::StrCat(kFilesHeader, "\n");
    for (const std::string& r : truth_.diff.affected_routers) absl::StrAppend(&out, r, "\n");
    return out;
  }
  return PerfectReply(truth_);
}

absl::StatusOr<std::string> NullSolverClient::Complete(const std::vector<ChatMessage>& messages) {
  if (!messages.empty() && absl::StrContains(messages.back().content, kFilesHeader)) {
    return absl::StrCat(kFilesHeader, "\n");
  }
  return NullReply();
}

absl::StatusOr<std::unique_ptr<ModelClient>> MakeModelClient(const ModelConfig& config,
                                                             const std::string& scenario_id,
                                                             const ScenarioTruth& truth) {
  if (config.kind == "http") return MakeHttpClient(config);
  if (config.kind == "perfect") return std::make_unique<PerfectSolverClient>(truth);
  if (config.kind == "null") return std::make_unique<NullSolverClient>();
  if (config.kind == "script") {
    auto replies = LoadScript(config.script_dir, scenario_id);
    if (!replies.ok()) return replies.status();
    return std::make_unique<ScriptedModelClient>(*std::move(replies));
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown model kind '", config.kind, "'"));
}

SolveOutcome Solve(const ProblemInput& input, const std::set<std::string>& truth_routers,
                   ModelClient& client, const SolveOptions& options) {
  SolveOutcome out;
  out.fixed = input.broken;
  auto ask = [&](std::vector<ChatMessage>& conversation) -> absl::StatusOr<std::string> {
    out.prompt_tokens += RequestTokens(conversation);
    out.transcript.push_back(conversation.back());
    auto reply = client.Complete(conversation);
    if (reply.ok()) {
      out.completion_tokens += EstimateTokens(*reply);
      conversation.push_back({"assistant", *reply});
      out.transcript.push_back(conversation.back());
    }
    return reply;
  };

  std::optional<std::set<std::string>> selected;
  if (input.strategy == ContextStrategy::kRetrieval) {
    std::vector<ChatMessage> conversation = {{"user", BuildRetrievalPrompt(input)}};
    for (int attempt = 0; attempt < 2 && !selected; ++attempt) {
      auto reply = ask(conversation);
      if (!reply.ok()) {
        out.errored = true;
        out.error = std::string(reply.status().message());
        return out;
      }
      auto parsed = ParseFileList(*reply);
      if (auto* names = std::get_if<std::vector<std::string>>(&parsed)) {
        selected.emplace();
        for (const std::string& n : *names) {
          if (input.broken.count(n)) {
            selected->insert(n);
          } else {
            out.warnings.push_back(absl::StrCat("retrieval named unknown router '", n, "'"));
          }
        }
      } else if (attempt == 0) {
        conversation.push_back({"user", std::get<ParseFeedback>(parsed).message});
      }
    }
    if (selected) {
      size_t hit = 0;
      for (const std::string& r : truth_routers) hit += selected->count(r);
      out.retrieval_recall = truth_routers.empty() ? 1.0 : static_cast<double>(hit) / truth_routers.size();
      out.retrieved = selected;
    } else {
      out.warnings.push_back("retrieval file list unparseable; using full context");
    }
  }

  ProblemInput effective = input;
  if (effective.strategy == ContextStrategy::kRetrieval && !selected) {
    effective.strategy = ContextStrategy::kFull;
  }
  auto prompt = BuildPrompt(effective, options.budget_tokens, selected ? &*selected : nullptr);
  if (!prompt.ok()) {
    out.errored = true;
    out.error = std::string(prompt.status().message());
    return out;
  }
  std::vector<ChatMessage> conversation = {{"user", *prompt}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto reply = ask(conversation);
    if (!reply.ok()) {
      out.errored = true;
      out.error = std::string(reply.status().message());
      return out;
    }
    std::string feedback;
    auto parsed = ParseSolution(*reply);
    if (auto* s = std::get_if<Solution>(&parsed)) {
      ApplyOutcome applied = ApplyEdits(input.broken, s->edits);
      if (applied.ok()) {
        out.solved = true;
        out.fixed = std::move(applied.configs);
        out.tiers = std::move(applied.tiers);
        for (const std::string& r : s->faulty_routers) {
          if (!input.broken.count(r)) {
            out.warnings.push_back(absl::StrCat("localization names unknown router '", r, "'"));
          }
        }
        out.solution = *s;
        return out;
      }
      feedback = applied.failure->Message();
    } else {
      feedback = std::get<ParseFeedback>(parsed).message;
    }
    out.feedback.push_back(feedback);
    if (attempt == 0) {
      out.retries = 1;
      conversation.push_back({"user", feedback});
    }
  }
  return out;
}

json DiagnosisScores::ToJson() const {
  json judges = json::array();
  for (const JudgeVerdict& v : per_judge) {
    judges.push_back(
        {{"judge", v.judge}, {"soundness", v.soundness}, {"completeness", v.completeness}});
  }
  return {{"soundness", soundness},
          {"completeness", completeness},
          {"judges", judges},
          {"dropped", dropped}};
}

std::optional<std::pair<double, double>> ParseJudgeReply(absl::string_view text) {
  std::optional<double> soundness, completeness;
  for (const std::string& line : SplitLines(text)) {
    absl::string_view s = absl::StripAsciiWhitespace(line);
    std::string upper = absl::AsciiStrToUpper(s);
    std::optional<double>* slot = nullptr;
    size_t skip = 0;
    if (absl::StartsWith(upper, "SOUNDNESS:")) {
      slot = &soundness;
      skip = 10;
    } else if (absl::StartsWith(upper, "COMPLETENESS:")) {
      slot = &completeness;
      skip = 13;
    }
    if (slot == nullptr || slot->has_value()) continue;
    double v = 0;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(s.substr(skip)), &v)) return std::nullopt;
    if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
    *slot = v;
  }
  if (!soundness || !completeness) return std::nullopt;
  return std::make_pair(*soundness, *completeness);
}

std::string BuildJudgePrompt(absl::string_view diagnosis, const ScenarioTruth& truth) {
  std::string faults;
  for (const FaultInstance& f : truth.faults) {
    const FaultKind* k = FindFaultKind(f.kind);
    absl::StrAppend(&faults, "- ", f.kind, " at ", f.target, " (",
                    k ? FaultClassName(k->protocol_class) : "unknown", "): ",
                    k ? k->summary : "", "\n");
  }
  std::string diffs;
  for (const DiffHunk& h : truth.diff.hunks) {
    absl::StrAppend(&diffs, "router ", h.router, ", line ", h.line, " (", h.fault, ")\n");
    for (const std::string& l : h.before) absl::StrAppend(&diffs, "- ", l, "\n");
    for (const std::string& l : h.after) absl::StrAppend(&diffs, "+ ", l, "\n");
    diffs += "\n";
  }
  return absl::StrReplaceAll(JudgePromptTemplate(), {{"{{FAULTS}}", faults},
                                                     {"{{DIFFS}}", diffs},
                                                     {"{{DIAGNOSIS}}", diagnosis}});
}

absl::StatusOr<DiagnosisScores> JudgeDiagnosis(absl::string_view diagnosis,
                                               const ScenarioTruth& truth,
                                               const std::vector<ModelClient*>& judges) {
  if (judges.empty()) return absl::FailedPreconditionError("no judges configured");
  std::string prompt = BuildJudgePrompt(diagnosis, truth);
  DiagnosisScores out;
  for (ModelClient* judge : judges) {
    std::vector<ChatMessage> conversation = {{"user", prompt}};
    std::optional<std::pair<double, double>> verdict;
    for (int attempt = 0; attempt < 2 && !verdict; ++attempt) {
      auto reply = judge->Complete(conversation);
      if (reply.ok()) verdict = ParseJudgeReply(*reply);
      if (!verdict && attempt == 0) {
        conversation.push_back({"assistant", reply.ok() ? *reply : ""});
        conversation.push_back(
            {"user", "Reply with exactly two lines: SOUNDNESS: <number between 0 and 1> and "
                     "COMPLETENESS: <number between 0 and 1>."});
      }
    }
    if (verdict) {
      out.per_judge.push_back({judge->name(), verdict->first, verdict->second});
    } else {
      out.dropped.push_back(judge->name());
    }
  }
  if (out.per_judge.empty()) {
    return absl::UnavailableError(
        absl::StrCat("all judges failed: ", absl::StrJoin(out.dropped, ", ")));
  }
  for (const JudgeVerdict& v : out.per_judge) {
    out.soundness += v.soundness;
    out.completeness += v.completeness;
  }
  out.soundness /= out.per_judge.size();
  out.completeness /= out.per_judge.size();
  return out;
}

}  // namespace netfix
