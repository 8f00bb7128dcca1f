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

#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "netfix/harness.h"

namespace netfix {
namespace {

using nlohmann::json;

class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(ModelConfig config) : config_(std::move(config)) {
    std::string url = config_.base_url;
    while (absl::EndsWith(url, "/")) url.pop_back();
    size_t scheme = url.find("://");
    size_t slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    origin_ = slash == std::string::npos ? url : url.substr(0, slash);
    path_ = slash == std::string::npos ? "" : url.substr(slash);
    if (!absl::EndsWith(path_, "/chat/completions")) path_ += "/chat/completions";
  }

  absl::StatusOr<std::string> Complete(const std::vector<ChatMessage>& messages) override {
    json body = {{"model", config_.model}, {"temperature", config_.temperature}};
    body["messages"] = json::array();
    for (const ChatMessage& m : messages) {
      body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (key == nullptr) {
        return absl::FailedPreconditionError(
            absl::StrCat("environment variable ", config_.api_key_env, " is not set"));
      }
      headers.emplace("Authorization", absl::StrCat("Bearer ", key));
    }
    absl::Status last = absl::UnavailableError("no attempt made");
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
      if (attempt > 0) std::this_thread::sleep_for(std::chrono::seconds(1 << (attempt - 1)));
      httplib::Client client(origin_);
      client.set_connection_timeout(config_.timeout_s, 0);
      client.set_read_timeout(config_.timeout_s, 0);
      client.set_write_timeout(config_.timeout_s, 0);
      auto res = client.Post(path_, headers, body.dump(), "application/json");
      if (!res) {
        last = absl::UnavailableError(
            absl::StrCat("request to ", origin_, path_, " failed: ", httplib::to_string(res.error())));
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last = absl::UnavailableError(absl::StrCat("endpoint returned HTTP ", res->status));
        continue;
      }
      if (res->status != 200) {
        return absl::InvalidArgumentError(
            absl::StrCat("endpoint returned HTTP ", res->status, ": ", res->body.substr(0, 200)));
      }
      return ExtractText(res->body);
    }
    return last;
  }

  std::string name() const override { return config_.model; }

 private:
  static absl::StatusOr<std::string> ExtractText(const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return absl::DataLossError("endpoint reply is not JSON");
    if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
      const json& msg = doc["choices"][0].value("message", json::object());
      if (msg.contains("content") && msg["content"].is_string()) {
        return msg["content"].get<std::string>();
      }
    }
    if (doc.contains("content") && doc["content"].is_array()) {
      for (const json& block : doc["content"]) {
        if (block.value("type", "text") == "text" && block.contains("text")) {
          return block["text"].get<std::string>();
        }
      }
    }
    return absl::DataLossError("endpoint reply carries no text content");
  }

  ModelConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::unique_ptr<ModelClient> MakeHttpClient(const ModelConfig& config) {
  return std::make_unique<HttpModelClient>(config);
}

}  // namespace netfix
