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

#include <atomic>
#include <string>
#include <thread>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "netfix/harness.h"
#include "nlohmann/json.hpp"

namespace netfix {
namespace {

class ChatServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      last_body_ = req.body;
      last_auth_ = req.get_header_value("Authorization");
      if (hits_ <= fail_first_) {
        res.status = 429;
        return;
      }
      nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "ok"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/blocks/chat/completions", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"content":[{"type":"text","text":"block reply"}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  ModelConfig Config(const std::string& path) {
    ModelConfig c;
    c.base_url = absl::StrCat("http://127.0.0.1:", port_, path);
    c.model = "stub-model";
    c.timeout_s = 5;
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  int fail_first_ = 0;
  std::string last_body_;
  std::string last_auth_;
};

TEST_F(ChatServer, OpenAiStyleReply) {
  setenv("NETFIX_TEST_KEY", "sekrit", 1);
  ModelConfig c = Config("/v1");
  c.api_key_env = "NETFIX_TEST_KEY";
  auto client = MakeHttpClient(c);
  auto reply = client->Complete({{"user", "hello"}});
  ASSERT_TRUE(reply.ok()) << reply.status();
  EXPECT_EQ(*reply, "ok");
  EXPECT_EQ(last_auth_, "Bearer sekrit");
  auto body = nlohmann::json::parse(last_body_);
  EXPECT_EQ(body["model"], "stub-model");
  EXPECT_EQ(body["messages"][0]["content"], "hello");
}

TEST_F(ChatServer, RetriesRateLimits) {
  fail_first_ = 1;
  auto reply = MakeHttpClient(Config("/v1"))->Complete({{"user", "x"}});
  ASSERT_TRUE(reply.ok()) << reply.status();
  EXPECT_EQ(hits_, 2);
}

TEST_F(ChatServer, GivesUpAfterMaxAttempts) {
  fail_first_ = 100;
  ModelConfig c = Config("/v1");
  c.max_attempts = 2;
  auto reply = MakeHttpClient(c)->Complete({{"user", "x"}});
  EXPECT_FALSE(reply.ok());
  EXPECT_EQ(hits_, 2);
}

TEST_F(ChatServer, ContentBlockReply) {
  auto reply = MakeHttpClient(Config("/blocks"))->Complete({{"user", "x"}});
  ASSERT_TRUE(reply.ok());
  EXPECT_EQ(*reply, "block reply");
}

TEST_F(ChatServer, NotFoundIsNotRetried) {
  auto reply = MakeHttpClient(Config("/nowhere"))->Complete({{"user", "x"}});
  EXPECT_FALSE(reply.ok());
}

TEST_F(ChatServer, MissingKeyVariable) {
  ModelConfig c = Config("/v1");
  c.api_key_env = "NETFIX_SURELY_UNSET_VARIABLE";
  EXPECT_FALSE(MakeHttpClient(c)->Complete({{"user", "x"}}).ok());
  EXPECT_EQ(hits_, 0);
}

}  // namespace
}  // namespace netfix
