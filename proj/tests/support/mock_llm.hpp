// Copyright 2026 The Rdgai Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RDGAI_TESTS_SUPPORT_MOCK_LLM_HPP_
#define RDGAI_TESTS_SUPPORT_MOCK_LLM_HPP_

#include <atomic>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rdgai/apparatus.hpp"
#include "rdgai/llm_gateway.hpp"

namespace httplib {
class Server;
}

namespace rdgai::testing {

// Deterministic stand-in for a chat model. Answers classification queries
// from an answer key and replays scripted failures.
struct MockScript {
  // "unit|active|passive" -> category id to answer with.
  std::map<std::string, std::string> answers;
  // Used for pairs missing from `answers`; empty means "omit the pair".
  std::string default_category;
  // HTTP statuses for successive requests; 200 answers normally.
  std::deque<int> statuses;
  // Raw replies for a unit, consumed one per request before normal answers.
  std::map<std::string, std::deque<std::string>> unit_replies;
  // Reply to prompt-review requests.
  std::string review_reply = "Clarify which pronoun changes count as minor.";
  // Wrap answers in a ```json fence with some prose around it.
  bool fenced = false;

  static std::string key(const std::string& unit, const std::string& active, const std::string& passive) {
    return unit + "|" + active + "|" + passive;
  }
  static MockScript from_json(const nlohmann::json& config);
};

// Answer key reproducing every manual classification in the document.
std::map<std::string, std::string> answer_key(const ApparatusDocument& doc);

// The reply text the mock gives for one request.
std::string mock_reply(MockScript& script, const std::string& system_text, const std::string& user_text);

// In-process client, no sockets.
class ScriptedChatClient : public llm::ChatClient {
 public:
  explicit ScriptedChatClient(MockScript script) : script_(std::move(script)) {}
  llm::CompletionResult complete(const std::string& system_text, const std::string& user_text) override;
  std::size_t calls() const { return calls_; }

 private:
  std::mutex mutex_;
  MockScript script_;
  std::size_t calls_ = 0;
};

// OpenAI-compatible HTTP server on 127.0.0.1 with an ephemeral port.
class MockLlmServer {
 public:
  explicit MockLlmServer(MockScript script, int port = 0);
  ~MockLlmServer();
  MockLlmServer(const MockLlmServer&) = delete;
  MockLlmServer& operator=(const MockLlmServer&) = delete;

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  std::size_t request_count() const;
  std::vector<std::string> system_messages() const;
  std::vector<std::string> authorization_headers() const;
  // Blocks until stopped (used by the command-line tool).
  void wait();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mutex_;
  MockScript script_;
  std::vector<std::string> system_messages_;
  std::vector<std::string> authorization_;
};

}  // namespace rdgai::testing

#endif  // RDGAI_TESTS_SUPPORT_MOCK_LLM_HPP_
