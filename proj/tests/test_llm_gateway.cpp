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

#include <doctest.h>

#include <map>

#include "mock_llm.hpp"
#include "rdgai/llm_gateway.hpp"

using namespace rdgai;
using rdgai::testing::MockLlmServer;
using rdgai::testing::MockScript;

namespace {

llm::EnvironmentLookup fake_env(std::map<std::string, std::string> values) {
  return [values](std::string_view name) -> std::optional<std::string> {
    auto it = values.find(std::string(name));
    if (it == values.end()) return std::nullopt;
    return it->second;
  };
}

llm::ModelConfig mock_config(const MockLlmServer& server) {
  llm::ModelConfig c;
  c.endpoint_url = server.base_url();
  c.model_name = "mock";
  c.api_key = "sk-test-0123456789";
  c.initial_backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::seconds(5);
  return c;
}

const std::string kQuery = "Variation unit: u1\nPair 1: reading a -> reading b\n";

}  // namespace

TEST_CASE("config from environment and overrides") {
  auto env = fake_env({{"RDGAI_API_BASE", "http://localhost:9/v1"}, {"RDGAI_MODEL", "m1"}, {"RDGAI_API_KEY", "k"}});
  llm::ModelConfig c = llm::load_config(env, {});
  CHECK(c.endpoint_url == "http://localhost:9/v1");
  CHECK(c.model_name == "m1");
  CHECK(c.api_key == "k");
  CHECK(c.temperature == 0.0);
  CHECK(c.max_retries == 3);

  llm::ConfigOverrides o;
  o.model_name = "m2";
  o.temperature = 0.5;
  c = llm::load_config(env, o);
  CHECK(c.model_name == "m2");
  CHECK(c.temperature == 0.5);

  c = llm::load_config(fake_env({}), {});
  CHECK(c.endpoint_url == "https://api.openai.com/v1");
  CHECK_THROWS_WITH_AS(llm::require_credentials(c), "missing API key (RDGAI_API_KEY)", llm::ConfigError);
}

TEST_CASE("completion text is extracted") {
  MockScript script;
  script.default_category = "Orthography";
  MockLlmServer server(script);
  llm::HttpChatClient client(mock_config(server));
  llm::CompletionResult r = client.complete("system", kQuery);
  CHECK(r.text.find("\"Orthography\"") != std::string::npos);
  CHECK(r.retries == 0);
  CHECK(r.prompt_tokens > 0);
  CHECK_FALSE(r.cached);
  CHECK(client.complete("system", kQuery).cached);
  CHECK(server.authorization_headers().front() == "Bearer sk-test-0123456789");
  CHECK(server.system_messages() == std::vector<std::string>{"system", "system"});
}

TEST_CASE("429 then 200 retries once") {
  MockScript script;
  script.default_category = "Orthography";
  script.statuses = {429, 200};
  MockLlmServer server(script);
  llm::CompletionResult r = llm::complete(mock_config(server), "system", kQuery);
  CHECK(r.retries == 1);
  CHECK(server.request_count() == 2);
}

TEST_CASE("401 is permanent") {
  MockScript script;
  script.statuses = {401, 200};
  MockLlmServer server(script);
  try {
    llm::complete(mock_config(server), "system", kQuery);
    FAIL("expected an error");
  } catch (const llm::LlmError& e) {
    CHECK_FALSE(e.transient());
    CHECK(e.status() == 401);
    CHECK(std::string(e.what()).find("scripted failure 401") != std::string::npos);
  }
  CHECK(server.request_count() == 1);
}

TEST_CASE("retries are bounded") {
  MockScript script;
  script.statuses = {500, 502, 503, 504, 200};
  MockLlmServer server(script);
  llm::ModelConfig c = mock_config(server);
  CHECK_THROWS_AS(llm::complete(c, "s", kQuery), llm::LlmError);
  CHECK(server.request_count() == 4);
}

TEST_CASE("unreachable endpoint is transient") {
  llm::ModelConfig c;
  c.endpoint_url = "http://127.0.0.1:1/v1";
  c.model_name = "m";
  c.api_key = "sk-secret-value";
  c.max_retries = 1;
  c.initial_backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::seconds(1);
  try {
    llm::complete(c, "s", "u");
    FAIL("expected an error");
  } catch (const llm::LlmError& e) {
    CHECK(e.transient());
    CHECK(e.status() == 0);
    CHECK(std::string(e.what()).find("sk-secret-value") == std::string::npos);
  }
}

TEST_CASE("malformed completion bodies") {
  MockScript script;
  MockLlmServer server(script);
  llm::ModelConfig c = mock_config(server);
  c.endpoint_url = "http://127.0.0.1:" + std::to_string(server.port()) + "/nope";
  CHECK_THROWS_AS(llm::complete(c, "s", "u"), llm::LlmError);
}

TEST_CASE("redaction") {
  CHECK(llm::redact("key sk-1 and sk-1", "sk-1") == "key *** and ***");
  CHECK(llm::redact("nothing", "") == "nothing");
}
