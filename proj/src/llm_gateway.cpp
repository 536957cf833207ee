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

#include "rdgai/llm_gateway.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace rdgai::llm {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;    // request path for chat completions
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: '" + url + "'");
  auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.origin = url.substr(0, path_start);
  std::string path = path_start == std::string::npos ? std::string() : url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (!path.ends_with("/chat/completions")) path += "/chat/completions";
  e.path = path;
  return e;
}

std::string provider_message(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_object() && parsed.contains("error")) {
    const json& err = parsed["error"];
    if (err.is_object() && err.contains("message") && err["message"].is_string()) {
      return err["message"].get<std::string>();
    }
    if (err.is_string()) return err.get<std::string>();
  }
  return body.size() > 500 ? body.substr(0, 500) : body;
}

bool retryable(int status) { return status == 429 || status >= 500; }

CompletionResult parse_completion(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw LlmError("malformed completion response: not a JSON object", false, 200);
  }
  CompletionResult result;
  const json* content = nullptr;
  if (parsed.contains("choices") && parsed["choices"].is_array() && !parsed["choices"].empty()) {
    const json& choice = parsed["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content")) {
      content = &choice["message"]["content"];
    }
  }
  if (!content || !content->is_string()) {
    throw LlmError("malformed completion response: no message content", false, 200);
  }
  result.text = content->get<std::string>();
  if (parsed.contains("usage") && parsed["usage"].is_object()) {
    const json& usage = parsed["usage"];
    result.prompt_tokens = usage.value("prompt_tokens", std::size_t{0});
    result.completion_tokens = usage.value("completion_tokens", std::size_t{0});
    if (usage.contains("prompt_tokens_details") && usage["prompt_tokens_details"].is_object()) {
      result.cached = usage["prompt_tokens_details"].value("cached_tokens", std::size_t{0}) > 0;
    }
  }
  return result;
}

}  // namespace

ModelConfig load_config(const EnvironmentLookup& environment, const ConfigOverrides& overrides) {
  ModelConfig config;
  if (auto v = environment(kEnvEndpoint); v && !v->empty()) config.endpoint_url = *v;
  if (auto v = environment(kEnvModel); v && !v->empty()) config.model_name = *v;
  if (auto v = environment(kEnvApiKey); v && !v->empty()) config.api_key = *v;
  if (overrides.endpoint_url) config.endpoint_url = *overrides.endpoint_url;
  if (overrides.model_name) config.model_name = *overrides.model_name;
  if (overrides.api_key) config.api_key = *overrides.api_key;
  if (overrides.temperature) config.temperature = *overrides.temperature;
  if (overrides.max_output_tokens) config.max_output_tokens = *overrides.max_output_tokens;
  if (overrides.timeout_seconds) {
    config.timeout = std::chrono::milliseconds(static_cast<long long>(*overrides.timeout_seconds * 1000));
  }
  if (overrides.max_retries) config.max_retries = *overrides.max_retries;
  return config;
}

ModelConfig load_config(const ConfigOverrides& overrides) {
  return load_config(
      [](std::string_view name) -> std::optional<std::string> {
        const char* value = std::getenv(std::string(name).c_str());
        if (!value) return std::nullopt;
        return std::string(value);
      },
      overrides);
}

void require_credentials(const ModelConfig& config) {
  if (config.api_key.empty()) throw ConfigError("missing API key (RDGAI_API_KEY)");
  if (config.model_name.empty()) throw ConfigError("missing model name (RDGAI_MODEL or --model)");
  if (config.endpoint_url.empty()) throw ConfigError("missing endpoint (RDGAI_API_BASE or --api-base)");
  if (config.temperature < 0.0) throw ConfigError("temperature must not be negative");
}

std::string redact(std::string message, std::string_view secret) {
  if (secret.empty()) return message;
  for (auto pos = message.find(secret); pos != std::string::npos; pos = message.find(secret, pos + 3)) {
    message.replace(pos, secret.size(), "***");
  }
  return message;
}

CompletionResult HttpChatClient::complete(const std::string& system_text,
                                          const std::string& user_text) {
  require_credentials(config_);
  Endpoint endpoint = split_endpoint(config_.endpoint_url);
  json request = {
      {"model", config_.model_name},
      {"messages", json::array({{{"role", "system"}, {"content", system_text}},
                                {{"role", "user"}, {"content", user_text}}})},
      {"temperature", config_.temperature},
      {"max_tokens", config_.max_output_tokens},
  };
  const std::string body = request.dump(-1, ' ', false, json::error_handler_t::replace);
  httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};

  auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - timeout_s);

  std::string last_error;
  int last_status = 0;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.initial_backoff * (1LL << (attempt - 1)));
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(timeout_s.count(), static_cast<time_t>(timeout_us.count()));
    client.set_read_timeout(timeout_s.count(), static_cast<time_t>(timeout_us.count()));
    client.set_write_timeout(timeout_s.count(), static_cast<time_t>(timeout_us.count()));
    auto response = client.Post(endpoint.path, headers, body, "application/json");
    if (!response) {
      last_status = 0;
      last_error = "request failed: " + httplib::to_string(response.error());
      continue;
    }
    if (response->status == 200) {
      CompletionResult result = parse_completion(response->body);
      result.retries = attempt;
      return result;
    }
    last_status = response->status;
    last_error = "HTTP " + std::to_string(response->status) + ": " + provider_message(response->body);
    if (!retryable(response->status)) {
      throw LlmError(redact(last_error, config_.api_key), false, last_status);
    }
  }
  throw LlmError(redact("giving up after " + std::to_string(config_.max_retries) +
                            " retries; last error " + last_error,
                        config_.api_key),
                 true, last_status);
}

CompletionResult complete(const ModelConfig& config, const std::string& system_text,
                          const std::string& user_text) {
  return HttpChatClient(config).complete(system_text, user_text);
}

}  // namespace rdgai::llm
