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

#ifndef RDGAI_LLM_GATEWAY_HPP_
#define RDGAI_LLM_GATEWAY_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "rdgai/errors.hpp"

namespace rdgai::llm {

inline constexpr std::string_view kDefaultEndpoint = "https://api.openai.com/v1";
inline constexpr std::string_view kEnvEndpoint = "RDGAI_API_BASE";
inline constexpr std::string_view kEnvModel = "RDGAI_MODEL";
inline constexpr std::string_view kEnvApiKey = "RDGAI_API_KEY";

struct ModelConfig {
  std::string endpoint_url{kDefaultEndpoint};
  std::string model_name;
  std::string api_key;
  double temperature = 0.0;
  std::size_t max_output_tokens = 4096;
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
  std::size_t max_retries = 3;
  // Doubled after every retry: 1s, 2s, 4s, ...
  std::chrono::milliseconds initial_backoff{std::chrono::seconds(1)};
};

// Command-line values; any that are set win over the environment.
struct ConfigOverrides {
  std::optional<std::string> endpoint_url;
  std::optional<std::string> model_name;
  std::optional<std::string> api_key;
  std::optional<double> temperature;
  std::optional<std::size_t> max_output_tokens;
  std::optional<double> timeout_seconds;
  std::optional<std::size_t> max_retries;
};

using EnvironmentLookup = std::function<std::optional<std::string>(std::string_view)>;

// Never fails: a missing key or model is reported when a request is made,
// so offline commands work without credentials.
ModelConfig load_config(const EnvironmentLookup& environment, const ConfigOverrides& overrides);
ModelConfig load_config(const ConfigOverrides& overrides);  // process environment

struct CompletionResult {
  std::string text;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
  bool cached = false;
  std::size_t retries = 0;
};

class LlmError : public Error {
 public:
  LlmError(const std::string& message, bool transient, int status)
      : Error(message), transient_(transient), status_(status) {}
  // True when retries were exhausted on a retryable failure.
  bool transient() const { return transient_; }
  // HTTP status, or 0 when no response arrived.
  int status() const { return status_; }

 private:
  bool transient_;
  int status_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Anything that can answer a (system, user) chat exchange.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual CompletionResult complete(const std::string& system_text, const std::string& user_text) = 0;
};

// OpenAI-compatible chat-completions client. Safe to call from several
// threads at once; each call uses its own connection.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(ModelConfig config) : config_(std::move(config)) {}

  CompletionResult complete(const std::string& system_text, const std::string& user_text) override;
  const ModelConfig& config() const { return config_; }

 private:
  ModelConfig config_;
};

// Throws ConfigError when the key or model is missing, LlmError otherwise.
CompletionResult complete(const ModelConfig& config, const std::string& system_text,
                          const std::string& user_text);

// Throws ConfigError naming the missing setting.
void require_credentials(const ModelConfig& config);

// Replaces every occurrence of the secret with "***".
std::string redact(std::string message, std::string_view secret);

}  // namespace rdgai::llm

#endif  // RDGAI_LLM_GATEWAY_HPP_
