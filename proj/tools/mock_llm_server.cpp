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

// Scripted OpenAI-compatible server for offline runs of the rdgai CLI.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "../tests/support/mock_llm.hpp"
#include "rdgai/apparatus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Serve canned chat completions for rdgai classification prompts.", "rdgai-mock-llm"};
  int port = 8089;
  std::string script_path, key_from, fallback;
  app.add_option("--port", port, "Port on 127.0.0.1")->capture_default_str();
  app.add_option("--script", script_path, "JSON script (answers, default_category, statuses, unit_replies)")
      ->check(CLI::ExistingFile);
  app.add_option("--answers-from", key_from, "Answer with the manual classifications of this TEI file")
      ->check(CLI::ExistingFile);
  app.add_option("--default-category", fallback, "Answer for pairs the script does not cover");
  CLI11_PARSE(app, argc, argv);

  try {
    rdgai::testing::MockScript script;
    if (!script_path.empty()) script = rdgai::testing::MockScript::from_json(nlohmann::json::parse(rdgai::read_file(script_path)));
    if (!fallback.empty()) script.default_category = fallback;
    if (!key_from.empty()) {
      for (auto& [k, v] : rdgai::testing::answer_key(rdgai::load_document(key_from))) script.answers.emplace(k, v);
    }
    rdgai::testing::MockLlmServer server(std::move(script), port);
    std::cerr << "mock model listening on " << server.base_url() << "\n";
    server.wait();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
