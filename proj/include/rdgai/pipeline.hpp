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

#ifndef RDGAI_PIPELINE_HPP_
#define RDGAI_PIPELINE_HPP_

#include <chrono>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdgai/apparatus.hpp"
#include "rdgai/llm_gateway.hpp"
#include "rdgai/prompting.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai {

struct RunConfig {
  std::size_t examples_per_category = 10;
  std::size_t concurrency = 4;
  std::optional<std::vector<std::string>> unit_filter;
  bool dry_run = false;
  std::string language = "English";
  // Manual classifications allowed as prompt examples (all when unset).
  std::function<bool(const TransitionPair&)> prompt_pool;
  // Unclassified pairs to send to the model (all when unset).
  std::function<bool(const TransitionPair&)> target_filter;
};

struct UnitError {
  std::string unit_id;
  std::string message;
};

struct RunStats {
  std::size_t pairs_attempted = 0;
  std::size_t pairs_classified = 0;
  std::size_t pairs_failed = 0;
  std::size_t units_queried = 0;
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
  std::size_t cached_responses = 0;
  std::vector<UnitError> errors;
  std::vector<std::string> warnings;
  std::chrono::milliseconds wall_time{0};
};

struct UnitDecision {
  std::string unit_id;
  PairDecision decision;
};

struct RunResult {
  ApparatusDocument document;
  RunStats stats;
  std::vector<UnitDecision> decisions;  // document order
  std::string stable_prefix;
};

// Classifies every unclassified pair with the model and writes the answers
// back as machine relations. Manual classifications are never touched.
// With dry_run set, writes the prompts to `dry_run_out` and changes nothing.
// Throws ValidationError when the document has no categories.
RunResult classify_document(const ApparatusDocument& doc, llm::ChatClient& client,
                            const RunConfig& config, std::ostream* dry_run_out = nullptr);

// Same, with an HTTP client built from `model`. Missing credentials are
// reported before any work unless this is a dry run.
RunResult classify_document(const ApparatusDocument& doc, const llm::ModelConfig& model,
                            const RunConfig& config, std::ostream* dry_run_out = nullptr);

}  // namespace rdgai

#endif  // RDGAI_PIPELINE_HPP_
