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

#ifndef RDGAI_PROMPTING_HPP_
#define RDGAI_PROMPTING_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdgai/apparatus.hpp"
#include "rdgai/errors.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai {

struct PromptOptions {
  std::size_t examples_per_category = 10;
  // Language the model should write justifications in.
  std::string language = "English";
  // Restricts which manual classifications may serve as examples.
  std::function<bool(const TransitionPair&)> example_pool;
};

// The cacheable system prompt plus the per-unit user message.
struct PromptBundle {
  std::string stable_prefix;
  std::string unit_query;
};

struct PairDecision {
  std::string active_id;
  std::string passive_id;
  std::string category_id;
  std::string justification;

  bool operator==(const PairDecision&) const = default;
};

struct PairError {
  std::optional<std::size_t> pair_number;  // 1-based, as numbered in the query
  std::string message;
};

struct ParsedResponse {
  std::vector<PairDecision> decisions;  // in query order
  std::vector<PairError> errors;
};

// The response contained no JSON array at all.
class ResponseFormatError : public Error {
 public:
  using Error::Error;
};

// Task statement, category definitions with their selected examples, and the
// output contract. Identical bytes for every unit of a run.
// Throws ValidationError when the document declares no categories.
std::string render_stable_prefix(const ApparatusDocument& doc, const PromptOptions& options);

// Context, readings and the numbered pairs of one unit.
// Throws std::invalid_argument for an empty pair list or foreign pairs.
std::string render_unit_query(const VariationUnit& unit, const std::vector<TransitionPair>& pairs);

// Appended to the query when a response could not be parsed at all.
std::string corrective_instruction();

// Accepts the first JSON array in `text`, ignoring surrounding prose and
// code fences. Throws ResponseFormatError when there is none.
ParsedResponse parse_response(std::string_view text, const std::vector<TransitionPair>& expected,
                              const std::vector<Category>& categories);

// A well-formed answer in the output contract, used by mocks and tests.
std::string render_answer(const std::vector<PairDecision>& decisions,
                          const std::vector<TransitionPair>& expected);

}  // namespace rdgai

#endif  // RDGAI_PROMPTING_HPP_
