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

#ifndef RDGAI_EVALUATION_HPP_
#define RDGAI_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rdgai/apparatus.hpp"
#include "rdgai/llm_gateway.hpp"
#include "rdgai/pipeline.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai::eval {

// A manual classification used either as a prompt example or as truth.
// Multi-category relations are represented by their first category.
struct Annotation {
  TransitionPair pair;
  std::string category_id;

  bool operator==(const Annotation&) const = default;
};

struct EvalSplit {
  std::vector<Annotation> prompt_pool;   // document order
  std::vector<Annotation> ground_truth;  // document order
  double proportion = 0.5;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

// Every manual classification in document order.
std::vector<Annotation> manual_annotations(const ApparatusDocument& doc);

// Stratified by category: each category's annotations are shuffled with the
// seeded generator and round(proportion * m) of them (at least one when
// m >= 2) go to the prompt pool. A lone annotation goes to the pool.
// Throws std::invalid_argument for a proportion outside (0, 1) or fewer than
// two manual annotations.
EvalSplit split_annotations(const ApparatusDocument& doc, double proportion, std::uint64_t seed);

// Size of the prompt-pool share for a category with m annotations.
std::size_t pool_size(std::size_t m, double proportion);

struct Prediction {
  TransitionPair pair;
  std::string category_id;
  std::string justification;
};

// Rows are ground truth, columns predictions; the extra last column counts
// pairs with no usable prediction.
struct ConfusionMatrix {
  std::vector<std::string> categories;
  std::vector<std::vector<std::size_t>> counts;  // n x (n + 1)

  std::size_t size() const { return categories.size(); }
  std::size_t unclassified(std::size_t row) const { return counts[row].back(); }
  std::size_t row_total(std::size_t row) const;
  std::size_t column_total(std::size_t column) const;
  std::size_t trace() const;
  std::size_t total() const;
};

ConfusionMatrix score(const std::vector<Annotation>& ground_truth,
                      const std::vector<Prediction>& predictions,
                      const std::vector<std::string>& categories,
                      std::vector<std::string>* warnings = nullptr);

struct Metrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

// Throws std::invalid_argument for an empty matrix.
Metrics metrics(const ConfusionMatrix& matrix);

struct Listing {
  TransitionPair pair;
  std::string ground_truth;
  std::optional<std::string> predicted;
  std::string justification;
  bool correct = false;
};

struct EvaluationReport {
  Metrics metrics;
  ConfusionMatrix matrix;
  std::vector<Listing> listings;
  std::string base_prompt;
  std::optional<std::string> suggestions;
  // Run description shown in the header.
  std::string document_name;
  std::string model_name;
  std::size_t examples_per_category = 0;
  double proportion = 0.0;
  std::uint64_t seed = 0;
};

enum class ReportFormat { kHtml, kText };

// HTML output is a single self-contained file with inline styles.
std::string render_report(const EvaluationReport& report, ReportFormat format);

// 0.25 -> "25.0%"
std::string format_percent(double fraction);

// Asks the model to critique the category definitions and examples given
// the text report. Gateway errors propagate.
std::string review_prompt(const std::string& text_report, llm::ChatClient& client);

struct EvaluationOptions {
  double proportion = 0.5;
  std::uint64_t seed = 42;
  RunConfig run;
  bool suggest = false;
  std::string document_name;
  std::string model_name;
};

struct EvaluationOutcome {
  EvaluationReport report;
  EvalSplit split;
  RunStats stats;
  std::vector<std::string> warnings;
};

// Holds out ground truth, classifies it with the remaining annotations as
// the example pool, and scores the answers.
EvaluationOutcome evaluate(const ApparatusDocument& doc, llm::ChatClient& client,
                           const EvaluationOptions& options);

}  // namespace rdgai::eval

#endif  // RDGAI_EVALUATION_HPP_
