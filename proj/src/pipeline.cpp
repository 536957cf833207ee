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

#include "rdgai/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

#include "rdgai/selection.hpp"

namespace rdgai {
namespace {

struct UnitJob {
  std::string unit_id;
  std::vector<TransitionPair> pairs;
  std::string query;
};

struct UnitOutcome {
  std::optional<ParsedResponse> parsed;
  std::string failure;
  std::size_t requests = 0;
  std::size_t retries = 0;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
  std::size_t cached = 0;
};

void account(UnitOutcome& outcome, const llm::CompletionResult& result) {
  ++outcome.requests;
  outcome.retries += result.retries;
  outcome.prompt_tokens += result.prompt_tokens;
  outcome.completion_tokens += result.completion_tokens;
  if (result.cached) ++outcome.cached;
}

UnitOutcome run_unit(llm::ChatClient& client, const std::string& prefix, const UnitJob& job,
                     const std::vector<Category>& categories) {
  UnitOutcome outcome;
  try {
    auto first = client.complete(prefix, job.query);
    account(outcome, first);
    try {
      outcome.parsed = parse_response(first.text, job.pairs, categories);
      return outcome;
    } catch (const ResponseFormatError&) {
    }
    // One corrective retry, then give up on the unit.
    auto second = client.complete(prefix, job.query + corrective_instruction());
    account(outcome, second);
    outcome.parsed = parse_response(second.text, job.pairs, categories);
  } catch (const std::exception& e) {
    outcome.parsed.reset();
    outcome.failure = e.what();
  }
  return outcome;
}

bool selected(const RunConfig& config, const std::string& unit_id) {
  if (!config.unit_filter) return true;
  const auto& ids = *config.unit_filter;
  return std::find(ids.begin(), ids.end(), unit_id) != ids.end();
}

}  // namespace

RunResult classify_document(const ApparatusDocument& doc, llm::ChatClient& client,
                            const RunConfig& config, std::ostream* dry_run_out) {
  auto started = std::chrono::steady_clock::now();
  if (config.examples_per_category == 0) throw ValidationError("examples per category must be at least 1");

  RunResult result;
  result.document = doc;
  RunStats& stats = result.stats;

  PromptOptions prompt_options;
  prompt_options.examples_per_category = config.examples_per_category;
  prompt_options.language = config.language;
  prompt_options.example_pool = config.prompt_pool;
  result.stable_prefix = render_stable_prefix(doc, prompt_options);

  for (const auto& category : doc.categories) {
    auto examples = select_examples(doc, category.id, 1, config.prompt_pool);
    if (examples.empty()) stats.warnings.push_back("category '" + category.id + "' has no examples");
  }

  std::vector<UnitJob> jobs;
  for (const auto& unit : doc.units) {
    if (!selected(config, unit.id)) continue;
    UnitJob job;
    job.unit_id = unit.id;
    for (auto& pair : enumerate_pairs(unit)) {
      if (unit.find_relation(pair.active_id, pair.passive_id)) continue;
      if (config.target_filter && !config.target_filter(pair)) continue;
      job.pairs.push_back(std::move(pair));
    }
    if (job.pairs.empty()) continue;
    job.query = render_unit_query(unit, job.pairs);
    jobs.push_back(std::move(job));
  }

  if (config.dry_run) {
    if (dry_run_out) {
      *dry_run_out << "=== system prompt ===\n" << result.stable_prefix;
      for (const auto& job : jobs) {
        *dry_run_out << "\n=== unit " << job.unit_id << " ===\n" << job.query;
      }
    }
    stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    return result;
  }

  std::vector<UnitOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      outcomes[i] = run_unit(client, result.stable_prefix, jobs[i], doc.categories);
    }
  };
  std::size_t threads = std::clamp<std::size_t>(config.concurrency, 1, std::max<std::size_t>(jobs.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Single writer, document order.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const UnitJob& job = jobs[i];
    const UnitOutcome& outcome = outcomes[i];
    ++stats.units_queried;
    stats.requests += outcome.requests;
    stats.retries += outcome.retries;
    stats.prompt_tokens += outcome.prompt_tokens;
    stats.completion_tokens += outcome.completion_tokens;
    stats.cached_responses += outcome.cached;
    stats.pairs_attempted += job.pairs.size();
    if (!outcome.parsed) {
      stats.pairs_failed += job.pairs.size();
      stats.errors.push_back({job.unit_id, outcome.failure});
      continue;
    }
    for (const auto& error : outcome.parsed->errors) {
      std::string where = error.pair_number ? "pair " + std::to_string(*error.pair_number) + ": " : "";
      stats.errors.push_back({job.unit_id, where + error.message});
    }
    for (const auto& decision : outcome.parsed->decisions) {
      TransitionPair pair = make_pair(result.document, job.unit_id, decision.active_id, decision.passive_id);
      classify_pair_in_place(result.document, pair, {decision.category_id}, decision.justification,
                             std::string(kMachineAgent));
      result.decisions.push_back({job.unit_id, decision});
    }
    // A later decision's reciprocal must not replace an earlier direct answer.
    for (const auto& decision : outcome.parsed->decisions) {
      add_relation_in_place(result.document, job.unit_id,
                            {decision.active_id, decision.passive_id, {decision.category_id},
                             decision.justification, std::string(kMachineAgent)});
    }
    stats.pairs_classified += outcome.parsed->decisions.size();
    stats.pairs_failed += job.pairs.size() - outcome.parsed->decisions.size();
  }
  stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  return result;
}

RunResult classify_document(const ApparatusDocument& doc, const llm::ModelConfig& model,
                            const RunConfig& config, std::ostream* dry_run_out) {
  if (!config.dry_run) llm::require_credentials(model);
  llm::HttpChatClient client(model);
  return classify_document(doc, client, config, dry_run_out);
}

}  // namespace rdgai
