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

// rdgai command-line interface.

#include <httplib.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "rdgai/apparatus.hpp"
#include "rdgai/evaluation.hpp"
#include "rdgai/llm_gateway.hpp"
#include "rdgai/pipeline.hpp"
#include "rdgai/service.hpp"
#include "rdgai/tabular.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct ModelFlags {
  std::optional<std::string> model;
  std::optional<std::string> api_base;
  std::optional<double> temperature;
  std::optional<double> timeout;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", model, "Model name (overrides RDGAI_MODEL)");
    cmd->add_option("--api-base", api_base, "Chat completions base URL (overrides RDGAI_API_BASE)");
    cmd->add_option("--temperature", temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
    cmd->add_option("--timeout", timeout, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
  }

  rdgai::llm::ModelConfig resolve() const {
    rdgai::llm::ConfigOverrides o;
    o.model_name = model;
    o.endpoint_url = api_base;
    o.temperature = temperature;
    o.timeout_seconds = timeout;
    return rdgai::llm::load_config(o);
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

json stats_json(const rdgai::RunStats& s) {
  json errors = json::array();
  for (const auto& e : s.errors) errors.push_back({{"unit_id", e.unit_id}, {"message", e.message}});
  return json{{"pairs_attempted", s.pairs_attempted},
              {"pairs_classified", s.pairs_classified},
              {"pairs_failed", s.pairs_failed},
              {"units_queried", s.units_queried},
              {"requests", s.requests},
              {"retries", s.retries},
              {"prompt_tokens", s.prompt_tokens},
              {"completion_tokens", s.completion_tokens},
              {"cached_responses", s.cached_responses},
              {"errors", errors},
              {"warnings", s.warnings},
              {"wall_time_ms", s.wall_time.count()}};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ClassifyArgs {
  std::string input, output;
  std::size_t examples = 10;
  std::size_t concurrency = 4;
  std::string units;
  bool dry_run = false;
  std::string stats_path;
  std::string language = "English";
  ModelFlags model;
};

int run_classify(const ClassifyArgs& a) {
  rdgai::ApparatusDocument doc = rdgai::load_document(a.input);
  rdgai::RunConfig config;
  config.examples_per_category = a.examples;
  config.concurrency = a.concurrency;
  config.dry_run = a.dry_run;
  config.language = a.language;
  if (!a.units.empty()) config.unit_filter = split_list(a.units);

  rdgai::RunResult result = rdgai::classify_document(doc, a.model.resolve(), config, &std::cout);
  print_warnings(result.stats.warnings);
  for (const auto& e : result.stats.errors) std::cerr << "error: unit " << e.unit_id << ": " << e.message << "\n";

  rdgai::save_document(result.document, a.output);
  if (!a.stats_path.empty()) rdgai::write_file_atomic(a.stats_path, stats_json(result.stats).dump(2) + "\n");
  if (!a.dry_run) {
    const auto& s = result.stats;
    std::cerr << "classified " << s.pairs_classified << " of " << s.pairs_attempted << " pairs in "
              << s.units_queried << " units (" << s.pairs_failed << " failed)\n";
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string input;
  double proportion = 0.5;
  std::uint64_t seed = 42;
  std::size_t examples = 10;
  std::size_t concurrency = 4;
  std::string report_path;
  std::string text_report_path;
  bool suggest = false;
  ModelFlags model;
};

int run_evaluate(const EvaluateArgs& a) {
  rdgai::ApparatusDocument doc = rdgai::load_document(a.input);
  rdgai::llm::ModelConfig model = a.model.resolve();
  rdgai::llm::require_credentials(model);
  rdgai::llm::HttpChatClient client(model);

  rdgai::eval::EvaluationOptions options;
  options.proportion = a.proportion;
  options.seed = a.seed;
  options.run.examples_per_category = a.examples;
  options.run.concurrency = a.concurrency;
  options.suggest = a.suggest;
  options.document_name = std::filesystem::path(a.input).filename().string();
  options.model_name = model.model_name;

  rdgai::eval::EvaluationOutcome outcome = rdgai::eval::evaluate(doc, client, options);
  print_warnings(outcome.warnings);
  for (const auto& e : outcome.stats.errors) std::cerr << "error: unit " << e.unit_id << ": " << e.message << "\n";

  const auto& report = outcome.report;
  rdgai::write_file_atomic(a.report_path, rdgai::eval::render_report(report, rdgai::eval::ReportFormat::kHtml));
  if (!a.text_report_path.empty()) {
    rdgai::write_file_atomic(a.text_report_path, rdgai::eval::render_report(report, rdgai::eval::ReportFormat::kText));
  }
  char line[160];
  std::snprintf(line, sizeof line, "accuracy %.4f\nmacro_precision %.4f\nmacro_recall %.4f\nmacro_f1 %.4f\n",
                report.metrics.accuracy, report.metrics.macro_precision, report.metrics.macro_recall,
                report.metrics.macro_f1);
  std::cout << line << "ground_truth " << report.matrix.total() << "\n"
            << "prompt_pool " << outcome.split.prompt_pool.size() << "\n";
  return kExitOk;
}

int run_export(const std::string& input, const std::string& output) {
  rdgai::ApparatusDocument doc = rdgai::load_document(input);
  rdgai::write_file_atomic(output, rdgai::tabular::export_table(doc));
  return kExitOk;
}

int run_import(const std::string& input, const std::string& csv_path, const std::string& output,
               const std::string& resp) {
  rdgai::ApparatusDocument doc = rdgai::load_document(input);
  rdgai::tabular::ImportResult result = rdgai::tabular::import_table(doc, rdgai::read_file(csv_path), resp);
  for (const auto& e : result.summary.errors) std::cerr << "row " << e.row << ": " << e.message << "\n";
  rdgai::save_document(result.document, output);
  const auto& s = result.summary;
  std::cout << "added " << s.added << "\nchanged " << s.changed << "\nunchanged " << s.unchanged << "\nskipped "
            << s.skipped << "\nerrors " << s.errors.size() << "\n";
  return kExitOk;
}

struct ServeArgs {
  std::string input;
  std::string host = "127.0.0.1";
  int port = 8000;
  std::string resp = "editor";
  std::string static_dir;
};

int run_serve(const ServeArgs& a) {
  rdgai::service::ServiceOptions options;
  options.document_path = a.input;
  options.responsibility = a.resp;
  if (!a.static_dir.empty()) options.static_dir = a.static_dir;
  rdgai::service::AnnotationService service(options);
  httplib::Server server;
  service.mount(server);
  std::cerr << "serving " << a.input << " on http://" << a.host << ":" << a.port << "/ as '" << a.resp << "'\n";
  if (!server.listen(a.host, a.port)) {
    std::cerr << "error: cannot listen on " << a.host << ":" << a.port << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify scribal transitions between variant readings in TEI critical apparatus files.", "rdgai"};
  app.set_version_flag("--version", "rdgai 0.1.0");
  app.require_subcommand(1);

  ClassifyArgs classify;
  auto* cmd_classify = app.add_subcommand("classify", "Classify unclassified transitions with a language model");
  cmd_classify->add_option("input", classify.input, "Input TEI file")->required()->check(CLI::ExistingFile);
  cmd_classify->add_option("output", classify.output, "Output TEI file")->required();
  cmd_classify->add_option("--examples", classify.examples, "Examples per category in the prompt")
      ->capture_default_str();
  cmd_classify->add_option("--units", classify.units, "Comma-separated unit ids to restrict the run");
  cmd_classify->add_option("--concurrency", classify.concurrency, "Parallel model requests")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  cmd_classify->add_flag("--dry-run", classify.dry_run, "Print prompts without calling the model");
  cmd_classify->add_option("--stats", classify.stats_path, "Write run statistics as JSON");
  cmd_classify->add_option("--language", classify.language, "Language for justifications")->capture_default_str();
  classify.model.add_to(cmd_classify);

  EvaluateArgs evaluate;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "Score the model against held-out manual classifications");
  cmd_evaluate->add_option("input", evaluate.input, "Input TEI file")->required()->check(CLI::ExistingFile);
  cmd_evaluate->add_option("--proportion", evaluate.proportion, "Share of annotations used as prompt examples")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_evaluate->add_option("--seed", evaluate.seed, "Split seed")->capture_default_str();
  cmd_evaluate->add_option("--examples", evaluate.examples, "Examples per category in the prompt")
      ->capture_default_str();
  cmd_evaluate->add_option("--concurrency", evaluate.concurrency, "Parallel model requests")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  cmd_evaluate->add_option("--report", evaluate.report_path, "HTML report path")->required();
  cmd_evaluate->add_option("--text-report", evaluate.text_report_path, "Plain-text report path");
  cmd_evaluate->add_flag("--suggest", evaluate.suggest, "Ask the model to review the prompt");
  evaluate.model.add_to(cmd_evaluate);

  std::string export_in, export_out;
  auto* cmd_export = app.add_subcommand("export", "Write every transition as a CSV table");
  cmd_export->add_option("input", export_in, "Input TEI file")->required()->check(CLI::ExistingFile);
  cmd_export->add_option("output", export_out, "Output CSV file")->required();

  std::string import_in, import_csv, import_out;
  std::string import_resp{rdgai::tabular::kDefaultResponsibility};
  auto* cmd_import = app.add_subcommand("import", "Apply an edited CSV table to a TEI file");
  cmd_import->add_option("input", import_in, "Input TEI file")->required()->check(CLI::ExistingFile);
  cmd_import->add_option("edits", import_csv, "Edited CSV file")->required()->check(CLI::ExistingFile);
  cmd_import->add_option("output", import_out, "Output TEI file")->required();
  cmd_import->add_option("--resp", import_resp, "Responsibility recorded on imported relations")
      ->capture_default_str();

  ServeArgs serve;
  auto* cmd_serve = app.add_subcommand("serve", "Serve the annotation API and UI for one document");
  cmd_serve->add_option("input", serve.input, "TEI file to annotate")->required()->check(CLI::ExistingFile);
  cmd_serve->add_option("--host", serve.host, "Bind address")->capture_default_str();
  cmd_serve->add_option("--port", serve.port, "Port")->check(CLI::Range(1, 65535))->capture_default_str();
  cmd_serve->add_option("--resp", serve.resp, "Responsibility recorded on classifications")->capture_default_str();
  cmd_serve->add_option("--static", serve.static_dir, "Directory with the built UI")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*cmd_classify) return run_classify(classify);
    if (*cmd_evaluate) return run_evaluate(evaluate);
    if (*cmd_export) return run_export(export_in, export_out);
    if (*cmd_import) return run_import(import_in, import_csv, import_out, import_resp);
    if (*cmd_serve) return run_serve(serve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << rdgai::llm::redact(e.what(), rdgai::llm::load_config({}).api_key) << "\n";
    return kExitError;
  }
  return kExitUsage;
}
