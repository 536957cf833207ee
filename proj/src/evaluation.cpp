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

#include "rdgai/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "rdgai/text.hpp"

namespace rdgai::eval {
namespace {

std::string key_of(const TransitionPair& pair) {
  return pair.unit_id + '\x1f' + pair.active_id + '\x1f' + pair.passive_id;
}

// Uniform draw in [0, n) without modulo bias; identical on every platform.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x < threshold);
  return x % n;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed4(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", v);
  return buffer;
}

std::string pad(std::string s, std::size_t width) {
  // Width in code points so Arabic labels do not skew the columns.
  std::size_t len = text::decode_utf8(s).size();
  if (len < width) s.append(width - len, ' ');
  return s;
}

const char* kStyle = R"(body{font-family:system-ui,-apple-system,"Segoe UI",sans-serif;margin:2em;color:#222;max-width:80em}
h1{font-size:1.6em}h2{margin-top:1.6em;border-bottom:1px solid #ccc}
.metrics{display:flex;gap:1.5em;flex-wrap:wrap}
.metric{border:1px solid #ccc;border-radius:6px;padding:.6em 1.2em;text-align:center}
.metric .value{font-size:1.5em;font-weight:bold}
table{border-collapse:collapse;margin:.5em 0}
th,td{border:1px solid #bbb;padding:.3em .6em;vertical-align:top}
th{background:#f0f0f0}
td.num{text-align:right}
td.diag{background:#d8f0d8}
td.off{background:#f8dcdc}
.reading{unicode-bidi:plaintext}
.ok{color:#176317}.bad{color:#9b1c1c}
pre{white-space:pre-wrap;background:#f7f7f7;padding:1em;border:1px solid #ddd}
)";

void html_listing_table(std::string& out, const std::vector<const Listing*>& rows) {
  out += "<table>\n<tr><th>Unit</th><th>Active</th><th>Passive</th><th>Ground truth</th>"
         "<th>Prediction</th><th>Justification</th></tr>\n";
  for (const Listing* l : rows) {
    out += "<tr><td>" + html_escape(l->pair.unit_id) + "</td><td class=\"reading\" dir=\"auto\">" +
           html_escape(text::display(l->pair.active_text)) +
           "</td><td class=\"reading\" dir=\"auto\">" + html_escape(text::display(l->pair.passive_text)) +
           "</td><td>" + html_escape(l->ground_truth) + "</td><td class=\"" +
           (l->correct ? "ok" : "bad") + "\">" +
           html_escape(l->predicted ? *l->predicted : std::string("(unclassified)")) +
           "</td><td dir=\"auto\">" + html_escape(l->justification) + "</td></tr>\n";
  }
  out += "</table>\n";
}

std::string render_html(const EvaluationReport& r) {
  std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  out += "<title>Classification report";
  if (!r.document_name.empty()) out += ": " + html_escape(r.document_name);
  out += "</title>\n<style>\n";
  out += kStyle;
  out += "</style>\n</head>\n<body>\n<h1>Classification report</h1>\n<p>";
  if (!r.document_name.empty()) out += "Document: <b>" + html_escape(r.document_name) + "</b><br>\n";
  if (!r.model_name.empty()) out += "Model: <b>" + html_escape(r.model_name) + "</b><br>\n";
  out += "Examples per category: " + std::to_string(r.examples_per_category) +
         "<br>\nPrompt share of annotations: " + format_percent(r.proportion) + " (seed " +
         std::to_string(r.seed) + ")<br>\nEvaluated pairs: " + std::to_string(r.matrix.total()) +
         "</p>\n";

  out += "<div class=\"metrics\">\n";
  const std::pair<const char*, double> cards[] = {{"Accuracy", r.metrics.accuracy},
                                                  {"Macro precision", r.metrics.macro_precision},
                                                  {"Macro recall", r.metrics.macro_recall},
                                                  {"Macro F1", r.metrics.macro_f1}};
  for (const auto& [label, value] : cards) {
    out += "<div class=\"metric\"><div class=\"value\">" + format_percent(value) +
           "</div><div>" + label + "</div></div>\n";
  }
  out += "</div>\n";

  out += "<h2>Confusion matrix</h2>\n<p>Rows are ground truth, columns are predictions.</p>\n";
  out += "<table>\n<tr><th></th>";
  for (const auto& c : r.matrix.categories) out += "<th>" + html_escape(c) + "</th>";
  out += "<th>Unclassified</th></tr>\n";
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    out += "<tr><th>" + html_escape(r.matrix.categories[i]) + "</th>";
    for (std::size_t j = 0; j <= r.matrix.size(); ++j) {
      std::size_t v = r.matrix.counts[i][j];
      std::string cls = "num";
      if (i == j) cls += " diag";
      else if (v > 0) cls += " off";
      out += "<td class=\"" + cls + "\">" + std::to_string(v) + "</td>";
    }
    out += "</tr>\n";
  }
  out += "</table>\n";

  std::vector<const Listing*> wrong, right;
  for (const auto& l : r.listings) (l.correct ? right : wrong).push_back(&l);
  out += "<h2>Incorrect classifications (" + std::to_string(wrong.size()) + ")</h2>\n";
  if (wrong.empty()) {
    out += "<p>No errors.</p>\n";
  } else {
    html_listing_table(out, wrong);
  }
  out += "<h2>Correct classifications (" + std::to_string(right.size()) + ")</h2>\n";
  if (right.empty()) {
    out += "<p>None.</p>\n";
  } else {
    html_listing_table(out, right);
  }

  if (r.suggestions) {
    out += "<h2>Suggestions</h2>\n<pre>" + html_escape(*r.suggestions) + "</pre>\n";
  }
  out += "<h2>Base prompt</h2>\n<details>\n<summary>Show the prompt shared by every query</summary>\n<pre>" +
         html_escape(r.base_prompt) + "</pre>\n</details>\n";
  out += "</body>\n</html>\n";
  return out;
}

void text_listing(std::string& out, const std::vector<const Listing*>& rows) {
  for (const Listing* l : rows) {
    out += "- [" + l->pair.unit_id + "] " + std::string(text::display(l->pair.active_text)) +
           " -> " + std::string(text::display(l->pair.passive_text)) + "\n";
    out += "  ground truth: " + l->ground_truth +
           "; predicted: " + (l->predicted ? *l->predicted : std::string("(unclassified)")) + "\n";
    if (!l->justification.empty()) out += "  justification: " + l->justification + "\n";
  }
}

std::string render_text(const EvaluationReport& r) {
  std::string out = "CLASSIFICATION REPORT\n";
  if (!r.document_name.empty()) out += "Document: " + r.document_name + "\n";
  if (!r.model_name.empty()) out += "Model: " + r.model_name + "\n";
  out += "Examples per category: " + std::to_string(r.examples_per_category) + "\n";
  out += "Prompt share of annotations: " + format_percent(r.proportion) + " (seed " +
         std::to_string(r.seed) + ")\n";
  out += "Evaluated pairs: " + std::to_string(r.matrix.total()) + "\n\n";
  out += "Accuracy:        " + format_percent(r.metrics.accuracy) + " (" + fixed4(r.metrics.accuracy) + ")\n";
  out += "Macro precision: " + format_percent(r.metrics.macro_precision) + " (" +
         fixed4(r.metrics.macro_precision) + ")\n";
  out += "Macro recall:    " + format_percent(r.metrics.macro_recall) + " (" +
         fixed4(r.metrics.macro_recall) + ")\n";
  out += "Macro F1:        " + format_percent(r.metrics.macro_f1) + " (" + fixed4(r.metrics.macro_f1) + ")\n";

  out += "\nCONFUSION MATRIX (rows: ground truth, columns: prediction)\n";
  std::size_t width = std::string("Unclassified").size();
  for (const auto& c : r.matrix.categories) width = std::max(width, text::decode_utf8(c).size());
  out += pad("", width);
  for (const auto& c : r.matrix.categories) out += " | " + pad(c, width);
  out += " | " + pad("Unclassified", width) + "\n";
  for (std::size_t i = 0; i < r.matrix.size(); ++i) {
    out += pad(r.matrix.categories[i], width);
    for (std::size_t j = 0; j <= r.matrix.size(); ++j) {
      out += " | " + pad(std::to_string(r.matrix.counts[i][j]), width);
    }
    out += "\n";
  }

  std::vector<const Listing*> wrong, right;
  for (const auto& l : r.listings) (l.correct ? right : wrong).push_back(&l);
  out += "\nINCORRECT CLASSIFICATIONS (" + std::to_string(wrong.size()) + ")\n";
  if (wrong.empty()) out += "No errors.\n";
  text_listing(out, wrong);
  out += "\nCORRECT CLASSIFICATIONS (" + std::to_string(right.size()) + ")\n";
  if (right.empty()) out += "None.\n";
  text_listing(out, right);
  if (r.suggestions) out += "\nSUGGESTIONS\n" + *r.suggestions + "\n";
  out += "\nBASE PROMPT\n" + r.base_prompt;
  if (!r.base_prompt.empty() && r.base_prompt.back() != '\n') out += "\n";
  return out;
}

constexpr std::string_view kReviewInstruction =
    "You are reviewing a prompt used to classify scribal changes between variant readings.\n"
    "The report below gives the accuracy of the classifications, the confusion matrix, every\n"
    "correct and incorrect answer with its justification, and the base prompt containing the\n"
    "category definitions and examples.\n\n"
    "1. Suggest concrete rewrites of category definitions that would prevent the errors.\n"
    "2. Point out examples in the prompt that are missing, misleading or unrepresentative.\n"
    "3. List ground-truth annotations that look inconsistent with the definitions or with\n"
    "   each other, so the editor can check them.\n"
    "Be specific and refer to the units and readings involved.\n";

}  // namespace

std::vector<Annotation> manual_annotations(const ApparatusDocument& doc) {
  std::vector<Annotation> out;
  for (const auto& unit : doc.units) {
    for (auto& pair : enumerate_pairs(unit)) {
      const Classification* c = unit.find_relation(pair.active_id, pair.passive_id);
      if (!c || !c->is_manual() || c->category_ids.empty()) continue;
      out.push_back({std::move(pair), c->category_ids.front()});
    }
  }
  return out;
}

std::size_t pool_size(std::size_t m, double proportion) {
  if (m == 0) return 0;
  if (m == 1) return 1;
  auto share = static_cast<std::size_t>(std::llround(proportion * static_cast<double>(m)));
  return std::clamp<std::size_t>(share, 1, m);
}

EvalSplit split_annotations(const ApparatusDocument& doc, double proportion, std::uint64_t seed) {
  if (!(proportion > 0.0 && proportion < 1.0)) {
    throw std::invalid_argument("proportion must lie strictly between 0 and 1");
  }
  std::vector<Annotation> all = manual_annotations(doc);
  if (all.size() < 2) throw std::invalid_argument("at least two manual classifications are needed");

  EvalSplit split;
  split.proportion = proportion;
  split.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<bool> in_pool(all.size(), false);

  std::vector<std::string> order;
  for (const auto& c : doc.categories) order.push_back(c.id);
  for (const auto& category : order) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].category_id == category) members.push_back(i);
    }
    if (members.empty()) continue;
    for (std::size_t i = members.size() - 1; i > 0; --i) {
      std::swap(members[i], members[bounded(rng, i + 1)]);
    }
    std::size_t take = pool_size(members.size(), proportion);
    if (members.size() == 1) {
      split.warnings.push_back("category '" + category +
                               "' has a single annotation; it is used as an example only");
    }
    for (std::size_t i = 0; i < take; ++i) in_pool[members[i]] = true;
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    (in_pool[i] ? split.prompt_pool : split.ground_truth).push_back(std::move(all[i]));
  }
  return split;
}

std::size_t ConfusionMatrix::row_total(std::size_t row) const {
  std::size_t sum = 0;
  for (std::size_t v : counts[row]) sum += v;
  return sum;
}

std::size_t ConfusionMatrix::column_total(std::size_t column) const {
  std::size_t sum = 0;
  for (const auto& row : counts) sum += row[column];
  return sum;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += row_total(i);
  return sum;
}

ConfusionMatrix score(const std::vector<Annotation>& ground_truth,
                      const std::vector<Prediction>& predictions,
                      const std::vector<std::string>& categories, std::vector<std::string>* warnings) {
  ConfusionMatrix m;
  m.categories = categories;
  const std::size_t n = categories.size();
  m.counts.assign(n, std::vector<std::size_t>(n + 1, 0));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(categories[i], i);

  std::map<std::string, const Prediction*> predicted;
  std::set<std::string> truth_keys;
  for (const auto& a : ground_truth) truth_keys.insert(key_of(a.pair));
  for (const auto& p : predictions) {
    std::string key = key_of(p.pair);
    if (!truth_keys.count(key)) {
      if (warnings) {
        warnings->push_back("ignoring prediction for " + p.pair.unit_id + " " + p.pair.active_id +
                            " -> " + p.pair.passive_id + ", which is not in the ground truth");
      }
      continue;
    }
    predicted[key] = &p;
  }
  for (const auto& a : ground_truth) {
    auto row = index.find(a.category_id);
    if (row == index.end()) throw std::invalid_argument("ground truth uses unknown category '" + a.category_id + "'");
    auto p = predicted.find(key_of(a.pair));
    std::size_t column = n;
    if (p != predicted.end()) {
      auto col = index.find(p->second->category_id);
      if (col != index.end()) column = col->second;
    }
    ++m.counts[row->second][column];
  }
  return m;
}

Metrics metrics(const ConfusionMatrix& matrix) {
  const std::size_t total = matrix.total();
  if (matrix.size() == 0 || total == 0) throw std::invalid_argument("empty confusion matrix");
  Metrics result;
  result.accuracy = static_cast<double>(matrix.trace()) / static_cast<double>(total);
  double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < matrix.size(); ++c) {
    std::size_t support = matrix.row_total(c);
    if (support == 0) continue;
    double tp = static_cast<double>(matrix.counts[c][c]);
    double predicted = static_cast<double>(matrix.column_total(c));
    double precision = predicted > 0 ? tp / predicted : 0.0;
    double recall = tp / static_cast<double>(support);
    double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    sum_p += precision;
    sum_r += recall;
    sum_f += f1;
    ++classes;
  }
  result.macro_precision = sum_p / static_cast<double>(classes);
  result.macro_recall = sum_r / static_cast<double>(classes);
  result.macro_f1 = sum_f / static_cast<double>(classes);
  return result;
}

std::string format_percent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.1f%%", fraction * 100.0);
  return buffer;
}

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  return format == ReportFormat::kHtml ? render_html(report) : render_text(report);
}

std::string review_prompt(const std::string& text_report, llm::ChatClient& client) {
  return client.complete(std::string(kReviewInstruction), text_report).text;
}

EvaluationOutcome evaluate(const ApparatusDocument& doc, llm::ChatClient& client,
                           const EvaluationOptions& options) {
  EvaluationOutcome outcome;
  outcome.split = split_annotations(doc, options.proportion, options.seed);
  const EvalSplit& split = outcome.split;
  outcome.warnings = split.warnings;

  std::set<std::string> pool_keys, truth_keys;
  for (const auto& a : split.prompt_pool) pool_keys.insert(key_of(a.pair));
  for (const auto& a : split.ground_truth) truth_keys.insert(key_of(a.pair));

  // Withhold the ground truth from the document the model sees.
  ApparatusDocument working = doc;
  for (const auto& a : split.ground_truth) {
    remove_relation(working, a.pair.unit_id, a.pair.active_id, a.pair.passive_id);
  }

  RunConfig run = options.run;
  run.dry_run = false;
  run.prompt_pool = [&pool_keys](const TransitionPair& p) { return pool_keys.count(key_of(p)) > 0; };
  run.target_filter = [&truth_keys](const TransitionPair& p) { return truth_keys.count(key_of(p)) > 0; };
  run.unit_filter.reset();
  RunResult result = classify_document(working, client, run);
  outcome.stats = result.stats;
  for (const auto& w : result.stats.warnings) outcome.warnings.push_back(w);

  std::vector<Prediction> predictions;
  std::map<std::string, std::size_t> prediction_index;
  for (const auto& d : result.decisions) {
    TransitionPair pair = make_pair(doc, d.unit_id, d.decision.active_id, d.decision.passive_id);
    prediction_index[key_of(pair)] = predictions.size();
    predictions.push_back({std::move(pair), d.decision.category_id, d.decision.justification});
  }

  std::vector<std::string> categories;
  for (const auto& c : doc.categories) categories.push_back(c.id);
  EvaluationReport& report = outcome.report;
  report.matrix = score(split.ground_truth, predictions, categories, &outcome.warnings);
  report.metrics = metrics(report.matrix);
  report.base_prompt = result.stable_prefix;
  report.document_name = options.document_name;
  report.model_name = options.model_name;
  report.examples_per_category = run.examples_per_category;
  report.proportion = options.proportion;
  report.seed = options.seed;
  for (const auto& a : split.ground_truth) {
    Listing l;
    l.pair = a.pair;
    l.ground_truth = a.category_id;
    if (auto it = prediction_index.find(key_of(a.pair)); it != prediction_index.end()) {
      l.predicted = predictions[it->second].category_id;
      l.justification = predictions[it->second].justification;
    }
    l.correct = l.predicted && *l.predicted == a.category_id;
    report.listings.push_back(std::move(l));
  }

  if (options.suggest) {
    try {
      report.suggestions = review_prompt(render_report(report, ReportFormat::kText), client);
    } catch (const std::exception& e) {
      outcome.warnings.push_back(std::string("prompt review failed: ") + e.what());
    }
  }
  return outcome;
}

}  // namespace rdgai::eval
