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

#include "rdgai/prompting.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>

#include "rdgai/selection.hpp"
#include "rdgai/text.hpp"

namespace rdgai {
namespace {

using nlohmann::json;

constexpr std::string_view kTask =
    "You are assisting a textual critic who classifies scribal changes between variant\n"
    "readings in a critical apparatus. At each variation unit the manuscripts attest two\n"
    "or more readings. For an ordered pair of readings, the active reading is the text\n"
    "before the change and the passive reading is the text after it. Assign each\n"
    "transition exactly one of the categories defined below. Base your decision on the\n"
    "definitions and on the classified examples, which show how the editor applies them.\n"
    "An empty reading (an omission) is shown as (omitted).\n";

std::string output_contract(const ApparatusDocument& doc, std::string_view language) {
  std::string ids;
  for (std::size_t i = 0; i < doc.categories.size(); ++i) {
    if (i) ids += ", ";
    ids += doc.categories[i].id;
  }
  std::string out =
      "Output format\n"
      "=============\n"
      "Reply with a single JSON array and nothing else. Give one element for every\n"
      "numbered pair in the request:\n"
      "{\"pair\": <pair number>, \"category\": \"<category id>\", \"justification\": \"<reason>\"}\n"
      "The category must be one of: " + ids + ".\n"
      "The justification explains the decision in one or two sentences, written in ";
  out += language;
  out += ".\n";
  return out;
}

std::size_t find_json_array_end(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

std::optional<json> first_json_array(std::string_view text) {
  for (std::size_t open = text.find('['); open != std::string_view::npos;
       open = text.find('[', open + 1)) {
    std::size_t close = find_json_array_end(text, open);
    if (close == std::string_view::npos) continue;
    json parsed = json::parse(text.substr(open, close - open + 1), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_array()) return parsed;
  }
  return std::nullopt;
}

std::optional<std::size_t> pair_number(const json& value) {
  if (value.is_number_unsigned()) return value.get<std::size_t>();
  if (value.is_number_integer()) {
    auto v = value.get<long long>();
    if (v >= 0) return static_cast<std::size_t>(v);
    return std::nullopt;
  }
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s.empty() || s.size() > 9) return std::nullopt;
    std::size_t n = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      n = n * 10 + static_cast<std::size_t>(c - '0');
    }
    return n;
  }
  return std::nullopt;
}

}  // namespace

std::string render_stable_prefix(const ApparatusDocument& doc, const PromptOptions& options) {
  if (doc.categories.empty()) throw ValidationError("the document declares no categories");
  std::string out(kTask);
  out += "\nCategories\n==========\n";
  for (const auto& category : doc.categories) {
    out += "\n## " + category.id + "\n";
    out += "Definition: " + (category.description.empty() ? std::string("(no definition recorded)")
                                                           : category.description) + "\n";
    auto examples = select_examples(doc, category.id, options.examples_per_category,
                                    options.example_pool);
    if (examples.empty()) {
      out += "Examples: none recorded.\n";
      continue;
    }
    out += "Examples:\n";
    for (const auto& e : examples) {
      out += "- " + pair_signature(e) + " ⇒ " + category.id + " (" +
             (e.has_description() ? *e.description : std::string("no justification recorded")) +
             ")\n";
    }
  }
  out += "\n";
  out += output_contract(doc, options.language);
  return out;
}

std::string render_unit_query(const VariationUnit& unit, const std::vector<TransitionPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("no pairs to classify in unit '" + unit.id + "'");
  std::string out = "Variation unit: " + unit.id + "\n";
  out += "Context: " + (unit.context.empty() ? std::string("(none)") : unit.context) + "\n";
  out += "\nReadings:\n";
  for (const auto& r : unit.readings) {
    out += r.id + ": " + std::string(text::display(r.text));
    if (!r.witnesses.empty()) out += "  [" + text::join(r.witnesses, " ") + "]";
    out += "\n";
  }
  out += "\nPairs to classify:\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.unit_id != unit.id || !unit.find_reading(p.active_id) ||
        !unit.find_reading(p.passive_id)) {
      throw std::invalid_argument("pair " + p.active_id + " -> " + p.passive_id +
                                  " does not belong to unit '" + unit.id + "'");
    }
    out += "Pair " + std::to_string(i + 1) + ": reading " + p.active_id + " -> reading " +
           p.passive_id + "\n";
    out += "  active: " + std::string(text::display(p.active_text)) + "\n";
    out += "  passive: " + std::string(text::display(p.passive_text)) + "\n";
  }
  out += "\nAnswer with the JSON array described in the output format, with one element for each of the " +
         std::to_string(pairs.size()) + (pairs.size() == 1 ? " pair" : " pairs") + " above.\n";
  return out;
}

std::string corrective_instruction() {
  return "\nYour previous reply could not be read. Reply with only the JSON array, one element "
         "per pair, using the keys \"pair\", \"category\" and \"justification\".\n";
}

ParsedResponse parse_response(std::string_view text, const std::vector<TransitionPair>& expected,
                              const std::vector<Category>& categories) {
  std::optional<json> array = first_json_array(text);
  if (!array) throw ResponseFormatError("no JSON array found in the model response");

  std::map<std::string, std::string> by_lower_id;
  for (const auto& c : categories) by_lower_id.emplace(text::to_lower_ascii(c.id), c.id);

  ParsedResponse result;
  // Indexed by pair number - 1; later answers for the same pair win.
  std::vector<std::optional<PairDecision>> answers(expected.size());
  std::vector<std::optional<std::string>> failures(expected.size());
  for (const auto& element : *array) {
    if (!element.is_object() || !element.contains("pair")) {
      result.errors.push_back({std::nullopt, "array element without a pair number"});
      continue;
    }
    auto number = pair_number(element["pair"]);
    if (!number || *number == 0 || *number > expected.size()) {
      result.errors.push_back({number, "pair number out of range"});
      continue;
    }
    std::size_t idx = *number - 1;
    std::string category;
    if (element.contains("category") && element["category"].is_string()) {
      category = element["category"].get<std::string>();
    }
    auto match = by_lower_id.find(text::to_lower_ascii(text::collapse_whitespace(category)));
    if (match == by_lower_id.end()) {
      answers[idx].reset();
      failures[idx] = "unknown category '" + category + "'";
      continue;
    }
    std::string justification;
    if (element.contains("justification") && element["justification"].is_string()) {
      justification = element["justification"].get<std::string>();
    }
    failures[idx].reset();
    answers[idx] = PairDecision{expected[idx].active_id, expected[idx].passive_id, match->second,
                                std::move(justification)};
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (answers[i]) {
      result.decisions.push_back(std::move(*answers[i]));
    } else if (failures[i]) {
      result.errors.push_back({i + 1, *failures[i]});
    } else {
      result.errors.push_back({i + 1, "no answer for this pair"});
    }
  }
  return result;
}

std::string render_answer(const std::vector<PairDecision>& decisions,
                          const std::vector<TransitionPair>& expected) {
  json array = json::array();
  for (const auto& d : decisions) {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (expected[i].active_id == d.active_id && expected[i].passive_id == d.passive_id) {
        array.push_back({{"pair", i + 1}, {"category", d.category_id},
                         {"justification", d.justification}});
        break;
      }
    }
  }
  return array.dump();
}

}  // namespace rdgai
