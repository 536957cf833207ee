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

#include "rdgai/tabular.hpp"

#include "rdgai/errors.hpp"
#include "rdgai/text.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai::tabular {
namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

std::vector<std::string> split_categories(std::string_view cell) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= cell.size()) {
    std::size_t end = cell.find(';', start);
    if (end == std::string_view::npos) end = cell.size();
    std::string id = text::collapse_whitespace(cell.substr(start, end - start));
    if (!id.empty()) out.push_back(text::strip_hash(id));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string encode_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (!needs_quotes(f)) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  out += "\r\n";
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  if (text.starts_with(kBom)) text.remove_prefix(kBom.size());
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw ValidationError("unterminated quoted field in CSV");
  if (field_started || !row.empty()) end_row();
  // Blank lines carry no data.
  std::erase_if(rows, [](const auto& r) { return r.size() == 1 && r[0].empty(); });
  return rows;
}

std::string export_table(const ApparatusDocument& doc) {
  std::string out(kBom);
  out += encode_row(std::vector<std::string>(kColumns.begin(), kColumns.end()));
  for (const auto& unit : doc.units) {
    for (const auto& pair : enumerate_pairs(unit)) {
      const Classification* c = unit.find_relation(pair.active_id, pair.passive_id);
      std::string description = c && c->description ? *c->description : std::string();
      std::string relations = c ? text::join(c->category_ids, ";") : std::string();
      out += encode_row({unit.id, unit.context, pair.active_id, pair.passive_id, pair.active_text,
                         pair.passive_text, description, relations});
    }
  }
  return out;
}

ImportResult import_table(ApparatusDocument doc, std::string_view csv_text,
                          const std::string& responsibility) {
  auto rows = parse_csv(csv_text);
  if (rows.empty()) throw ValidationError("empty table: expected a header row");
  const auto& header = rows.front();
  bool header_ok = header.size() == kColumns.size();
  for (std::size_t i = 0; header_ok && i < kColumns.size(); ++i) header_ok = header[i] == kColumns[i];
  if (!header_ok) {
    std::string expected;
    for (std::size_t i = 0; i < kColumns.size(); ++i) expected += (i ? "," : "") + std::string(kColumns[i]);
    throw ValidationError("table header does not match; expected: " + expected);
  }

  ImportResult result;
  ImportSummary& summary = result.summary;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t row_number = r + 1;
    if (row.size() != kColumns.size()) {
      summary.errors.push_back({row_number, "expected " + std::to_string(kColumns.size()) +
                                                " columns, found " + std::to_string(row.size())});
      continue;
    }
    const std::string& unit_id = row[0];
    const std::string& active = row[2];
    const std::string& passive = row[3];
    std::string description = text::collapse_whitespace(row[6]);
    std::vector<std::string> categories = split_categories(row[7]);
    if (categories.empty()) {
      ++summary.skipped;
      continue;
    }
    try {
      TransitionPair pair = make_pair(doc, unit_id, active, passive);
      for (const auto& id : categories) {
        if (!doc.find_category(id)) throw ValidationError("unknown category '" + id + "'");
      }
      VariationUnit* unit = doc.find_unit(unit_id);
      const Classification* existing = unit->find_relation(active, passive);
      if (existing && existing->category_ids == categories) {
        if (description.empty() || existing->description == description) {
          ++summary.unchanged;
          continue;
        }
        Classification updated = *existing;
        updated.description = description;
        updated.responsibility = responsibility;
        add_relation_in_place(doc, unit_id, std::move(updated));
        ++summary.changed;
        continue;
      }
      (existing ? summary.changed : summary.added)++;
      std::optional<std::string> desc;
      if (!description.empty()) desc = description;
      classify_pair_in_place(doc, pair, categories, std::move(desc), responsibility);
    } catch (const ValidationError& e) {
      summary.errors.push_back({row_number, e.what()});
    }
  }
  result.document = std::move(doc);
  return result;
}

}  // namespace rdgai::tabular
