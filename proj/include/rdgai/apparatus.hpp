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

#ifndef RDGAI_APPARATUS_HPP_
#define RDGAI_APPARATUS_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdgai {

// Responsibility recorded on machine-made classifications. Anything else is
// treated as a human annotator.
inline constexpr std::string_view kMachineAgent = "rdgai";

// Placeholder standing in for a variation unit inside its context string.
inline constexpr std::string_view kUnitMarker = "[...]";

// A transition category declared in <interpGrp type="transcriptional">.
// Without an inverse the category is symmetric.
struct Category {
  std::string id;
  std::string name;
  std::string description;
  std::optional<std::string> inverse_id;

  bool symmetric() const { return !inverse_id.has_value(); }
  bool operator==(const Category&) const = default;
};

struct Reading {
  std::string id;
  std::string text;  // whitespace-collapsed; empty for an omission
  std::vector<std::string> witnesses;

  bool operator==(const Reading&) const = default;
};

// One ordered (active -> passive) transition and its assigned categories.
struct Classification {
  std::string active_id;
  std::string passive_id;
  std::vector<std::string> category_ids;
  std::optional<std::string> description;
  std::string responsibility;

  bool is_machine() const { return responsibility == kMachineAgent; }
  bool is_manual() const { return !is_machine(); }
  bool operator==(const Classification&) const = default;
};

struct VariationUnit {
  std::string id;
  std::string context;
  std::vector<Reading> readings;
  std::vector<Classification> relations;

  const Reading* find_reading(std::string_view reading_id) const;
  const Classification* find_relation(std::string_view active, std::string_view passive) const;
  bool operator==(const VariationUnit&) const = default;
};

// Retained source XML; opaque outside the parser and serializer.
class SourceShell;

struct ApparatusDocument {
  std::vector<Category> categories;
  std::vector<VariationUnit> units;
  // Null for documents built in code; serialization then emits a fresh
  // TEI skeleton.
  std::shared_ptr<const SourceShell> shell;

  const Category* find_category(std::string_view id) const;
  const VariationUnit* find_unit(std::string_view id) const;
  VariationUnit* find_unit(std::string_view id);
};

// Equality over categories and units, ignoring the retained source.
bool semantically_equal(const ApparatusDocument& a, const ApparatusDocument& b);

// Throws ParseError for malformed XML and ValidationError for broken
// references or duplicate ids.
ApparatusDocument parse_document(std::string_view xml_text);

// Throws ValidationError when the document breaks an invariant or its units
// no longer line up with the retained source.
std::string serialize_document(const ApparatusDocument& doc);

// Checks every model invariant; throws ValidationError naming the offender.
void validate(const ApparatusDocument& doc);

// Appends the relation, replacing any existing one for the same ordered pair.
ApparatusDocument add_relation(ApparatusDocument doc, std::string_view unit_id,
                               Classification classification);
void add_relation_in_place(ApparatusDocument& doc, std::string_view unit_id,
                           Classification classification);

// Removes the relation for one ordered pair. Returns the number removed.
std::size_t remove_relation(ApparatusDocument& doc, std::string_view unit_id,
                            std::string_view active, std::string_view passive);

ApparatusDocument load_document(const std::filesystem::path& path);

// Writes to a sibling temporary file, flushes, then renames over `path`.
void save_document(const ApparatusDocument& doc, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace rdgai

#endif  // RDGAI_APPARATUS_HPP_
