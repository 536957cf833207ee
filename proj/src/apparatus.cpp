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

#include "rdgai/apparatus.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rdgai/errors.hpp"
#include "rdgai/text.hpp"
#include "rdgai/xml.hpp"

namespace rdgai {

// The parsed XML tree plus pointers to the nodes the model owns. Everything
// else in the tree is written back verbatim.
class SourceShell {
 public:
  struct AppAnchor {
    const xml::Node* app = nullptr;
    std::vector<const xml::Node*> relation_lists;
  };

  xml::Node document;
  std::vector<const xml::Node*> category_groups;
  const xml::Node* category_host = nullptr;
  std::vector<AppAnchor> apps;
  std::vector<Category> parsed_categories;
  std::vector<VariationUnit> parsed_units;
};

namespace {

constexpr std::size_t kContextWords = 20;
constexpr std::string_view kIndentStep = "  ";

std::string default_category_name(std::string_view id) {
  std::string name(id);
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

bool is_skipped_in_text(std::string_view local) {
  return local == "note" || local == "witDetail" || local == "listRelation" ||
         local == "interpGrp" || local == "wit";
}

void append_reading_text(const xml::Node& node, std::string& out) {
  for (const auto& child : node.children) {
    if (child.kind == xml::NodeKind::kText || child.kind == xml::NodeKind::kCData) {
      out += child.text;
    } else if (child.is_element()) {
      if (is_skipped_in_text(child.local_name())) continue;
      out.push_back(' ');
      append_reading_text(child, out);
      out.push_back(' ');
    }
  }
}

std::string reading_text(const xml::Node& node) {
  std::string raw;
  append_reading_text(node, raw);
  return text::collapse_whitespace(raw);
}

// Text of the lemma, or of the first reading, standing in for another unit
// inside a context string.
std::string base_text(const xml::Node& app) {
  for (const auto& child : app.children) {
    if (child.is_element() && child.local_name() == "lem") return reading_text(child);
  }
  for (const auto& child : app.children) {
    if (child.is_element() && child.local_name() == "rdg") return reading_text(child);
  }
  return {};
}

void gather_context(const xml::Node& node, const xml::Node* target, bool& passed,
                    std::string& before, std::string& after) {
  for (const auto& child : node.children) {
    std::string& sink = passed ? after : before;
    if (child.kind == xml::NodeKind::kText || child.kind == xml::NodeKind::kCData) {
      sink += child.text;
      continue;
    }
    if (!child.is_element()) continue;
    if (&child == target) {
      passed = true;
      continue;
    }
    std::string_view local = child.local_name();
    if (local == "app") {
      sink += ' ';
      sink += base_text(child);
      sink += ' ';
    } else if (!is_skipped_in_text(local)) {
      sink += ' ';
      gather_context(child, target, passed, before, after);
      (passed ? after : before) += ' ';
    }
  }
}

std::string unit_context(const xml::Node* parent, const xml::Node& app) {
  if (!parent) return {};
  std::string before, after;
  bool passed = false;
  gather_context(*parent, &app, passed, before, after);
  auto before_words = text::split_whitespace(before);
  auto after_words = text::split_whitespace(after);
  if (before_words.empty() && after_words.empty()) return {};
  if (before_words.size() > kContextWords) {
    before_words.erase(before_words.begin(), before_words.end() - kContextWords);
  }
  if (after_words.size() > kContextWords) after_words.resize(kContextWords);
  std::string context = text::join(before_words, " ");
  if (!context.empty()) context += ' ';
  context += kUnitMarker;
  if (!after_words.empty()) {
    context += ' ';
    context += text::join(after_words, " ");
  }
  return context;
}

Category parse_interp(const xml::Node& interp) {
  Category category;
  category.id = interp.attribute_or("xml:id", "");
  if (category.id.empty()) category.id = interp.attribute_or("n", "");
  const std::string* n = interp.attribute("n");
  category.name = (n && interp.attribute("xml:id")) ? *n : default_category_name(category.id);
  category.description = text::collapse_whitespace(interp.text_content());
  if (const std::string* corresp = interp.attribute("corresp")) {
    auto tokens = text::split_whitespace(*corresp);
    if (!tokens.empty()) category.inverse_id = text::strip_hash(tokens.front());
  }
  return category;
}

void collect_readings(const xml::Node& node, std::vector<Reading>& readings) {
  for (const auto& child : node.children) {
    if (!child.is_element()) continue;
    std::string_view local = child.local_name();
    if (local == "rdgGrp") {
      collect_readings(child, readings);
      continue;
    }
    if (local != "rdg") continue;
    Reading reading;
    reading.id = child.attribute_or("n", "");
    if (reading.id.empty()) reading.id = child.attribute_or("xml:id", "");
    if (reading.id.empty()) reading.id = std::to_string(readings.size() + 1);
    reading.text = reading_text(child);
    for (const auto& token : text::split_whitespace(child.attribute_or("wit", ""))) {
      reading.witnesses.push_back(text::strip_hash(token));
    }
    readings.push_back(std::move(reading));
  }
}

Classification parse_relation(const xml::Node& relation) {
  Classification c;
  c.active_id = text::strip_hash(text::collapse_whitespace(relation.attribute_or("active", "")));
  c.passive_id = text::strip_hash(text::collapse_whitespace(relation.attribute_or("passive", "")));
  for (const auto& token : text::split_whitespace(relation.attribute_or("ana", ""))) {
    c.category_ids.push_back(text::strip_hash(token));
  }
  c.responsibility = text::strip_hash(text::collapse_whitespace(relation.attribute_or("resp", "")));
  for (const auto& child : relation.children) {
    if (child.is_element() && child.local_name() == "desc") {
      c.description = text::collapse_whitespace(child.text_content());
      break;
    }
  }
  return c;
}

void upsert_relation(std::vector<Classification>& relations, Classification c) {
  for (auto& existing : relations) {
    if (existing.active_id == c.active_id && existing.passive_id == c.passive_id) {
      existing = std::move(c);
      return;
    }
  }
  relations.push_back(std::move(c));
}

struct ParseWalker {
  SourceShell& shell;
  ApparatusDocument& doc;

  void walk(const xml::Node& node, const xml::Node* parent) {
    if (!node.is_element()) return;
    std::string_view local = node.local_name();
    if (local == "interpGrp" && node.attribute_or("type", "") == "transcriptional") {
      shell.category_groups.push_back(&node);
      for (const auto& child : node.children) {
        if (child.is_element() && child.local_name() == "interp") {
          doc.categories.push_back(parse_interp(child));
        }
      }
      return;
    }
    if (local == "teiHeader" && !shell.category_host) shell.category_host = &node;
    if (local == "app") add_unit(node, parent);
    for (const auto& child : node.children) {
      if (child.is_element() && child.local_name() == "listRelation" && local == "app") continue;
      walk(child, &node);
    }
  }

  void add_unit(const xml::Node& app, const xml::Node* parent) {
    VariationUnit unit;
    unit.id = app.attribute_or("xml:id", "");
    if (unit.id.empty()) unit.id = "unit-" + std::to_string(doc.units.size() + 1);
    unit.context = unit_context(parent, app);
    collect_readings(app, unit.readings);
    SourceShell::AppAnchor anchor;
    anchor.app = &app;
    for (const auto& child : app.children) {
      if (!child.is_element() || child.local_name() != "listRelation") continue;
      anchor.relation_lists.push_back(&child);
      for (const auto& relation : child.children) {
        if (relation.is_element() && relation.local_name() == "relation") {
          upsert_relation(unit.relations, parse_relation(relation));
        }
      }
    }
    shell.apps.push_back(std::move(anchor));
    doc.units.push_back(std::move(unit));
  }
};

// --- serialization -------------------------------------------------------

std::string relation_element(const Classification& c) {
  std::string out = "<relation active=\"" + xml::escape_attribute(c.active_id) +
                    "\" passive=\"" + xml::escape_attribute(c.passive_id) + "\" ana=\"";
  for (std::size_t i = 0; i < c.category_ids.size(); ++i) {
    if (i) out += ' ';
    out += '#' + xml::escape_attribute(c.category_ids[i]);
  }
  out += '"';
  if (!c.responsibility.empty()) out += " resp=\"#" + xml::escape_attribute(c.responsibility) + '"';
  if (c.description) {
    out += "><desc>" + xml::escape_text(*c.description) + "</desc></relation>";
  } else {
    out += "/>";
  }
  return out;
}

std::string relation_list(const std::vector<Classification>& relations, std::string_view indent) {
  std::string out = "<listRelation type=\"transcriptional\">";
  for (const auto& c : relations) {
    out += '\n';
    out += indent;
    out += kIndentStep;
    out += relation_element(c);
  }
  out += '\n';
  out += indent;
  out += "</listRelation>";
  return out;
}

std::string interp_group(const std::vector<Category>& categories, std::string_view indent) {
  std::string out = "<interpGrp type=\"transcriptional\">";
  for (const auto& c : categories) {
    out += '\n';
    out += indent;
    out += kIndentStep;
    out += "<interp xml:id=\"" + xml::escape_attribute(c.id) + '"';
    if (c.name != default_category_name(c.id)) out += " n=\"" + xml::escape_attribute(c.name) + '"';
    if (c.inverse_id) out += " corresp=\"#" + xml::escape_attribute(*c.inverse_id) + '"';
    out += '>' + xml::escape_text(c.description) + "</interp>";
  }
  if (!categories.empty()) {
    out += '\n';
    out += indent;
  }
  out += "</interpGrp>";
  return out;
}

bool is_blank_text(const xml::Node& node) {
  if (node.kind != xml::NodeKind::kText) return false;
  return std::all_of(node.raw.begin(), node.raw.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

// Indentation of child `index`, taken from the whitespace preceding it.
std::string indent_of(const xml::Node& parent, std::size_t index) {
  if (index == 0) return {};
  const xml::Node& prev = parent.children[index - 1];
  if (prev.kind != xml::NodeKind::kText) return {};
  auto nl = prev.raw.rfind('\n');
  if (nl == std::string::npos) return {};
  std::string tail = prev.raw.substr(nl + 1);
  bool blank = std::all_of(tail.begin(), tail.end(), [](char c) { return c == ' ' || c == '\t'; });
  return blank ? tail : std::string();
}

std::string child_indent(const xml::Node& node, std::string_view own_indent) {
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    if (node.children[i].is_element()) {
      std::string ind = indent_of(node, i);
      if (!ind.empty()) return ind;
      break;
    }
  }
  return std::string(own_indent) + std::string(kIndentStep);
}

// Drops whitespace written just before a node that is being omitted.
void trim_trailing_indent(std::string& out) {
  std::size_t end = out.size();
  while (end > 0 && (out[end - 1] == ' ' || out[end - 1] == '\t')) --end;
  if (end > 0 && out[end - 1] == '\n') {
    --end;
    if (end > 0 && out[end - 1] == '\r') --end;
    out.resize(end);
  }
}

class Emitter {
 public:
  Emitter(const ApparatusDocument& doc, const SourceShell& shell) : doc_(doc), shell_(shell) {
    categories_changed_ = doc.categories != shell.parsed_categories;
    for (std::size_t i = 0; i < shell.category_groups.size(); ++i) {
      group_index_[shell.category_groups[i]] = i;
    }
    relations_changed_.resize(shell.apps.size());
    for (std::size_t a = 0; a < shell.apps.size(); ++a) {
      app_index_[shell.apps[a].app] = a;
      for (std::size_t l = 0; l < shell.apps[a].relation_lists.size(); ++l) {
        list_owner_[shell.apps[a].relation_lists[l]] = {a, l};
      }
      relations_changed_[a] = doc.units[a].relations != shell.parsed_units[a].relations;
    }
  }

  std::string run() {
    for (std::size_t i = 0; i < shell_.document.children.size(); ++i) {
      const auto& child = shell_.document.children[i];
      if (child.is_element()) {
        element(child, indent_of(shell_.document, i));
      } else {
        xml::write_raw(child, out_);
      }
    }
    return std::move(out_);
  }

 private:
  void element(const xml::Node& node, const std::string& indent) {
    if (auto it = app_index_.find(&node); it != app_index_.end()) {
      std::size_t a = it->second;
      const auto& relations = doc_.units[a].relations;
      bool insert = relations_changed_[a] && shell_.apps[a].relation_lists.empty() &&
                    !relations.empty();
      open_children_close(node, indent, insert ? relation_list(relations, child_indent(node, indent))
                                               : std::string(),
                          child_indent(node, indent));
      return;
    }
    bool host_insert = &node == shell_.category_host && shell_.category_groups.empty() &&
                       !doc_.categories.empty();
    if (host_insert) {
      std::string ci = child_indent(node, indent);
      open_children_close(node, indent, interp_group(doc_.categories, ci), ci);
      return;
    }
    open_children_close(node, indent, {}, {});
  }

  void open_children_close(const xml::Node& node, const std::string& indent,
                           const std::string& appended, const std::string& appended_indent) {
    out_ += node.raw;
    std::size_t n = node.children.size();
    bool last_blank = n > 0 && is_blank_text(node.children[n - 1]);
    for (std::size_t i = 0; i < n; ++i) {
      if (!appended.empty() && last_blank && i == n - 1) {
        out_ += '\n';
        out_ += appended_indent;
        out_ += appended;
      }
      child(node, i);
    }
    if (!appended.empty() && !last_blank) out_ += appended;
    out_ += node.raw_close;
    (void)indent;
  }

  void child(const xml::Node& parent, std::size_t i) {
    const xml::Node& node = parent.children[i];
    if (!node.is_element()) {
      xml::write_raw(node, out_);
      return;
    }
    std::string indent = indent_of(parent, i);
    if (auto it = group_index_.find(&node); it != group_index_.end()) {
      if (!categories_changed_) {
        xml::write_raw(node, out_);
      } else if (it->second == 0) {
        out_ += interp_group(doc_.categories, indent);
      } else {
        trim_trailing_indent(out_);
      }
      return;
    }
    if (auto it = list_owner_.find(&node); it != list_owner_.end()) {
      auto [a, l] = it->second;
      const auto& relations = doc_.units[a].relations;
      if (!relations_changed_[a]) {
        xml::write_raw(node, out_);
      } else if (l == 0 && !relations.empty()) {
        out_ += relation_list(relations, indent);
      } else {
        trim_trailing_indent(out_);
      }
      return;
    }
    element(node, indent);
  }

  const ApparatusDocument& doc_;
  const SourceShell& shell_;
  bool categories_changed_ = false;
  std::vector<bool> relations_changed_;
  std::unordered_map<const xml::Node*, std::size_t> group_index_;
  std::unordered_map<const xml::Node*, std::size_t> app_index_;
  std::unordered_map<const xml::Node*, std::pair<std::size_t, std::size_t>> list_owner_;
  std::string out_;
};

std::string fresh_document(const ApparatusDocument& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<TEI xmlns=\"http://www.tei-c.org/ns/1.0\">\n";
  out += "  <teiHeader>\n    <encodingDesc>\n      ";
  out += interp_group(doc.categories, "      ");
  out += "\n    </encodingDesc>\n  </teiHeader>\n  <text>\n    <body>\n";
  for (const auto& unit : doc.units) {
    std::string before = unit.context;
    std::string after;
    if (auto marker = unit.context.find(kUnitMarker); marker != std::string::npos) {
      before = text::collapse_whitespace(unit.context.substr(0, marker));
      after = text::collapse_whitespace(unit.context.substr(marker + kUnitMarker.size()));
    }
    out += "      <ab>";
    if (!before.empty()) out += xml::escape_text(before) + ' ';
    out += "<app xml:id=\"" + xml::escape_attribute(unit.id) + "\">";
    for (const auto& reading : unit.readings) {
      out += "\n        <rdg n=\"" + xml::escape_attribute(reading.id) + '"';
      if (!reading.witnesses.empty()) {
        out += " wit=\"";
        for (std::size_t i = 0; i < reading.witnesses.size(); ++i) {
          if (i) out += ' ';
          out += '#' + xml::escape_attribute(reading.witnesses[i]);
        }
        out += '"';
      }
      out += '>' + xml::escape_text(reading.text) + "</rdg>";
    }
    if (!unit.relations.empty()) out += "\n        " + relation_list(unit.relations, "        ");
    out += "\n      </app>";
    if (!after.empty()) out += ' ' + xml::escape_text(after);
    out += "</ab>\n";
  }
  out += "    </body>\n  </text>\n</TEI>\n";
  return out;
}

}  // namespace

const Reading* VariationUnit::find_reading(std::string_view reading_id) const {
  for (const auto& r : readings) {
    if (r.id == reading_id) return &r;
  }
  return nullptr;
}

const Classification* VariationUnit::find_relation(std::string_view active,
                                                   std::string_view passive) const {
  for (const auto& c : relations) {
    if (c.active_id == active && c.passive_id == passive) return &c;
  }
  return nullptr;
}

const Category* ApparatusDocument::find_category(std::string_view id) const {
  for (const auto& c : categories) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const VariationUnit* ApparatusDocument::find_unit(std::string_view id) const {
  for (const auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

VariationUnit* ApparatusDocument::find_unit(std::string_view id) {
  for (auto& u : units) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

bool semantically_equal(const ApparatusDocument& a, const ApparatusDocument& b) {
  return a.categories == b.categories && a.units == b.units;
}

void validate(const ApparatusDocument& doc) {
  std::set<std::string_view> category_ids;
  for (const auto& c : doc.categories) {
    if (c.id.empty()) throw ValidationError("category with an empty id");
    if (!category_ids.insert(c.id).second) {
      throw ValidationError("duplicate category id '" + c.id + "'");
    }
  }
  for (const auto& c : doc.categories) {
    if (!c.inverse_id) continue;
    const Category* inverse = doc.find_category(*c.inverse_id);
    if (!inverse) {
      throw ValidationError("category '" + c.id + "' names unknown inverse '" + *c.inverse_id + "'");
    }
    if (inverse->inverse_id != c.id) {
      throw ValidationError("category '" + c.id + "' has inverse '" + inverse->id +
                            "' which does not point back");
    }
  }
  std::set<std::string_view> unit_ids;
  for (const auto& unit : doc.units) {
    if (unit.id.empty()) throw ValidationError("variation unit with an empty id");
    if (!unit_ids.insert(unit.id).second) {
      throw ValidationError("duplicate variation unit id '" + unit.id + "'");
    }
    if (unit.readings.empty()) throw ValidationError("unit '" + unit.id + "' has no readings");
    std::set<std::string_view> reading_ids;
    for (const auto& r : unit.readings) {
      if (r.id.empty()) throw ValidationError("unit '" + unit.id + "' has a reading with no id");
      if (!reading_ids.insert(r.id).second) {
        throw ValidationError("unit '" + unit.id + "' has duplicate reading id '" + r.id + "'");
      }
    }
    std::set<std::pair<std::string_view, std::string_view>> pairs;
    for (const auto& rel : unit.relations) {
      for (const auto* end : {&rel.active_id, &rel.passive_id}) {
        if (!reading_ids.count(*end)) {
          throw ValidationError("unit '" + unit.id + "': relation references unknown reading '" +
                                *end + "'");
        }
      }
      if (rel.active_id == rel.passive_id) {
        throw ValidationError("unit '" + unit.id + "': relation from reading '" + rel.active_id +
                              "' to itself");
      }
      if (rel.category_ids.empty()) {
        throw ValidationError("unit '" + unit.id + "': relation " + rel.active_id + " -> " +
                              rel.passive_id + " has no category");
      }
      for (const auto& cat : rel.category_ids) {
        if (!category_ids.count(cat)) {
          throw ValidationError("unit '" + unit.id + "': relation references unknown category '" +
                                cat + "'");
        }
      }
      if (!pairs.emplace(rel.active_id, rel.passive_id).second) {
        throw ValidationError("unit '" + unit.id + "': more than one relation for " +
                              rel.active_id + " -> " + rel.passive_id);
      }
    }
  }
}

ApparatusDocument parse_document(std::string_view xml_text) {
  auto shell = std::make_shared<SourceShell>();
  shell->document = xml::parse(xml_text);
  ApparatusDocument doc;
  ParseWalker walker{*shell, doc};
  for (const auto& child : shell->document.children) walker.walk(child, nullptr);
  if (!shell->category_host) shell->category_host = xml::root_element(shell->document);
  validate(doc);
  shell->parsed_categories = doc.categories;
  shell->parsed_units = doc.units;
  doc.shell = std::move(shell);
  return doc;
}

std::string serialize_document(const ApparatusDocument& doc) {
  try {
    validate(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("serialization refused: ") + e.what());
  }
  if (!doc.shell) return fresh_document(doc);
  const SourceShell& shell = *doc.shell;
  if (doc.units.size() != shell.parsed_units.size()) {
    throw ValidationError("serialization refused: units were added or removed since parsing");
  }
  for (std::size_t i = 0; i < doc.units.size(); ++i) {
    const auto& now = doc.units[i];
    const auto& then = shell.parsed_units[i];
    if (now.id != then.id || now.readings != then.readings || now.context != then.context) {
      throw ValidationError("serialization refused: unit '" + now.id +
                            "' no longer matches the source apparatus");
    }
  }
  return Emitter(doc, shell).run();
}

void add_relation_in_place(ApparatusDocument& doc, std::string_view unit_id,
                           Classification classification) {
  VariationUnit* unit = doc.find_unit(unit_id);
  if (!unit) throw ValidationError("unknown unit '" + std::string(unit_id) + "'");
  for (const auto* end : {&classification.active_id, &classification.passive_id}) {
    if (!unit->find_reading(*end)) {
      throw ValidationError("unknown reading '" + *end + "' in unit '" + unit->id + "'");
    }
  }
  if (classification.active_id == classification.passive_id) {
    throw ValidationError("active and passive reading are both '" + classification.active_id + "'");
  }
  if (classification.category_ids.empty()) throw ValidationError("classification has no category");
  for (const auto& cat : classification.category_ids) {
    if (!doc.find_category(cat)) throw ValidationError("unknown category '" + cat + "'");
  }
  upsert_relation(unit->relations, std::move(classification));
}

ApparatusDocument add_relation(ApparatusDocument doc, std::string_view unit_id,
                               Classification classification) {
  add_relation_in_place(doc, unit_id, std::move(classification));
  return doc;
}

std::size_t remove_relation(ApparatusDocument& doc, std::string_view unit_id,
                            std::string_view active, std::string_view passive) {
  VariationUnit* unit = doc.find_unit(unit_id);
  if (!unit) return 0;
  auto removed = std::erase_if(unit->relations, [&](const Classification& c) {
    return c.active_id == active && c.passive_id == passive;
  });
  return static_cast<std::size_t>(removed);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error("cannot write '" + tmp.string() + "': " + std::strerror(errno));
  const char* data = contents.data();
  std::size_t left = contents.size();
  while (left > 0) {
    ssize_t n = ::write(fd, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      int err = errno;
      ::close(fd);
      std::filesystem::remove(tmp);
      throw Error("cannot write '" + tmp.string() + "': " + std::strerror(err));
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    std::filesystem::remove(tmp);
    throw Error("cannot flush '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot replace '" + path.string() + "': " + ec.message());
  }
}

ApparatusDocument load_document(const std::filesystem::path& path) {
  return parse_document(read_file(path));
}

void save_document(const ApparatusDocument& doc, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_document(doc));
}

}  // namespace rdgai
