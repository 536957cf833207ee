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

#include "rdgai/xml.hpp"

#include <algorithm>
#include <cstdint>

#include "rdgai/errors.hpp"
#include "rdgai/text.hpp"

namespace rdgai::xml {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < src_.size(); ++i) {
      if (src_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Node parse_document() {
    Node doc;
    doc.kind = NodeKind::kDocument;
    bool seen_root = false;
    // Skip a UTF-8 byte order mark, keeping it in the raw stream.
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") {
      Node bom;
      bom.kind = NodeKind::kText;
      bom.raw = std::string(src_.substr(0, 3));
      doc.children.push_back(std::move(bom));
      pos_ = 3;
    }
    while (pos_ < src_.size()) {
      if (starts_with("<?")) {
        doc.children.push_back(parse_pi());
      } else if (starts_with("<!--")) {
        doc.children.push_back(parse_comment());
      } else if (starts_with("<!DOCTYPE")) {
        if (seen_root) fail("DOCTYPE after root element", pos_);
        doc.children.push_back(parse_doctype());
      } else if (starts_with("<")) {
        if (seen_root) fail("more than one root element", pos_);
        doc.children.push_back(parse_element());
        seen_root = true;
      } else {
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '<') {
          if (!is_space(src_[pos_])) fail("character data outside the root element", pos_);
          ++pos_;
        }
        Node ws;
        ws.kind = NodeKind::kText;
        ws.raw = std::string(src_.substr(start, pos_ - start));
        ws.text = ws.raw;
        doc.children.push_back(std::move(ws));
      }
    }
    if (!seen_root) fail("no root element", pos_);
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    std::size_t column = offset - line_starts_[line - 1] + 1;
    throw ParseError(message, line, column);
  }

  void locate(Node& node, std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    node.line = static_cast<std::size_t>(it - line_starts_.begin());
    node.column = offset - line_starts_[node.line - 1] + 1;
  }

  bool starts_with(std::string_view prefix) const {
    return src_.substr(pos_, prefix.size()) == prefix;
  }

  std::size_t find_or_fail(std::string_view terminator, const char* what) {
    std::size_t end = src_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what, pos_);
    return end;
  }

  Node parse_pi() {
    Node node;
    node.kind = NodeKind::kProcessingInstruction;
    locate(node, pos_);
    std::size_t end = find_or_fail("?>", "processing instruction") + 2;
    node.raw = std::string(src_.substr(pos_, end - pos_));
    pos_ = end;
    return node;
  }

  Node parse_comment() {
    Node node;
    node.kind = NodeKind::kComment;
    locate(node, pos_);
    std::size_t body = pos_ + 4;
    std::size_t end = src_.find("-->", body);
    if (end == std::string_view::npos) fail("unterminated comment", pos_);
    node.raw = std::string(src_.substr(pos_, end + 3 - pos_));
    node.text = std::string(src_.substr(body, end - body));
    pos_ = end + 3;
    return node;
  }

  Node parse_cdata() {
    Node node;
    node.kind = NodeKind::kCData;
    locate(node, pos_);
    std::size_t body = pos_ + 9;
    std::size_t end = src_.find("]]>", body);
    if (end == std::string_view::npos) fail("unterminated CDATA section", pos_);
    node.raw = std::string(src_.substr(pos_, end + 3 - pos_));
    node.text = std::string(src_.substr(body, end - body));
    pos_ = end + 3;
    return node;
  }

  Node parse_doctype() {
    Node node;
    node.kind = NodeKind::kDoctype;
    locate(node, pos_);
    std::size_t start = pos_;
    int bracket_depth = 0;
    char quote = 0;
    for (pos_ += 9; pos_ < src_.size(); ++pos_) {
      char c = src_[pos_];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '[') {
        ++bracket_depth;
      } else if (c == ']') {
        --bracket_depth;
      } else if (c == '>' && bracket_depth == 0) {
        ++pos_;
        node.raw = std::string(src_.substr(start, pos_ - start));
        return node;
      }
    }
    fail("unterminated DOCTYPE", start);
  }

  std::string parse_name() {
    std::size_t start = pos_;
    if (pos_ >= src_.size() || !is_name_start(src_[pos_])) fail("expected a name", pos_);
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  void skip_space() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  // Decodes entity and character references in [begin, end).
  std::string decode(std::size_t begin, std::size_t end) const {
    std::string out;
    out.reserve(end - begin);
    std::size_t i = begin;
    while (i < end) {
      char c = src_[i];
      if (c != '&') {
        out.push_back(c);
        ++i;
        continue;
      }
      std::size_t semi = src_.find(';', i);
      if (semi == std::string_view::npos || semi >= end || semi - i > 32) {
        fail("malformed entity reference", i);
      }
      std::string_view ref = src_.substr(i + 1, semi - i - 1);
      if (ref == "lt") {
        out.push_back('<');
      } else if (ref == "gt") {
        out.push_back('>');
      } else if (ref == "amp") {
        out.push_back('&');
      } else if (ref == "quot") {
        out.push_back('"');
      } else if (ref == "apos") {
        out.push_back('\'');
      } else if (!ref.empty() && ref.front() == '#') {
        bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
        std::string_view digits = ref.substr(hex ? 2 : 1);
        if (digits.empty()) fail("malformed character reference", i);
        std::uint32_t cp = 0;
        for (char d : digits) {
          int v = -1;
          if (d >= '0' && d <= '9') v = d - '0';
          else if (hex && d >= 'a' && d <= 'f') v = d - 'a' + 10;
          else if (hex && d >= 'A' && d <= 'F') v = d - 'A' + 10;
          if (v < 0) fail("malformed character reference", i);
          cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
          if (cp > 0x10FFFF) fail("character reference out of range", i);
        }
        text::append_utf8(out, static_cast<char32_t>(cp));
      } else {
        // Entities declared in an external DTD are kept literally.
        out.append(src_.substr(i, semi - i + 1));
      }
      i = semi + 1;
    }
    return out;
  }

  Node parse_element() {
    Node node;
    node.kind = NodeKind::kElement;
    std::size_t start = pos_;
    locate(node, start);
    ++pos_;  // '<'
    node.name = parse_name();
    bool self_closing = false;
    while (true) {
      std::size_t before_space = pos_;
      skip_space();
      if (pos_ >= src_.size()) fail("unterminated start tag <" + node.name + ">", start);
      if (starts_with("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      if (src_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (pos_ == before_space) fail("expected whitespace between attributes", pos_);
      std::size_t attr_pos = pos_;
      Attribute attr;
      attr.name = parse_name();
      skip_space();
      if (pos_ >= src_.size() || src_[pos_] != '=') fail("expected '=' after attribute name", pos_);
      ++pos_;
      skip_space();
      if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\'')) {
        fail("expected quoted attribute value", pos_);
      }
      char quote = src_[pos_++];
      std::size_t value_start = pos_;
      std::size_t value_end = src_.find(quote, pos_);
      if (value_end == std::string_view::npos) fail("unterminated attribute value", value_start);
      if (src_.substr(value_start, value_end - value_start).find('<') != std::string_view::npos) {
        fail("'<' in attribute value", value_start);
      }
      attr.value = decode(value_start, value_end);
      pos_ = value_end + 1;
      for (const auto& existing : node.attributes) {
        if (existing.name == attr.name) fail("duplicate attribute '" + attr.name + "'", attr_pos);
      }
      node.attributes.push_back(std::move(attr));
    }
    node.raw = std::string(src_.substr(start, pos_ - start));
    if (self_closing) return node;

    while (true) {
      if (pos_ >= src_.size()) fail("unclosed element <" + node.name + ">", start);
      if (starts_with("</")) {
        std::size_t close_start = pos_;
        pos_ += 2;
        std::string name = parse_name();
        if (name != node.name) {
          fail("mismatched end tag </" + name + ">, expected </" + node.name + ">", close_start);
        }
        skip_space();
        if (pos_ >= src_.size() || src_[pos_] != '>') fail("malformed end tag", close_start);
        ++pos_;
        node.raw_close = std::string(src_.substr(close_start, pos_ - close_start));
        return node;
      }
      if (starts_with("<!--")) {
        node.children.push_back(parse_comment());
      } else if (starts_with("<![CDATA[")) {
        node.children.push_back(parse_cdata());
      } else if (starts_with("<?")) {
        node.children.push_back(parse_pi());
      } else if (src_[pos_] == '<') {
        node.children.push_back(parse_element());
      } else {
        Node text_node;
        text_node.kind = NodeKind::kText;
        locate(text_node, pos_);
        std::size_t text_start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '<') ++pos_;
        text_node.raw = std::string(src_.substr(text_start, pos_ - text_start));
        text_node.text = decode(text_start, pos_);
        node.children.push_back(std::move(text_node));
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
};

void append_text_content(const Node& node, std::string& out) {
  if (node.kind == NodeKind::kText || node.kind == NodeKind::kCData) {
    out += node.text;
    return;
  }
  for (const auto& child : node.children) append_text_content(child, out);
}

}  // namespace

const std::string* Node::attribute(std::string_view attr_name) const {
  for (const auto& attr : attributes) {
    if (attr.name == attr_name) return &attr.value;
  }
  return nullptr;
}

std::string Node::attribute_or(std::string_view attr_name, std::string_view fallback) const {
  const std::string* value = attribute(attr_name);
  return value ? *value : std::string(fallback);
}

std::string Node::text_content() const {
  std::string out;
  append_text_content(*this, out);
  return out;
}

std::string_view Node::local_name() const {
  std::string_view n = name;
  auto colon = n.find(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

Node parse(std::string_view source) { return Reader(source).parse_document(); }

void write_raw(const Node& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::kDocument:
      for (const auto& child : node.children) write_raw(child, out);
      return;
    case NodeKind::kElement:
      out += node.raw;
      for (const auto& child : node.children) write_raw(child, out);
      out += node.raw_close;
      return;
    default:
      out += node.raw;
      return;
  }
}

std::string to_string(const Node& node) {
  std::string out;
  write_raw(node, out);
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

const Node* root_element(const Node& document) {
  for (const auto& child : document.children) {
    if (child.is_element()) return &child;
  }
  return nullptr;
}

}  // namespace rdgai::xml
