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

#ifndef RDGAI_XML_HPP_
#define RDGAI_XML_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// A small non-validating XML reader that keeps the exact source text of
// every node, so untouched regions of a document serialize byte-for-byte.

namespace rdgai::xml {

enum class NodeKind {
  kDocument,
  kElement,
  kText,
  kCData,
  kComment,
  kProcessingInstruction,
  kDoctype,
};

struct Attribute {
  std::string name;
  std::string value;  // entity-decoded
};

struct Node {
  NodeKind kind = NodeKind::kElement;
  std::string name;
  std::vector<Attribute> attributes;
  // Element: the exact start tag. Other kinds: the exact source text.
  std::string raw;
  // Element: the exact end tag (empty when self-closing).
  std::string raw_close;
  // Decoded character data for kText and kCData.
  std::string text;
  std::vector<Node> children;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_element() const { return kind == NodeKind::kElement; }
  bool is_element(std::string_view n) const { return is_element() && name == n; }

  // Returns nullptr when absent.
  const std::string* attribute(std::string_view attr_name) const;
  std::string attribute_or(std::string_view attr_name, std::string_view fallback) const;

  // Concatenated character data of all descendants.
  std::string text_content() const;

  // Element name without namespace prefix.
  std::string_view local_name() const;
};

// Throws rdgai::ParseError with the 1-based position of the problem.
Node parse(std::string_view source);

// Re-emits the exact source text of a node and its descendants.
void write_raw(const Node& node, std::string& out);
std::string to_string(const Node& node);

std::string escape_text(std::string_view s);
std::string escape_attribute(std::string_view s);

// First element child of the document node.
const Node* root_element(const Node& document);

}  // namespace rdgai::xml

#endif  // RDGAI_XML_HPP_
