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

#ifndef RDGAI_TEXT_HPP_
#define RDGAI_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace rdgai::text {

// Rendering of an empty reading (an omission).
inline constexpr std::string_view kOmitted = "(omitted)";

// Collapses runs of XML whitespace to a single space and trims both ends.
std::string collapse_whitespace(std::string_view s);

// Splits on XML whitespace, dropping empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

// Removes one leading '#' if present.
std::string strip_hash(std::string_view s);

// Decodes UTF-8 into Unicode scalar values. Invalid sequences decode to
// U+FFFD one byte at a time.
std::u32string decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

std::string to_lower_ascii(std::string_view s);

// "(omitted)" for empty text, otherwise the text itself.
inline std::string_view display(std::string_view reading_text) {
  return reading_text.empty() ? kOmitted : reading_text;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace rdgai::text

#endif  // RDGAI_TEXT_HPP_
