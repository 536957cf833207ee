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

#ifndef RDGAI_TABULAR_HPP_
#define RDGAI_TABULAR_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rdgai/apparatus.hpp"

namespace rdgai::tabular {

inline constexpr std::array<std::string_view, 8> kColumns = {
    "App ID",           "Context",           "Active Reading ID", "Passive Reading ID",
    "Active Reading Text", "Passive Reading Text", "Description",     "Relation Type(s)"};

inline constexpr std::string_view kDefaultResponsibility = "import";

// RFC 4180 helpers.
std::string encode_row(const std::vector<std::string>& fields);
// Throws ValidationError for an unterminated quoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// UTF-8 with a byte order mark; one row per ordered pair in document order.
std::string export_table(const ApparatusDocument& doc);

struct RowError {
  std::size_t row = 0;  // 1-based, header is row 1
  std::string message;
};

struct ImportSummary {
  std::size_t added = 0;
  std::size_t changed = 0;
  std::size_t unchanged = 0;
  std::size_t skipped = 0;  // empty relation cell
  std::vector<RowError> errors;
};

struct ImportResult {
  ApparatusDocument document;
  ImportSummary summary;
};

// Applies every row with a non-empty relation cell. Rows that reference
// unknown ids are skipped and reported; a wrong header throws
// ValidationError.
ImportResult import_table(ApparatusDocument doc, std::string_view csv_text,
                          const std::string& responsibility = std::string(kDefaultResponsibility));

}  // namespace rdgai::tabular

#endif  // RDGAI_TABULAR_HPP_
