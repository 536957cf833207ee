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

#ifndef RDGAI_TRANSITIONS_HPP_
#define RDGAI_TRANSITIONS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdgai/apparatus.hpp"

namespace rdgai {

// An ordered transition from the active reading to the passive reading.
struct TransitionPair {
  std::string unit_id;
  std::string active_id;
  std::string passive_id;
  std::string active_text;
  std::string passive_text;
  std::string context;

  bool operator==(const TransitionPair&) const = default;
};

// All n(n-1) ordered pairs of distinct readings, in reading order.
std::vector<TransitionPair> enumerate_pairs(const VariationUnit& unit);

// Pairs of every unit that have no classification yet, in document order.
std::vector<TransitionPair> unclassified_pairs(const ApparatusDocument& doc);

// Looks a pair up by ids. Throws ValidationError if absent.
TransitionPair make_pair(const ApparatusDocument& doc, std::string_view unit_id,
                         std::string_view active_id, std::string_view passive_id);

// Description given to relations written by reciprocal inference.
std::string reciprocal_description(std::string_view active_id, std::string_view passive_id);
bool is_reciprocal_description(std::string_view description);

struct ClassifyOutcome {
  std::vector<Classification> written;  // forward first, then any reciprocal
  bool reciprocal_written = false;
};

// Writes (active -> passive) with the given categories and then the reverse
// pair with each category's inverse (or the same category when symmetric),
// unless the reverse pair already carries a manual classification.
// Throws ValidationError for unknown categories or pair endpoints.
ClassifyOutcome classify_pair_in_place(ApparatusDocument& doc, const TransitionPair& pair,
                                       const std::vector<std::string>& category_ids,
                                       std::optional<std::string> description,
                                       const std::string& responsibility);

ApparatusDocument classify_pair(ApparatusDocument doc, const TransitionPair& pair,
                                std::string_view category_id,
                                std::optional<std::string> description,
                                const std::string& responsibility);

// Category ids a reverse transition receives under the inverse rule.
std::vector<std::string> reciprocal_categories(const ApparatusDocument& doc,
                                               const std::vector<std::string>& category_ids);

}  // namespace rdgai

#endif  // RDGAI_TRANSITIONS_HPP_
