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

#include "rdgai/transitions.hpp"

#include "rdgai/errors.hpp"

namespace rdgai {
namespace {

constexpr std::string_view kReciprocalPrefix = "reciprocal of ";

TransitionPair pair_of(const VariationUnit& unit, const Reading& active, const Reading& passive) {
  return TransitionPair{unit.id, active.id, passive.id, active.text, passive.text, unit.context};
}

}  // namespace

std::vector<TransitionPair> enumerate_pairs(const VariationUnit& unit) {
  std::vector<TransitionPair> pairs;
  const std::size_t n = unit.readings.size();
  if (n > 1) pairs.reserve(n * (n - 1));
  for (const auto& active : unit.readings) {
    for (const auto& passive : unit.readings) {
      if (&active == &passive) continue;
      pairs.push_back(pair_of(unit, active, passive));
    }
  }
  return pairs;
}

std::vector<TransitionPair> unclassified_pairs(const ApparatusDocument& doc) {
  std::vector<TransitionPair> out;
  for (const auto& unit : doc.units) {
    for (auto& pair : enumerate_pairs(unit)) {
      if (!unit.find_relation(pair.active_id, pair.passive_id)) out.push_back(std::move(pair));
    }
  }
  return out;
}

TransitionPair make_pair(const ApparatusDocument& doc, std::string_view unit_id,
                         std::string_view active_id, std::string_view passive_id) {
  const VariationUnit* unit = doc.find_unit(unit_id);
  if (!unit) throw ValidationError("unknown unit '" + std::string(unit_id) + "'");
  const Reading* active = unit->find_reading(active_id);
  const Reading* passive = unit->find_reading(passive_id);
  if (!active || !passive) {
    throw ValidationError("unknown reading '" +
                          std::string(active ? passive_id : active_id) + "' in unit '" +
                          unit->id + "'");
  }
  if (active == passive) {
    throw ValidationError("active and passive reading are both '" + active->id + "'");
  }
  return pair_of(*unit, *active, *passive);
}

std::string reciprocal_description(std::string_view active_id, std::string_view passive_id) {
  return std::string(kReciprocalPrefix) + std::string(active_id) + " -> " + std::string(passive_id);
}

bool is_reciprocal_description(std::string_view description) {
  return description.starts_with(kReciprocalPrefix);
}

std::vector<std::string> reciprocal_categories(const ApparatusDocument& doc,
                                               const std::vector<std::string>& category_ids) {
  std::vector<std::string> out;
  out.reserve(category_ids.size());
  for (const auto& id : category_ids) {
    const Category* category = doc.find_category(id);
    if (!category) throw ValidationError("unknown category '" + id + "'");
    out.push_back(category->inverse_id.value_or(category->id));
  }
  return out;
}

ClassifyOutcome classify_pair_in_place(ApparatusDocument& doc, const TransitionPair& pair,
                                       const std::vector<std::string>& category_ids,
                                       std::optional<std::string> description,
                                       const std::string& responsibility) {
  // Validates endpoints before anything is written.
  make_pair(doc, pair.unit_id, pair.active_id, pair.passive_id);
  std::vector<std::string> reverse_ids = reciprocal_categories(doc, category_ids);

  ClassifyOutcome outcome;
  Classification forward{pair.active_id, pair.passive_id, category_ids, std::move(description),
                         responsibility};
  add_relation_in_place(doc, pair.unit_id, forward);
  outcome.written.push_back(std::move(forward));

  const VariationUnit* unit = doc.find_unit(pair.unit_id);
  const Classification* existing = unit->find_relation(pair.passive_id, pair.active_id);
  // A manual reverse inferred from this same pair follows a manual revision
  // of it; every other manual relation stays.
  bool derived = existing && existing->description == reciprocal_description(pair.active_id, pair.passive_id);
  bool manual_act = responsibility != kMachineAgent;
  if (existing && existing->is_manual() && !(derived && manual_act)) return outcome;

  Classification reverse{pair.passive_id, pair.active_id, std::move(reverse_ids),
                         reciprocal_description(pair.active_id, pair.passive_id), responsibility};
  add_relation_in_place(doc, pair.unit_id, reverse);
  outcome.written.push_back(std::move(reverse));
  outcome.reciprocal_written = true;
  return outcome;
}

ApparatusDocument classify_pair(ApparatusDocument doc, const TransitionPair& pair,
                                std::string_view category_id,
                                std::optional<std::string> description,
                                const std::string& responsibility) {
  classify_pair_in_place(doc, pair, {std::string(category_id)}, std::move(description),
                         responsibility);
  return doc;
}

}  // namespace rdgai
