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

#ifndef RDGAI_TESTS_SUPPORT_INVARIANTS_HPP_
#define RDGAI_TESTS_SUPPORT_INVARIANTS_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "generators.hpp"
#include "rdgai/apparatus.hpp"
#include "rdgai/evaluation.hpp"
#include "rdgai/selection.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai::testing {

inline bool is_inferred(const Classification& r) {
  return r.description == reciprocal_description(r.passive_id, r.active_id);
}

// Every directly written relation has a reverse, and a reverse inferred from
// it carries the reciprocal categories.
inline std::vector<std::string> closure_violations(const ApparatusDocument& doc) {
  std::vector<std::string> out;
  for (const auto& unit : doc.units) {
    for (const auto& r : unit.relations) {
      if (is_inferred(r)) continue;
      std::string where = unit.id + " " + r.active_id + "->" + r.passive_id;
      const Classification* s = unit.find_relation(r.passive_id, r.active_id);
      if (!s) {
        out.push_back(where + ": reverse missing");
      } else if (is_inferred(*s) && s->category_ids != reciprocal_categories(doc, r.category_ids)) {
        out.push_back(where + ": reverse has the wrong category");
      }
    }
  }
  return out;
}

// Re-applies every direct relation through classify_pair.
inline ApparatusDocument reapply_closure(ApparatusDocument doc) {
  std::vector<std::pair<std::string, Classification>> direct;
  for (const auto& unit : doc.units) {
    for (const auto& r : unit.relations) {
      if (!is_inferred(r)) direct.emplace_back(unit.id, r);
    }
  }
  for (const auto& [unit_id, r] : direct) {
    classify_pair_in_place(doc, make_pair(doc, unit_id, r.active_id, r.passive_id), r.category_ids, r.description,
                           r.responsibility);
  }
  return doc;
}

struct ClosureRun {
  std::size_t ops = 0;
  std::vector<std::string> violations;
  bool idempotent = true;
  bool round_trips = true;
};

// Random manual writes on any pair and machine writes on unclassified pairs,
// as the editor and the pipeline would issue them.
inline ClosureRun random_closure_run(std::mt19937_64& rng, std::size_t ops) {
  ClosureRun run;
  DocShape shape;
  shape.classified_share = 0.0;
  shape.min_units = 1;
  shape.max_units = 4;
  shape.max_readings = 4;
  ApparatusDocument doc = random_document(rng, shape);
  for (std::size_t i = 0; run.ops < ops && i < 50 * ops; ++i) {
    const VariationUnit& unit = doc.units[uniform(rng, 0, doc.units.size() - 1)];
    auto pairs = enumerate_pairs(unit);
    if (pairs.empty()) continue;
    TransitionPair pair = pairs[uniform(rng, 0, pairs.size() - 1)];
    const Category& cat = doc.categories[uniform(rng, 0, doc.categories.size() - 1)];
    bool machine = chance(rng, 0.4);
    if (machine && unit.find_relation(pair.active_id, pair.passive_id)) continue;
    std::optional<std::string> desc;
    if (chance(rng, 0.5)) desc = "op " + std::to_string(i);
    classify_pair_in_place(doc, pair, {cat.id}, desc, machine ? "rdgai" : "editor");
    ++run.ops;
  }
  run.violations = closure_violations(doc);
  run.idempotent = semantically_equal(reapply_closure(doc), doc);
  run.round_trips = semantically_equal(parse_document(serialize_document(doc)), doc);
  return run;
}

struct SplitCheck {
  bool ok = true;
  std::string problem;
};

inline SplitCheck check_split(const ApparatusDocument& doc, double proportion, std::uint64_t seed) {
  SplitCheck c;
  auto fail = [&](const std::string& why) {
    c.ok = false;
    c.problem = why;
    return c;
  };
  eval::EvalSplit s = eval::split_annotations(doc, proportion, seed);
  eval::EvalSplit again = eval::split_annotations(doc, proportion, seed);
  if (s.prompt_pool != again.prompt_pool || s.ground_truth != again.ground_truth) return fail("not deterministic");
  auto all = eval::manual_annotations(doc);
  auto key = [](const eval::Annotation& a) { return a.pair.unit_id + "|" + a.pair.active_id + "|" + a.pair.passive_id; };
  std::map<std::string, int> seen;
  for (const auto& a : s.prompt_pool) seen[key(a)] += 1;
  for (const auto& a : s.ground_truth) {
    if (seen.count(key(a)) && seen[key(a)] > 0) return fail("pool and ground truth overlap at " + key(a));
    seen[key(a)] += 1;
  }
  if (s.prompt_pool.size() + s.ground_truth.size() != all.size()) return fail("union is not complete");
  for (const auto& a : all) {
    if (seen[key(a)] != 1) return fail("annotation missing or duplicated: " + key(a));
  }
  std::map<std::string, std::size_t> m, pooled;
  for (const auto& a : all) ++m[a.category_id];
  for (const auto& a : s.prompt_pool) ++pooled[a.category_id];
  for (const auto& [cat, n] : m) {
    std::size_t want = n == 1 ? 1 : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(proportion * static_cast<double>(n))));
    if (pooled[cat] != want) return fail("category " + cat + " pooled " + std::to_string(pooled[cat]) + " of " + std::to_string(n));
  }
  return c;
}

struct MedoidCheck {
  bool distinct = true;
  bool right_size = true;
  bool swap_optimal = true;
  bool no_worse_than_build = true;
  double gap = 0.0;  // result TD minus the exhaustive optimum
};

template <typename Oracle>
MedoidCheck check_medoids(const DistanceMatrix& m, std::size_t k, Oracle best_td) {
  MedoidCheck c;
  auto med = k_medoids(m, k);
  std::size_t n = m.size();
  std::vector<bool> is_medoid(n, false);
  for (auto i : med) {
    if (is_medoid[i]) c.distinct = false;
    is_medoid[i] = true;
  }
  c.right_size = med.size() == std::min(k, n);
  double td = total_deviation(m, med);
  for (std::size_t slot = 0; slot < med.size(); ++slot) {
    for (std::size_t x = 0; x < n; ++x) {
      if (is_medoid[x]) continue;
      auto swapped = med;
      swapped[slot] = x;
      if (total_deviation(m, swapped) < td - 1e-9) c.swap_optimal = false;
    }
  }
  c.no_worse_than_build = td <= total_deviation(m, build_medoids(m, std::min(k, n))) + 1e-9;
  c.gap = td - best_td(n, std::min(k, n));
  return c;
}

inline DistanceMatrix random_distances(std::mt19937_64& rng, std::size_t n) {
  DistanceMatrix m(n);
  bool integral = chance(rng, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = integral ? static_cast<double>(uniform(rng, 0, 6)) : std::uniform_real_distribution<double>(0, 10)(rng);
      m.set(i, j, v);
    }
  }
  return m;
}

}  // namespace rdgai::testing

#endif  // RDGAI_TESTS_SUPPORT_INVARIANTS_HPP_
