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

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "rdgai/apparatus.hpp"
#include "rdgai/errors.hpp"
#include "rdgai/prompting.hpp"
#include "rdgai/transitions.hpp"

using namespace rdgai;
using rdgai::testing::fixture_path;

namespace {

// Example lines listed under each "## id" heading.
std::map<std::string, std::size_t> examples_per_heading(const std::string& prefix) {
  std::map<std::string, std::size_t> counts;
  std::istringstream in(prefix);
  std::string line, current;
  while (std::getline(in, line)) {
    if (line.starts_with("## ")) {
      current = line.substr(3);
      counts[current] = 0;
    } else if (!current.empty() && line.starts_with("- ")) {
      ++counts[current];
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("prefix lists at most k examples per category") {
  ApparatusDocument doc = load_document(fixture_path("john8_excerpt.xml"));
  for (std::size_t k : {10u, 20u, 30u}) {
    PromptOptions options;
    options.examples_per_category = k;
    auto counts = examples_per_heading(render_stable_prefix(doc, options));
    REQUIRE(counts.size() == 4);
    for (const auto& [id, n] : counts) {
      CAPTURE(id);
      CHECK(n == std::min<std::size_t>(k, 20));
    }
  }
}

TEST_CASE("single category without examples") {
  ApparatusDocument doc;
  doc.categories.push_back({"Orthography", "Orthography", "Spelling only.", std::nullopt});
  std::string prefix = render_stable_prefix(doc, {});
  CHECK(prefix.find("## Orthography") != std::string::npos);
  CHECK(prefix.find("Spelling only.") != std::string::npos);
  CHECK(prefix.find("\"justification\"") != std::string::npos);
  CHECK(prefix.find("Examples: none recorded.") != std::string::npos);
  CHECK_THROWS_AS(render_stable_prefix(ApparatusDocument{}, {}), ValidationError);
}

TEST_CASE("example rendering") {
  ApparatusDocument doc = load_document(fixture_path("reciprocal.xml"));
  std::string prefix = render_stable_prefix(doc, {});
  CHECK(prefix.find("- All things -> (omitted) ⇒ Omission (no justification recorded)") != std::string::npos);
  doc = classify_pair(doc, make_pair(doc, "u3", "1", "2"), "Substitution", std::string("lamp for light"), "editor");
  prefix = render_stable_prefix(doc, {});
  CHECK(prefix.find("- light -> lamp ⇒ Substitution (lamp for light)") != std::string::npos);
  CHECK(prefix.find("- lamp -> light ⇒ Substitution (no justification recorded)") != std::string::npos);
}

TEST_CASE("unit query") {
  ApparatusDocument doc = load_document(fixture_path("reciprocal.xml"));
  const VariationUnit* u = doc.find_unit("unit-2");
  std::string q = render_unit_query(*u, enumerate_pairs(*u));
  CHECK(q.find("Variation unit: unit-2") != std::string::npos);
  CHECK(q.find("u2-b: (omitted)  [B C D]") != std::string::npos);
  CHECK(q.find("Pair 1: reading u2-a -> reading u2-b") != std::string::npos);
  CHECK(q.find("Pair 2: reading u2-b -> reading u2-a") != std::string::npos);
  CHECK(q.find("  passive: (omitted)") != std::string::npos);
  CHECK_THROWS_AS(render_unit_query(*u, {}), std::invalid_argument);
  CHECK_THROWS_AS(render_unit_query(*u, enumerate_pairs(*doc.find_unit("u3"))), std::invalid_argument);

  ApparatusDocument excerpt = load_document(fixture_path("john8_excerpt.xml"));
  const VariationUnit* jn = excerpt.find_unit("Jn8_12-1");
  q = render_unit_query(*jn, enumerate_pairs(*jn));
  CHECK(q.find("Context: ") != std::string::npos);
  CHECK(q.find("[...]") != std::string::npos);
}

TEST_CASE("parse_response") {
  ApparatusDocument doc = load_document(fixture_path("john8_excerpt.xml"));
  const VariationUnit* u = doc.find_unit("Jn8_12-1");
  auto pairs = enumerate_pairs(*u);
  REQUIRE(pairs.size() >= 2);

  SUBCASE("well formed") {
    auto r = parse_response(R"([{"pair":1,"category":"Orthography","justification":"alif"},
                                 {"pair":2,"category":"Orthography","justification":"alif back"}])",
                            {pairs[0], pairs[1]}, doc.categories);
    CHECK(r.errors.empty());
    REQUIRE(r.decisions.size() == 2);
    CHECK(r.decisions[0].active_id == pairs[0].active_id);
    CHECK(r.decisions[1].justification == "alif back");
  }
  SUBCASE("fenced with prose and lowercase ids") {
    auto r = parse_response("Sure [see below].\n```json\n[{\"pair\": \"1\", \"category\": \"orthography\", "
                            "\"justification\": \"x ] y\"}]\n```\nDone.",
                            {pairs[0]}, doc.categories);
    CHECK(r.errors.empty());
    REQUIRE(r.decisions.size() == 1);
    CHECK(r.decisions[0].category_id == "Orthography");
    CHECK(r.decisions[0].justification == "x ] y");
  }
  SUBCASE("unknown category and missing pair") {
    auto r = parse_response(R"([{"pair":1,"category":"Transposition","justification":""}])", {pairs[0], pairs[1]},
                            doc.categories);
    CHECK(r.decisions.empty());
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].message.find("unknown category") != std::string::npos);
    CHECK(r.errors[1].pair_number == 2u);
  }
  SUBCASE("duplicates keep the last answer") {
    auto r = parse_response(R"([{"pair":1,"category":"Orthography","justification":"a"},
                                 {"pair":1,"category":"Multiple_Word_Changes","justification":"b"}])",
                            {pairs[0]}, doc.categories);
    REQUIRE(r.decisions.size() == 1);
    CHECK(r.decisions[0].category_id == "Multiple_Word_Changes");
  }
  SUBCASE("no array") {
    CHECK_THROWS_AS(parse_response("I cannot help with that.", {pairs[0]}, doc.categories), ResponseFormatError);
    CHECK_THROWS_AS(parse_response("[not json", {pairs[0]}, doc.categories), ResponseFormatError);
  }
}

TEST_CASE("render then parse is the identity on decisions") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 60; ++round) {
    ApparatusDocument doc = rdgai::testing::random_document(rng);
    for (const auto& unit : doc.units) {
      auto pairs = enumerate_pairs(unit);
      if (pairs.empty()) continue;
      std::vector<PairDecision> decisions;
      for (const auto& p : pairs) {
        const auto& cat = doc.categories[rdgai::testing::uniform(rng, 0, doc.categories.size() - 1)];
        decisions.push_back({p.active_id, p.passive_id, cat.id, rdgai::testing::random_unicode(rng, 12) + " \"q\""});
      }
      auto parsed = parse_response(render_answer(decisions, pairs), pairs, doc.categories);
      CHECK(parsed.errors.empty());
      CHECK(parsed.decisions == decisions);
    }
  }
}

TEST_CASE("prefix is stable across units") {
  ApparatusDocument doc = load_document(fixture_path("john8_excerpt.xml"));
  PromptOptions options;
  std::string first = render_stable_prefix(doc, options);
  for (int i = 0; i < 3; ++i) CHECK(render_stable_prefix(doc, options) == first);
  CHECK(first.find("Jn8_") == std::string::npos);
}
