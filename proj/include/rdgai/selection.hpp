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

#ifndef RDGAI_SELECTION_HPP_
#define RDGAI_SELECTION_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdgai/apparatus.hpp"
#include "rdgai/transitions.hpp"

namespace rdgai {

// A manually classified transition usable as a prompt example.
struct ClassifiedExample {
  TransitionPair pair;
  std::string category_id;
  std::optional<std::string> description;

  bool has_description() const { return description.has_value() && !description->empty(); }
  bool operator==(const ClassifiedExample&) const = default;
};

// Edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// "<active> -> <passive>", with "(omitted)" for empty readings.
std::string pair_signature(const TransitionPair& pair);
inline std::string pair_signature(const ClassifiedExample& example) {
  return pair_signature(example.pair);
}

// Dense symmetric matrix with a zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n = 0) : n_(n), d_(n * n, 0.0) {}

  // Levenshtein distances between every pair of strings. Rows are computed
  // on up to `threads` workers; the result does not depend on the count.
  static DistanceMatrix from_strings(const std::vector<std::string>& items,
                                     std::size_t threads = 1);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  // Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// Sum over all points of the distance to the nearest medoid.
double total_deviation(const DistanceMatrix& m, const std::vector<std::size_t>& medoids);

// Greedy BUILD initialization: the first medoid minimizes the total distance,
// each further medoid gives the largest reduction in total deviation. Ties go
// to the lowest index.
std::vector<std::size_t> build_medoids(const DistanceMatrix& m, std::size_t k);

// FasterPAM local search started from BUILD. Returns all indices when k >= n.
// Deterministic; throws std::invalid_argument when k == 0.
std::vector<std::size_t> k_medoids(const DistanceMatrix& m, std::size_t k);

// All manual examples of one category, in document order.
std::vector<ClassifiedExample> manual_examples(const ApparatusDocument& doc,
                                               std::string_view category_id);

// Up to k representative examples of a category. Examples with descriptions
// take precedence; medoids are used whenever a group must be thinned. The
// result lists described examples first, each group in document order.
// `pool`, when given, restricts the candidates.
std::vector<ClassifiedExample> select_examples(
    const ApparatusDocument& doc, std::string_view category_id, std::size_t k,
    const std::function<bool(const TransitionPair&)>& pool = {});

}  // namespace rdgai

#endif  // RDGAI_SELECTION_HPP_
