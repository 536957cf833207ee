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

#include "rdgai/selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rdgai/errors.hpp"
#include "rdgai/text.hpp"

namespace rdgai {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      std::size_t substitution = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitution});
      diagonal = above;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::decode_utf8(a), text::decode_utf8(b));
}

std::string pair_signature(const TransitionPair& pair) {
  std::string out(text::display(pair.active_text));
  out += " -> ";
  out += text::display(pair.passive_text);
  return out;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  d_[i * n_ + j] = value;
  d_[j * n_ + i] = value;
}

DistanceMatrix DistanceMatrix::from_strings(const std::vector<std::string>& items,
                                            std::size_t threads) {
  const std::size_t n = items.size();
  DistanceMatrix m(n);
  std::vector<std::u32string> decoded;
  decoded.reserve(n);
  for (const auto& s : items) decoded.push_back(text::decode_utf8(s));

  // Each worker owns a stride of rows, so writes never overlap.
  auto fill_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m.set(i, j, static_cast<double>(levenshtein(decoded[i], decoded[j])));
      }
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    fill_rows(0, 1);
    return m;
  }
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < threads; ++t) workers.emplace_back(fill_rows, t, threads);
  for (auto& w : workers) w.join();
  return m;
}

double total_deviation(const DistanceMatrix& m, const std::vector<std::size_t>& medoids) {
  double td = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t med : medoids) best = std::min(best, m(i, med));
    td += best;
  }
  return td;
}

std::vector<std::size_t> build_medoids(const DistanceMatrix& m, std::size_t k) {
  const std::size_t n = m.size();
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  std::vector<std::size_t> medoids;
  if (n == 0) return medoids;
  k = std::min(k, n);

  std::size_t first = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < n; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += m(i, c);
    if (sum < best_sum) {
      best_sum = sum;
      first = c;
    }
  }
  medoids.push_back(first);
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = m(i, first);
  std::vector<bool> is_medoid(n, false);
  is_medoid[first] = true;

  while (medoids.size() < k) {
    std::size_t best = n;
    double best_gain = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (std::size_t i = 0; i < n; ++i) gain += std::max(0.0, nearest[i] - m(i, c));
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], m(i, best));
  }
  return medoids;
}

namespace {

// Per-point nearest and second-nearest medoid bookkeeping for FasterPAM.
struct Assignment {
  std::vector<std::size_t> nearest;  // position in the medoid list
  std::vector<double> d_nearest;
  std::vector<double> d_second;
};

Assignment assign(const DistanceMatrix& m, const std::vector<std::size_t>& medoids) {
  const std::size_t n = m.size();
  Assignment a{std::vector<std::size_t>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    std::size_t p1 = 0;
    for (std::size_t p = 0; p < medoids.size(); ++p) {
      double d = m(i, medoids[p]);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        p1 = p;
      } else if (d < d2) {
        d2 = d;
      }
    }
    a.nearest[i] = p1;
    a.d_nearest[i] = d1;
    a.d_second[i] = d2;
  }
  return a;
}

// Change in total deviation from removing each medoid, before a replacement
// is added.
std::vector<double> removal_loss(const Assignment& a, std::size_t k) {
  std::vector<double> loss(k, 0.0);
  for (std::size_t i = 0; i < a.nearest.size(); ++i) {
    loss[a.nearest[i]] += a.d_second[i] - a.d_nearest[i];
  }
  return loss;
}

}  // namespace

std::vector<std::size_t> k_medoids(const DistanceMatrix& m, std::size_t k) {
  const std::size_t n = m.size();
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (k >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> medoids = build_medoids(m, k);
  if (k == 1) {
    // With a single medoid BUILD already picks the global optimum.
    return medoids;
  }

  std::vector<bool> is_medoid(n, false);
  for (std::size_t med : medoids) is_medoid[med] = true;
  Assignment a = assign(m, medoids);
  std::vector<double> loss = removal_loss(a, k);

  // Guards against cycling on floating-point noise.
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, a.d_nearest[i]);
  const double tolerance = 1e-12 * std::max(1.0, scale * static_cast<double>(n));

  std::size_t since_swap = 0;
  std::size_t candidate = 0;
  const std::size_t max_passes = 1000 * n * n;
  std::size_t steps = 0;
  while (since_swap < n && steps++ < max_passes) {
    std::size_t xc = candidate;
    candidate = (candidate + 1) % n;
    ++since_swap;
    if (is_medoid[xc]) continue;

    // Evaluates all k swaps (medoid p -> xc) in one pass over the points.
    std::vector<double> delta = loss;
    double shared = 0.0;
    for (std::size_t o = 0; o < n; ++o) {
      double d_oc = m(o, xc);
      std::size_t p = a.nearest[o];
      if (d_oc < a.d_nearest[o]) {
        shared += d_oc - a.d_nearest[o];
        delta[p] += a.d_nearest[o] - a.d_second[o];
      } else if (d_oc < a.d_second[o]) {
        delta[p] += d_oc - a.d_second[o];
      }
    }
    std::size_t best = 0;
    for (std::size_t p = 1; p < k; ++p) {
      if (delta[p] < delta[best]) best = p;
    }
    if (delta[best] + shared < -tolerance) {
      is_medoid[medoids[best]] = false;
      is_medoid[xc] = true;
      medoids[best] = xc;
      a = assign(m, medoids);
      loss = removal_loss(a, k);
      since_swap = 0;
    }
  }
  return medoids;
}

std::vector<ClassifiedExample> manual_examples(const ApparatusDocument& doc,
                                               std::string_view category_id) {
  std::vector<ClassifiedExample> out;
  for (const auto& unit : doc.units) {
    for (const auto& pair : enumerate_pairs(unit)) {
      const Classification* c = unit.find_relation(pair.active_id, pair.passive_id);
      if (!c || !c->is_manual()) continue;
      if (std::find(c->category_ids.begin(), c->category_ids.end(), category_id) ==
          c->category_ids.end()) {
        continue;
      }
      std::optional<std::string> description = c->description;
      if (description && (description->empty() || is_reciprocal_description(*description))) {
        description.reset();
      }
      out.push_back(ClassifiedExample{pair, std::string(category_id), std::move(description)});
    }
  }
  return out;
}

namespace {

// Medoids of `group`, reported in document order.
std::vector<ClassifiedExample> representatives(const std::vector<ClassifiedExample>& group,
                                               std::size_t k) {
  if (group.size() <= k) return group;
  std::vector<std::string> signatures;
  signatures.reserve(group.size());
  for (const auto& e : group) signatures.push_back(pair_signature(e));
  auto medoids = k_medoids(DistanceMatrix::from_strings(signatures), k);
  std::sort(medoids.begin(), medoids.end());
  std::vector<ClassifiedExample> out;
  out.reserve(medoids.size());
  for (std::size_t idx : medoids) out.push_back(group[idx]);
  return out;
}

}  // namespace

std::vector<ClassifiedExample> select_examples(
    const ApparatusDocument& doc, std::string_view category_id, std::size_t k,
    const std::function<bool(const TransitionPair&)>& pool) {
  if (!doc.find_category(category_id)) {
    throw ValidationError("unknown category '" + std::string(category_id) + "'");
  }
  std::vector<ClassifiedExample> described, undescribed;
  for (auto& e : manual_examples(doc, category_id)) {
    if (pool && !pool(e.pair)) continue;
    (e.has_description() ? described : undescribed).push_back(std::move(e));
  }
  if (k == 0) return {};
  if (described.size() >= k) return representatives(described, k);
  std::vector<ClassifiedExample> out = std::move(described);
  auto filler = representatives(undescribed, k - out.size());
  out.insert(out.end(), filler.begin(), filler.end());
  return out;
}

}  // namespace rdgai
