// Copyright 2026 The fairnmf Authors.
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

#include "fairnmf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fairnmf/errors.hpp"

namespace fairnmf {

namespace {

void check_clustering(std::int64_t n, const Clustering& c) {
  if (static_cast<std::int64_t>(c.assignment.size()) != n) {
    throw validation_error("assignment length differs from node count");
  }
  if (c.k < 1) throw validation_error("cluster count must be positive");
  for (const auto l : c.assignment) {
    if (l < 0 || l >= c.k) throw validation_error("cluster id out of range");
  }
}

std::vector<std::vector<std::int64_t>> composition(const std::vector<std::int32_t>& groups,
                                                   std::int64_t m, const Clustering& c) {
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(c.k), std::vector<std::int64_t>(static_cast<std::size_t>(m), 0));
  for (std::size_t v = 0; v < c.assignment.size(); ++v) {
    const auto s = groups[v];
    if (s < 0 || s >= m) throw validation_error("group id out of range");
    counts[static_cast<std::size_t>(c.assignment[v])][static_cast<std::size_t>(s)] += 1;
  }
  return counts;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double modularity(const GraphDataset& g, const Clustering& c) {
  check_clustering(g.n, c);
  const auto& a = g.adjacency;
  if (a.nnz() == 0) throw validation_error("modularity undefined on an edgeless graph");

  const auto degrees = row_sums(a);
  double two_m = 0.0;
  for (const double d : degrees) two_m += d;

  std::vector<double> intra(static_cast<std::size_t>(c.k), 0.0);
  std::vector<double> degree_mass(static_cast<std::size_t>(c.k), 0.0);
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    degree_mass[static_cast<std::size_t>(c.assignment[static_cast<std::size_t>(r)])] +=
        degrees[static_cast<std::size_t>(r)];
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      const auto col = a.col_indices[static_cast<std::size_t>(t)];
      if (c.assignment[static_cast<std::size_t>(r)] ==
          c.assignment[static_cast<std::size_t>(col)]) {
        intra[static_cast<std::size_t>(c.assignment[static_cast<std::size_t>(r)])] +=
            a.values[static_cast<std::size_t>(t)];
      }
    }
  }
  // intra holds 2x the intra-cluster edge mass (both triangles counted).
  double q = 0.0;
  for (std::int32_t l = 0; l < c.k; ++l) {
    const double el = intra[static_cast<std::size_t>(l)] / two_m;
    const double dl = degree_mass[static_cast<std::size_t>(l)] / two_m;
    q += el - dl * dl;
  }
  return q;
}

double average_balance(const std::vector<std::int32_t>& groups, std::int64_t m,
                       const Clustering& c) {
  check_clustering(static_cast<std::int64_t>(groups.size()), c);
  if (m < 2) throw validation_error("balance needs at least two groups");
  const auto counts = composition(groups, m, c);
  double total = 0.0;
  for (std::int32_t l = 0; l < c.k; ++l) {
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = 0;
    for (const auto cnt : counts[static_cast<std::size_t>(l)]) {
      lo = std::min(lo, cnt);
      hi = std::max(hi, cnt);
    }
    // Min over ordered group pairs of count_s / count_s'; any zero count
    // (and any empty cluster) contributes zero.
    if (lo > 0) total += static_cast<double>(lo) / static_cast<double>(hi);
  }
  return total / static_cast<double>(c.k);
}

double average_balance(const GraphDataset& g, const Clustering& c, std::size_t attr) {
  if (attr >= g.attributes.size()) throw validation_error("attribute index out of range");
  return average_balance(g.attributes[attr], g.num_groups(attr), c);
}

double statistical_parity_deviation(const std::vector<std::int32_t>& groups,
                                    std::int64_t m, const Clustering& c,
                                    std::vector<std::int32_t>* empty_out) {
  check_clustering(static_cast<std::int64_t>(groups.size()), c);
  const auto counts = composition(groups, m, c);
  const double n = static_cast<double>(groups.size());
  std::vector<double> share(static_cast<std::size_t>(m), 0.0);
  for (const auto s : groups) share[static_cast<std::size_t>(s)] += 1.0 / n;

  double total = 0.0;
  std::int64_t included = 0;
  for (std::int32_t l = 0; l < c.k; ++l) {
    std::int64_t size = 0;
    for (const auto cnt : counts[static_cast<std::size_t>(l)]) size += cnt;
    if (size == 0) {
      if (empty_out != nullptr) empty_out->push_back(l);
      continue;  // undefined for an empty cluster; skipped and flagged
    }
    ++included;
    for (std::int64_t s = 0; s < m; ++s) {
      total += std::abs(static_cast<double>(counts[static_cast<std::size_t>(l)]
                                                  [static_cast<std::size_t>(s)]) /
                            static_cast<double>(size) -
                        share[static_cast<std::size_t>(s)]);
    }
  }
  return included == 0 ? 0.0 : total / static_cast<double>(included);
}

double statistical_parity_deviation(const GraphDataset& g, const Clustering& c,
                                    std::size_t attr, std::vector<std::int32_t>* empty_out) {
  if (attr >= g.attributes.size()) throw validation_error("attribute index out of range");
  return statistical_parity_deviation(g.attributes[attr], g.num_groups(attr), c, empty_out);
}

double ari(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  if (a.size() != b.size()) throw validation_error("partition lengths differ");
  if (a.empty()) throw validation_error("empty partitions");
  std::int32_t ka = 0;
  std::int32_t kb = 0;
  for (const auto l : a) ka = std::max(ka, l + 1);
  for (const auto l : b) kb = std::max(kb, l + 1);
  std::vector<std::vector<std::int64_t>> table(
      static_cast<std::size_t>(ka), std::vector<std::int64_t>(static_cast<std::size_t>(kb), 0));
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a[v] < 0 || b[v] < 0) throw validation_error("negative cluster id");
    table[static_cast<std::size_t>(a[v])][static_cast<std::size_t>(b[v])] += 1;
  }

  double index = 0.0;
  double sum_a = 0.0;
  double sum_b = 0.0;
  std::vector<std::int64_t> row(static_cast<std::size_t>(ka), 0);
  std::vector<std::int64_t> col(static_cast<std::size_t>(kb), 0);
  for (std::int32_t i = 0; i < ka; ++i) {
    for (std::int32_t j = 0; j < kb; ++j) {
      const auto nij = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      index += comb2(static_cast<double>(nij));
      row[static_cast<std::size_t>(i)] += nij;
      col[static_cast<std::size_t>(j)] += nij;
    }
  }
  for (const auto r : row) sum_a += comb2(static_cast<double>(r));
  for (const auto c : col) sum_b += comb2(static_cast<double>(c));
  const double pairs = comb2(static_cast<double>(a.size()));
  const double expected = sum_a * sum_b / pairs;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // both partitions trivial
  return (index - expected) / (maximum - expected);
}

double acc(const std::vector<std::int32_t>& pred, const std::vector<std::int32_t>& truth) {
  if (pred.size() != truth.size()) throw validation_error("partition lengths differ");
  if (pred.empty()) throw validation_error("empty partitions");
  std::int32_t kp = 0;
  std::int32_t kt = 0;
  for (const auto l : pred) kp = std::max(kp, l + 1);
  for (const auto l : truth) kt = std::max(kt, l + 1);
  const std::int64_t n = std::max(kp, kt);

  // Square agreement table padded with zeros, then an exact assignment by
  // the shortest-augmenting-path method on negated counts.
  std::vector<std::vector<std::int64_t>> agree(
      static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (std::size_t v = 0; v < pred.size(); ++v) {
    if (pred[v] < 0 || truth[v] < 0) throw validation_error("negative cluster id");
    agree[static_cast<std::size_t>(pred[v])][static_cast<std::size_t>(truth[v])] += 1;
  }

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> v(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> match(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> way(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::int64_t j0 = 0;
    std::vector<std::int64_t> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const std::int64_t i0 = match[static_cast<std::size_t>(j0)];
      std::int64_t delta = kInf;
      std::int64_t j1 = 0;
      for (std::int64_t j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const std::int64_t cur = -agree[static_cast<std::size_t>(i0 - 1)]
                                       [static_cast<std::size_t>(j - 1)] -
                                 u[static_cast<std::size_t>(i0)] -
                                 v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (std::int64_t j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const std::int64_t j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::int64_t agreeing = 0;
  for (std::int64_t j = 1; j <= n; ++j) {
    agreeing += agree[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)]
                     [static_cast<std::size_t>(j - 1)];
  }
  return static_cast<double>(agreeing) / static_cast<double>(pred.size());
}

MetricReport evaluate(const GraphDataset& g, const Clustering& c, std::size_t attr,
                      const std::vector<std::int32_t>* truth) {
  MetricReport r;
  r.Q = modularity(g, c);
  r.B_bar = average_balance(g, c, attr);
  r.delta_SP = statistical_parity_deviation(g, c, attr, &r.empty_clusters);
  r.per_cluster_composition = composition(g.attributes[attr], g.num_groups(attr), c);
  if (truth != nullptr) {
    r.ARI = ari(c.assignment, *truth);
    r.ACC = acc(c.assignment, *truth);
  }
  return r;
}

}  // namespace fairnmf
