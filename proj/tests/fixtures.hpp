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

#ifndef FAIRNMF_TESTS_FIXTURES_HPP_
#define FAIRNMF_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairnmf/dense.hpp"
#include "fairnmf/graph.hpp"
#include "fairnmf/rng.hpp"
#include "fairnmf/sparse.hpp"

namespace fixtures {

inline fairnmf::SparseMatrix csr_from_edges(std::int64_t n,
                                            const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  std::vector<double> vals;
  for (const auto& [u, v] : edges) {
    rows.push_back(u);
    cols.push_back(v);
    vals.push_back(1.0);
    rows.push_back(v);
    cols.push_back(u);
    vals.push_back(1.0);
  }
  return fairnmf::sparse_from_triplets(n, n, rows, cols, vals);
}

inline fairnmf::SparseMatrix csr_from_dense(const fairnmf::DenseMatrix& a) {
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  std::vector<double> vals;
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) {
        rows.push_back(i);
        cols.push_back(j);
        vals.push_back(a(i, j));
      }
    }
  }
  return fairnmf::sparse_from_triplets(a.rows(), a.cols(), rows, cols, vals);
}

// Two disjoint 5-cliques: nodes 0..4 and 5..9.
inline fairnmf::SparseMatrix two_cliques() {
  std::vector<std::pair<int, int>> edges;
  for (int base : {0, 5}) {
    for (int u = 0; u < 5; ++u) {
      for (int v = u + 1; v < 5; ++v) edges.emplace_back(base + u, base + v);
    }
  }
  return csr_from_edges(10, edges);
}

// 16 nodes, two demographic groups (10 in group 0, 6 in group 1). Group 0
// nodes 0..9 form a clique, group 1 nodes 10..15 form a clique, and twelve
// bridge edges tie each group-1 node to two group-0 nodes. Cutting by group
// gives the modularity optimum; the balanced split {0..4, 10..12} versus
// {5..9, 13..15} mixes the groups 5:3 in both sides.
struct BridgedCliques {
  fairnmf::GraphDataset data;
  std::vector<std::int32_t> balanced_split;
  std::vector<std::int32_t> group_split;
};

inline BridgedCliques bridged_cliques() {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 10; ++u) {
    for (int v = u + 1; v < 10; ++v) edges.emplace_back(u, v);
  }
  for (int u = 10; u < 16; ++u) {
    for (int v = u + 1; v < 16; ++v) edges.emplace_back(u, v);
  }
  const std::vector<std::pair<int, int>> bridges = {
      {10, 0}, {10, 1}, {11, 2}, {11, 3}, {12, 4}, {12, 0},
      {13, 5}, {13, 6}, {14, 7}, {14, 8}, {15, 9}, {15, 5}};
  edges.insert(edges.end(), bridges.begin(), bridges.end());

  BridgedCliques out;
  out.data.n = 16;
  out.data.adjacency = csr_from_edges(16, edges);
  out.data.node_ids.resize(16);
  for (int v = 0; v < 16; ++v) out.data.node_ids[static_cast<std::size_t>(v)] = std::to_string(v);
  std::vector<std::int32_t> groups(16, 0);
  for (int v = 10; v < 16; ++v) groups[static_cast<std::size_t>(v)] = 1;
  out.data.attribute_names = {"group"};
  out.data.attributes = {groups};
  out.data.group_labels = {{"M", "F"}};

  out.balanced_split.assign(16, 1);
  for (int v : {0, 1, 2, 3, 4, 10, 11, 12}) out.balanced_split[static_cast<std::size_t>(v)] = 0;
  out.group_split.assign(16, 0);
  for (int v = 10; v < 16; ++v) out.group_split[static_cast<std::size_t>(v)] = 1;
  return out;
}

inline fairnmf::DenseMatrix random_dense(std::int64_t r, std::int64_t c,
                                         std::uint64_t seed, double scale = 1.0) {
  fairnmf::Rng rng(seed);
  fairnmf::DenseMatrix m(r, c);
  for (std::int64_t i = 0; i < r; ++i) {
    for (std::int64_t j = 0; j < c; ++j) m(i, j) = scale * rng.uniform01();
  }
  return m;
}

// Random symmetric nonnegative matrix with an empty diagonal, as CSR.
inline fairnmf::SparseMatrix random_sym_graph(std::int64_t n, double density,
                                              std::uint64_t seed) {
  fairnmf::Rng rng(seed);
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  std::vector<double> vals;
  for (std::int64_t u = 0; u < n; ++u) {
    for (std::int64_t v = u + 1; v < n; ++v) {
      if (rng.uniform01() < density) {
        const double w = 0.5 + rng.uniform01();
        rows.push_back(u);
        cols.push_back(v);
        vals.push_back(w);
        rows.push_back(v);
        cols.push_back(u);
        vals.push_back(w);
      }
    }
  }
  return fairnmf::sparse_from_triplets(n, n, rows, cols, vals);
}

inline std::vector<std::int32_t> random_groups(std::int64_t n, std::int32_t m,
                                               std::uint64_t seed) {
  fairnmf::Rng rng(seed);
  std::vector<std::int32_t> g(static_cast<std::size_t>(n));
  for (auto& v : g) v = static_cast<std::int32_t>(rng.uniform_int(static_cast<std::uint64_t>(m)));
  // Guarantee every group appears at least once.
  for (std::int32_t s = 0; s < m; ++s) g[static_cast<std::size_t>(s)] = s;
  return g;
}

}  // namespace fixtures

#endif  // FAIRNMF_TESTS_FIXTURES_HPP_
