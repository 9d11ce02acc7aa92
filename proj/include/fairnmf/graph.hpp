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

#ifndef FAIRNMF_GRAPH_HPP_
#define FAIRNMF_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairnmf/sparse.hpp"

namespace fairnmf {

// Undirected graph with optional node attributes and an optional reference
// clustering. Node ids are dense [0, n); node_ids keeps the original tokens
// in first-appearance order for round-tripping external files.
struct GraphDataset {
  std::int64_t n = 0;
  SparseMatrix adjacency;
  std::vector<std::string> node_ids;
  std::vector<std::string> attribute_names;
  // attributes[a][v] is the group id of node v under attribute a; ids are
  // dense [0, num_groups) in first-appearance order of group_labels[a].
  std::vector<std::vector<std::int32_t>> attributes;
  std::vector<std::vector<std::string>> group_labels;
  // Reference clustering, empty when unknown.
  std::vector<std::int32_t> reference_clusters;

  std::int64_t num_groups(std::size_t attr) const {
    return static_cast<std::int64_t>(group_labels[attr].size());
  }
};

// Planted-partition generator parameters. Blocks get near-equal sizes and
// each block is split across the m groups by group_proportions; both splits
// use the largest remainder rule.
struct SbmSpec {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t m = 2;
  double p_in = 0.0;
  double p_out = 0.0;
  std::vector<double> group_proportions;
  std::uint64_t seed = 0;
};

// Apportions total into parts proportional to weights, largest remainder
// rule, ties to the lower index. Weights need not sum to one.
std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            const std::vector<double>& weights);

// Samples each unordered node pair exactly once with probability p_in
// (same block) or p_out (different blocks). The result carries the planted
// blocks in reference_clusters and one attribute named "group". Throws
// validation_error when a block is too small to receive every group at
// least one member, or on out-of-range probabilities.
GraphDataset generate_sbm(const SbmSpec& spec);

// Reads a whitespace-separated edge list, one "u v" pair per line, with '#'
// comment lines. Node tokens may be arbitrary strings; they are densified in
// first-appearance order. Duplicate edges and self-loops are dropped.
GraphDataset load_edge_list(const std::string& path);

// Reads "node,attr1[,attr2,...]" with a header row. A column named
// "cluster" populates reference_clusters instead of an attribute. Every
// graph node must appear exactly once.
void load_attribute_csv(GraphDataset& g, const std::string& path);

// Fraction of edges whose endpoints share the same value of attribute attr.
double homophily(const GraphDataset& g, std::size_t attr);

}  // namespace fairnmf

#endif  // FAIRNMF_GRAPH_HPP_
