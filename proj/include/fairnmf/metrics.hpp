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

#ifndef FAIRNMF_METRICS_HPP_
#define FAIRNMF_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "fairnmf/graph.hpp"

namespace fairnmf {

struct Clustering {
  std::vector<std::int32_t> assignment;  // per-node cluster id in [0, k)
  std::int32_t k = 0;
};

struct MetricReport {
  double Q = 0.0;
  double B_bar = 0.0;
  double delta_SP = 0.0;
  std::optional<double> ARI;
  std::optional<double> ACC;
  // k x m group counts per cluster.
  std::vector<std::vector<std::int64_t>> per_cluster_composition;
  // Clusters skipped by delta_SP because they are empty.
  std::vector<std::int32_t> empty_clusters;
};

// Newman modularity over the hard partition. Throws on an edgeless graph.
double modularity(const GraphDataset& g, const Clustering& c);

// Mean over clusters of the minimum pairwise group-count ratio
// |V_s n C_l| / |V_s' n C_l|. A cluster missing any group contributes 0,
// as does an empty cluster.
double average_balance(const GraphDataset& g, const Clustering& c, std::size_t attr);
double average_balance(const std::vector<std::int32_t>& groups, std::int64_t m,
                       const Clustering& c);

// Mean over nonempty clusters of the summed absolute deviation of group
// proportions from their global shares. Empty clusters are excluded; their
// ids are appended to empty_out when given.
double statistical_parity_deviation(const GraphDataset& g, const Clustering& c,
                                    std::size_t attr,
                                    std::vector<std::int32_t>* empty_out = nullptr);
double statistical_parity_deviation(const std::vector<std::int32_t>& groups,
                                    std::int64_t m, const Clustering& c,
                                    std::vector<std::int32_t>* empty_out = nullptr);

// Adjusted Rand index by the pair-count contingency formula.
double ari(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b);

// Best-matching accuracy: maximum agreeing fraction over injective label
// matchings, found by exact assignment on the contingency table. Handles
// differing cluster counts; unmatched labels count as wrong.
double acc(const std::vector<std::int32_t>& pred, const std::vector<std::int32_t>& truth);

// Full report against attribute attr, with ARI/ACC when truth is given.
MetricReport evaluate(const GraphDataset& g, const Clustering& c, std::size_t attr,
                      const std::vector<std::int32_t>* truth);

}  // namespace fairnmf

#endif  // FAIRNMF_METRICS_HPP_
