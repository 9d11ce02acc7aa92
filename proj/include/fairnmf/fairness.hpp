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

#ifndef FAIRNMF_FAIRNESS_HPP_
#define FAIRNMF_FAIRNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "fairnmf/dense.hpp"
#include "fairnmf/graph.hpp"

namespace fairnmf {

// Group-balance constraint matrix over M node groups. Column g of F is the
// centered indicator z_g - (n_g / n) * 1 for g = 0..M-2; the last group is
// dropped because the columns sum to zero. F^T Psi == 0 exactly when every
// cluster holds the groups in population proportion.
struct FairnessMatrix {
  DenseMatrix F;  // n x (M - 1)
  std::vector<std::int32_t> groups;        // composed group id per node
  std::vector<std::int64_t> group_sizes;   // size M
  std::vector<std::string> group_names;    // size M
};

FairnessMatrix build_fairness_matrix(const GraphDataset& g, std::size_t attr);

// Crosses several attributes into composed groups (one per observed value
// combination; empty combinations are pruned before the M-1 truncation).
FairnessMatrix build_intersectional_matrix(const GraphDataset& g,
                                           const std::vector<std::size_t>& attrs);

// ||F^T Psi||_F^2 via the (M-1) x k product; never forms F F^T.
double fairness_penalty(const FairnessMatrix& fm, const DenseMatrix& psi);

}  // namespace fairnmf

#endif  // FAIRNMF_FAIRNESS_HPP_
