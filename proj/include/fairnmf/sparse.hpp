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

#ifndef FAIRNMF_SPARSE_HPP_
#define FAIRNMF_SPARSE_HPP_

#include <cstdint>
#include <vector>

#include "fairnmf/dense.hpp"

namespace fairnmf {

// Compressed sparse row matrix.
//
// Invariants (checked by validate):
//   * row_offsets has n_rows + 1 entries, is nondecreasing, starts at 0 and
//     ends at nnz;
//   * col_indices are strictly increasing within each row;
//   * adjacency matrices store both triangles explicitly and have an empty
//     diagonal.
struct SparseMatrix {
  std::int64_t n_rows = 0;
  std::int64_t n_cols = 0;
  std::vector<std::int64_t> row_offsets;
  std::vector<std::int64_t> col_indices;
  std::vector<double> values;

  std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }
};

// Builds a CSR matrix from unordered (row, col, value) triplets. Duplicate
// coordinates are summed.
SparseMatrix sparse_from_triplets(
    std::int64_t n_rows, std::int64_t n_cols,
    const std::vector<std::int64_t>& rows, const std::vector<std::int64_t>& cols,
    const std::vector<double>& vals);

// Throws validation_error when a structural invariant is broken. Set
// require_symmetric_no_diagonal for adjacency matrices.
void validate(const SparseMatrix& a, bool require_symmetric_no_diagonal = false);

// y = a * x, streaming row by row.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

DenseMatrix to_dense(const SparseMatrix& a);

double frob_norm_sq(const SparseMatrix& a);

// Row sums (weighted degrees for an adjacency matrix).
std::vector<double> row_sums(const SparseMatrix& a);

}  // namespace fairnmf

#endif  // FAIRNMF_SPARSE_HPP_
