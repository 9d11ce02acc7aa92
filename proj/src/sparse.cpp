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

#include "fairnmf/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fairnmf/errors.hpp"

namespace fairnmf {

SparseMatrix sparse_from_triplets(std::int64_t n_rows, std::int64_t n_cols,
                                  const std::vector<std::int64_t>& rows,
                                  const std::vector<std::int64_t>& cols,
                                  const std::vector<double>& vals) {
  if (rows.size() != cols.size() || rows.size() != vals.size()) {
    throw validation_error("triplet arrays must have equal length");
  }
  const std::size_t nnz_in = rows.size();
  for (std::size_t t = 0; t < nnz_in; ++t) {
    if (rows[t] < 0 || rows[t] >= n_rows || cols[t] < 0 || cols[t] >= n_cols) {
      throw validation_error("triplet coordinate out of range");
    }
  }

  std::vector<std::size_t> order(nnz_in);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return cols[a] < cols[b];
  });

  SparseMatrix out;
  out.n_rows = n_rows;
  out.n_cols = n_cols;
  out.row_offsets.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  out.col_indices.reserve(nnz_in);
  out.values.reserve(nnz_in);

  std::int64_t last_row = -1;
  std::int64_t last_col = -1;
  for (std::size_t idx = 0; idx < nnz_in; ++idx) {
    const std::size_t t = order[idx];
    if (rows[t] == last_row && cols[t] == last_col) {
      out.values.back() += vals[t];  // duplicate coordinate, accumulate
      continue;
    }
    last_row = rows[t];
    last_col = cols[t];
    out.col_indices.push_back(cols[t]);
    out.values.push_back(vals[t]);
    out.row_offsets[static_cast<std::size_t>(rows[t]) + 1] += 1;
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(n_rows); ++r) {
    out.row_offsets[r + 1] += out.row_offsets[r];
  }
  return out;
}

void validate(const SparseMatrix& a, bool require_symmetric_no_diagonal) {
  if (a.n_rows < 0 || a.n_cols < 0) throw validation_error("negative dimension");
  if (a.row_offsets.size() != static_cast<std::size_t>(a.n_rows) + 1) {
    throw validation_error("row_offsets has wrong length");
  }
  if (a.row_offsets.front() != 0 || a.row_offsets.back() != a.nnz()) {
    throw validation_error("row_offsets endpoints disagree with nnz");
  }
  if (a.col_indices.size() != a.values.size()) {
    throw validation_error("col_indices and values lengths differ");
  }
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    if (lo > hi) throw validation_error("row_offsets not nondecreasing");
    for (std::int64_t t = lo; t < hi; ++t) {
      const auto c = a.col_indices[static_cast<std::size_t>(t)];
      if (c < 0 || c >= a.n_cols) throw validation_error("column index out of range");
      if (t > lo && c <= a.col_indices[static_cast<std::size_t>(t) - 1]) {
        throw validation_error("column indices not strictly increasing within row " +
                               std::to_string(r));
      }
      if (require_symmetric_no_diagonal && c == r) {
        throw validation_error("diagonal entry in adjacency at row " + std::to_string(r));
      }
    }
  }
  if (require_symmetric_no_diagonal) {
    if (a.n_rows != a.n_cols) throw validation_error("adjacency must be square");
    // Every (r, c, v) needs a matching (c, r, v).
    for (std::int64_t r = 0; r < a.n_rows; ++r) {
      const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
      const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
      for (std::int64_t t = lo; t < hi; ++t) {
        const auto c = a.col_indices[static_cast<std::size_t>(t)];
        const auto clo = a.row_offsets[static_cast<std::size_t>(c)];
        const auto chi = a.row_offsets[static_cast<std::size_t>(c) + 1];
        const auto* begin = a.col_indices.data() + clo;
        const auto* end = a.col_indices.data() + chi;
        const auto* it = std::lower_bound(begin, end, r);
        if (it == end || *it != r ||
            a.values[static_cast<std::size_t>(clo + (it - begin))] !=
                a.values[static_cast<std::size_t>(t)]) {
          throw validation_error("adjacency not symmetric at (" + std::to_string(r) +
                                 ", " + std::to_string(c) + ")");
        }
      }
    }
  }
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.n_cols != x.rows()) throw validation_error("spmm shape mismatch");
  DenseMatrix y = DenseMatrix::Zero(a.n_rows, x.cols());
  const std::int64_t w = x.cols();
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    double* yr = y.row(r).data();
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      const double v = a.values[static_cast<std::size_t>(t)];
      const double* xr = x.row(a.col_indices[static_cast<std::size_t>(t)]).data();
      for (std::int64_t j = 0; j < w; ++j) yr[j] += v * xr[j];
    }
  }
  return y;
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d = DenseMatrix::Zero(a.n_rows, a.n_cols);
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      d(r, a.col_indices[static_cast<std::size_t>(t)]) =
          a.values[static_cast<std::size_t>(t)];
    }
  }
  return d;
}

double frob_norm_sq(const SparseMatrix& a) {
  double s = 0.0;
  for (const double v : a.values) s += v * v;
  return s;
}

std::vector<double> row_sums(const SparseMatrix& a) {
  std::vector<double> sums(static_cast<std::size_t>(a.n_rows), 0.0);
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      sums[static_cast<std::size_t>(r)] += a.values[static_cast<std::size_t>(t)];
    }
  }
  return sums;
}

}  // namespace fairnmf
