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

#ifndef FAIRNMF_DENSE_HPP_
#define FAIRNMF_DENSE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <utility>

namespace fairnmf {

// Row-major throughout: factor rows are nodes, and the sparse kernels stream
// over contiguous rows.
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kEps = 1e-12;

inline DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b) { return a * b; }

// a^T * b without forming the transpose.
inline DenseMatrix transpose_gemm(const DenseMatrix& a, const DenseMatrix& b) {
  return a.transpose() * b;
}

inline DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  return a.cwiseProduct(b);
}

// Elementwise a / max(b, eps). The floor keeps multiplicative updates finite
// when a denominator entry underflows to zero.
inline DenseMatrix elementwise_div(const DenseMatrix& a, const DenseMatrix& b,
                                   double eps = kEps) {
  return a.cwiseQuotient(b.cwiseMax(eps));
}

inline DenseMatrix elementwise_pow(const DenseMatrix& a, double e) {
  return a.array().pow(e).matrix();
}

// Splits x into (x_pos, x_neg) with x = x_pos - x_neg and both parts
// nonnegative.
inline std::pair<DenseMatrix, DenseMatrix> pos_neg_split(const DenseMatrix& x) {
  return {x.cwiseMax(0.0), (-x).cwiseMax(0.0)};
}

inline double frob_norm_sq(const DenseMatrix& a) { return a.squaredNorm(); }

inline bool has_nonfinite(const DenseMatrix& a) { return !a.allFinite(); }

}  // namespace fairnmf

#endif  // FAIRNMF_DENSE_HPP_
