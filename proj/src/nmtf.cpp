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

#include "fairnmf/nmtf.hpp"

#include "fairnmf/errors.hpp"
#include "fairnmf/rng.hpp"
#include "src/engine_internal.hpp"

namespace fairnmf {

DenseMatrix init_factor(Rng& rng, std::int64_t rows, std::int64_t cols, double scale) {
  DenseMatrix m(rows, cols);
  // Row-major draw order; part of the reproducibility contract.
  for (std::int64_t i = 0; i < rows; ++i) {
    for (std::int64_t j = 0; j < cols; ++j) m(i, j) = rng.uniform01() * scale;
  }
  return m;
}

namespace {

ShallowFactors fit_view(const detail::MatView& view, std::int64_t r,
                        const FitOptions& opts) {
  if (opts.tol < 0.0 || opts.max_iter < 0) throw validation_error("bad stopping options");
  auto st = detail::run_stage(view, r, opts.seed, opts.tol, opts.max_iter);
  ShallowFactors out;
  out.H = std::move(st.h);
  out.W = std::move(st.w);
  out.iterations = st.iterations;
  out.objective_trace.reserve(st.trace.size());
  for (const auto& v : st.trace) out.objective_trace.push_back(v.total);
  return out;
}

}  // namespace

ShallowFactors nmtf_fit(const SparseMatrix& x, std::int64_t r, const FitOptions& opts) {
  for (const double v : x.values) {
    if (v < 0.0) throw validation_error("input matrix must be nonnegative");
  }
  return fit_view(detail::MatView(&x), r, opts);
}

ShallowFactors nmtf_fit(const DenseMatrix& x, std::int64_t r, const FitOptions& opts) {
  if ((x.array() < 0.0).any()) throw validation_error("input matrix must be nonnegative");
  return fit_view(detail::MatView(&x), r, opts);
}

}  // namespace fairnmf
