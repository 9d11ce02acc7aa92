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

#ifndef FAIRNMF_NMTF_HPP_
#define FAIRNMF_NMTF_HPP_

#include <cstdint>
#include <vector>

#include "fairnmf/dense.hpp"
#include "fairnmf/sparse.hpp"

namespace fairnmf {

// Options shared by the shallow and deep fitters.
//
// The restart knobs default to a single plain trajectory. When raised they
// only add candidate trajectories and pick the best final objective; they
// never change the arithmetic of an individual trajectory.
struct FitOptions {
  double tol = 1e-5;    // relative objective change per sweep
  int max_iter = 500;   // fine-tuning sweep budget
  std::uint64_t seed = 0;

  // Pretraining stage budgets; negative means inherit tol / max_iter.
  double pretrain_tol = -1.0;
  int pretrain_max_iter = -1;

  // Independent re-inits of the whole pipeline, best kept.
  int restarts = 1;
  // Re-runs of the compression stages (layer 2..p) per restart, best kept.
  int chain_restarts = 1;
  // Fine-tuning sweeps used to score restart candidates before committing
  // to one; 0 scores candidates on their pretraining objective directly.
  int probe_sweeps = 0;
};

// Result of a shallow tri-factor fit A ~ H W H^T.
struct ShallowFactors {
  DenseMatrix H;  // n x r
  DenseMatrix W;  // r x r
  std::vector<double> objective_trace;
  int iterations = 0;
};

// Seeded factor init: entries i.i.d. uniform on (0,1) scaled by
// sqrt(mean(X) / r) so the initial reconstruction magnitude matches X.
DenseMatrix init_factor(class Rng& rng, std::int64_t rows, std::int64_t cols,
                        double scale);

// Plain symmetric nonnegative tri-factorization by multiplicative updates,
// run until the relative objective change drops below opts.tol or
// opts.max_iter sweeps. Input must be square with nonnegative entries.
ShallowFactors nmtf_fit(const SparseMatrix& x, std::int64_t r, const FitOptions& opts);
ShallowFactors nmtf_fit(const DenseMatrix& x, std::int64_t r, const FitOptions& opts);

}  // namespace fairnmf

#endif  // FAIRNMF_NMTF_HPP_
