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

#ifndef FAIRNMF_DEEP_HPP_
#define FAIRNMF_DEEP_HPP_

#include <cstdint>
#include <tuple>
#include <vector>

#include "fairnmf/dense.hpp"
#include "fairnmf/fairness.hpp"
#include "fairnmf/nmtf.hpp"
#include "fairnmf/sparse.hpp"

namespace fairnmf {

// Factor widths r_0 = n >= r_1 >= ... >= r_p = k.
struct LayerSchedule {
  std::vector<std::int64_t> sizes;

  int p() const { return static_cast<int>(sizes.size()) - 1; }
  std::int64_t n() const { return sizes.front(); }
  std::int64_t k() const { return sizes.back(); }
};

// [n, 64, k] up to 10^4 nodes, [n, 256, 64, k] above. Widths are clamped so
// the schedule stays nonincreasing on small graphs.
LayerSchedule default_schedule(std::int64_t n, std::int64_t k);

void validate(const LayerSchedule& s);

// Factor chain A ~ Psi W Psi^T with Psi = H_1 ... H_p.
struct DeepModel {
  std::vector<DenseMatrix> layers;  // H_i is r_{i-1} x r_i
  DenseMatrix W;                    // k x k
  DenseMatrix Psi;                  // n x k, cached product of the layers
  LayerSchedule schedule;

  // Recomputes the cached Psi from the layers.
  void refresh_psi();
};

struct FitReport {
  DeepModel model;
  std::vector<double> objective_trace;  // one entry per fine-tuning sweep
  std::vector<double> utility_trace;
  std::vector<double> penalty_trace;
  int iterations = 0;
  std::vector<std::int32_t> hard_assignment;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  LayerSchedule schedule;
};

struct ObjectiveValue {
  double total = 0.0;
  double utility = 0.0;
  double penalty = 0.0;
};

// Layer-wise pretraining: H_1, W_1 from a shallow fit of A at width r_1,
// then H_i, W_i from a shallow fit of W_{i-1} at width r_i. Intermediate
// W_i (i < p) are discarded.
DeepModel pretrain(const SparseMatrix& a, const LayerSchedule& schedule,
                   const FitOptions& opts);

// One multiplicative update of H_i (1-based layer index). Pass f = nullptr
// or lambda = 0 for the unregularized rule. Psi must be fresh on entry and
// is refreshed before returning. Aborts with a diagnostic when the update
// produces a non-finite entry.
void update_hi(DeepModel& model, int i, const SparseMatrix& a,
               const FairnessMatrix* f, double lambda);

// One multiplicative update of W: W <- W o (Psi^T A Psi) / (S W S) with
// S = Psi^T Psi. Psi must be fresh.
void update_wp(DeepModel& model, const SparseMatrix& a);

// Eq-style decomposition: total = utility + lambda * penalty where utility
// is ||A - Psi W Psi^T||_F^2 expanded through k-dimensional Gram products
// (A is never densified) and penalty is ||F^T Psi||_F^2.
ObjectiveValue objective(const SparseMatrix& a, const DeepModel& model,
                         const FairnessMatrix* f, double lambda);

// Two-phase driver: pretrain, then sweep update_hi over i = 1..p with
// update_wp after each layer, until the relative objective change drops
// below opts.tol or opts.max_iter sweeps. Hard assignment is the row-wise
// argmax of raw Psi, ties toward the lower cluster index.
FitReport fit(const SparseMatrix& a, const FairnessMatrix* f,
              const LayerSchedule& schedule, double lambda, const FitOptions& opts);

// The p = 1 case of fit; kept as a thin alias so the shallow and deep paths
// cannot drift apart.
FitReport shallow_fair_fit(const SparseMatrix& a, std::int64_t k,
                           const FairnessMatrix* f, double lambda,
                           const FitOptions& opts);

std::vector<std::int32_t> hard_assignment(const DenseMatrix& psi);

}  // namespace fairnmf

#endif  // FAIRNMF_DEEP_HPP_
