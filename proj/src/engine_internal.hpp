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
//
// Internal solver engine. Both the shallow and the deep fitters run every
// sweep through the functions here; there is deliberately no second
// implementation of any update rule.

#ifndef FAIRNMF_SRC_ENGINE_INTERNAL_HPP_
#define FAIRNMF_SRC_ENGINE_INTERNAL_HPP_

#include <cstdint>
#include <vector>

#include "fairnmf/deep.hpp"
#include "fairnmf/dense.hpp"
#include "fairnmf/sparse.hpp"

namespace fairnmf {
namespace detail {

// Operand of one factorization stage: the sparse adjacency for the main
// problem, a dense W from the previous stage during pretraining.
class MatView {
 public:
  explicit MatView(const SparseMatrix* sp) : sp_(sp) {}
  explicit MatView(const DenseMatrix* dn) : dn_(dn) {}

  std::int64_t rows() const;
  std::int64_t cols() const;
  double frob2() const;
  double mean() const;
  DenseMatrix mul(const DenseMatrix& x) const;   // A x
  DenseMatrix tmul(const DenseMatrix& x) const;  // A^T x

 private:
  const SparseMatrix* sp_ = nullptr;
  const DenseMatrix* dn_ = nullptr;
};

// Factor state threaded through the sweep loop. layers/W live in the
// caller's DeepModel or ShallowFactors; psi is the cached layer product.
struct FactorState {
  std::vector<DenseMatrix>* layers = nullptr;
  DenseMatrix* w = nullptr;
  DenseMatrix* psi = nullptr;
};

// One multiplicative update of layer i (0-based) given its prefix product
// H_1..H_{i-1} (nullptr for identity) and suffix product H_{i+1}..H_p
// (nullptr for identity). psi must be fresh; it is left stale.
void update_layer_core(const MatView& a, FactorState s, std::size_t i,
                       const DenseMatrix* prefix, const DenseMatrix* suffix,
                       const DenseMatrix* f, double lam);

// One multiplicative update of W; psi must be fresh.
void update_w_core(const MatView& a, FactorState s);

// Full sweep: ascending layer updates, W refreshed after every layer, psi
// maintained incrementally.
void sweep_core(const MatView& a, FactorState s, const DenseMatrix* f, double lam);

ObjectiveValue objective_core(const MatView& a, double frob_a2, const DenseMatrix& psi,
                              const DenseMatrix& w, const DenseMatrix* f, double lam);

struct LoopResult {
  std::vector<ObjectiveValue> trace;
  int iterations = 0;
};

// Sweeps until the relative change of the total objective drops below tol
// or max_iter sweeps ran. prev_total seeds the first relative-change test;
// pass the objective of the initial state (or of the last sweep when
// continuing an interrupted loop).
LoopResult run_loop(const MatView& a, double frob_a2, FactorState s,
                    const DenseMatrix* f, double lam, double tol, int max_iter,
                    double prev_total);

// Seeded factor pair for a stage of width r, then the stopping loop at
// lambda = 0. The shared primitive behind nmtf_fit and pretraining.
struct StageResult {
  DenseMatrix h;
  DenseMatrix w;
  std::vector<ObjectiveValue> trace;
  int iterations = 0;
};
StageResult run_stage(const MatView& a, std::int64_t r, std::uint64_t seed, double tol,
                      int max_iter);

}  // namespace detail
}  // namespace fairnmf

#endif  // FAIRNMF_SRC_ENGINE_INTERNAL_HPP_
