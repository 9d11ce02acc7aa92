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

#include "src/engine_internal.hpp"

#include <cmath>
#include <string>

#include "fairnmf/errors.hpp"
#include "fairnmf/nmtf.hpp"
#include "fairnmf/rng.hpp"

namespace fairnmf {
namespace detail {

std::int64_t MatView::rows() const { return sp_ ? sp_->n_rows : dn_->rows(); }

std::int64_t MatView::cols() const { return sp_ ? sp_->n_cols : dn_->cols(); }

double MatView::frob2() const { return sp_ ? frob_norm_sq(*sp_) : frob_norm_sq(*dn_); }

double MatView::mean() const {
  if (sp_) {
    double s = 0.0;
    for (const double v : sp_->values) s += v;
    return s / (static_cast<double>(sp_->n_rows) * static_cast<double>(sp_->n_cols));
  }
  return dn_->mean();
}

DenseMatrix MatView::mul(const DenseMatrix& x) const {
  return sp_ ? spmm(*sp_, x) : DenseMatrix(*dn_ * x);
}

DenseMatrix MatView::tmul(const DenseMatrix& x) const {
  if (!sp_) return dn_->transpose() * x;
  // Scatter kernel: row r of A contributes to output row c per entry (r, c).
  if (sp_->n_rows != x.rows()) throw validation_error("tmul shape mismatch");
  DenseMatrix y = DenseMatrix::Zero(sp_->n_cols, x.cols());
  const std::int64_t w = x.cols();
  for (std::int64_t r = 0; r < sp_->n_rows; ++r) {
    const double* xr = x.row(r).data();
    const auto lo = sp_->row_offsets[static_cast<std::size_t>(r)];
    const auto hi = sp_->row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      const double v = sp_->values[static_cast<std::size_t>(t)];
      double* yr = y.row(sp_->col_indices[static_cast<std::size_t>(t)]).data();
      for (std::int64_t j = 0; j < w; ++j) yr[j] += v * xr[j];
    }
  }
  return y;
}

void update_layer_core(const MatView& a, FactorState s, std::size_t i,
                       const DenseMatrix* prefix, const DenseMatrix* suffix,
                       const DenseMatrix* f, double lam) {
  const DenseMatrix& psi = *s.psi;
  const DenseMatrix& w = *s.w;

  const DenseMatrix psi_w = psi * w;
  const DenseMatrix psi_wt = psi * w.transpose();
  DenseMatrix num = a.tmul(psi_w) + a.mul(psi_wt);

  const DenseMatrix gram = psi.transpose() * psi;
  DenseMatrix den = psi * (w.transpose() * gram * w + w * gram * w.transpose());

  if (lam != 0.0 && f != nullptr) {
    // Fairness gradient split through F (F^T Psi); F F^T is never formed.
    const DenseMatrix fg = *f * (f->transpose() * psi);
    num += lam * (-fg).cwiseMax(0.0);
    den += lam * fg.cwiseMax(0.0);
  }

  if (prefix != nullptr) {
    num = prefix->transpose() * num;
    den = prefix->transpose() * den;
  }
  if (suffix != nullptr) {
    num = num * suffix->transpose();
    den = den * suffix->transpose();
  }

  DenseMatrix& h = (*s.layers)[i];
  h = hadamard(h, elementwise_pow(elementwise_div(num, den), 0.25));
  if (has_nonfinite(h)) {
    throw numeric_error("layer update produced a non-finite entry (layer " +
                        std::to_string(i + 1) + ", lambda " + std::to_string(lam) + ")");
  }
}

void update_w_core(const MatView& a, FactorState s) {
  const DenseMatrix& psi = *s.psi;
  const DenseMatrix abar = psi.transpose() * a.mul(psi);
  const DenseMatrix gram = psi.transpose() * psi;
  DenseMatrix& w = *s.w;
  w = hadamard(w, elementwise_div(abar, gram * w * gram));
  if (has_nonfinite(w)) {
    throw numeric_error("interaction update produced a non-finite entry");
  }
}

void sweep_core(const MatView& a, FactorState s, const DenseMatrix* f, double lam) {
  const auto& layers = *s.layers;
  const std::size_t p = layers.size();

  // suffix[i] = H_{i+1} ... H_p (0-based; nullptr means identity). Later
  // layers are untouched while layer i updates, so one cache per sweep is
  // exact.
  std::vector<DenseMatrix> suffix(p);
  for (std::size_t i = p - 1; i-- > 0;) {
    suffix[i] = (i + 1 == p - 1) ? layers[i + 1] : DenseMatrix(layers[i + 1] * suffix[i + 1]);
  }

  DenseMatrix prefix;  // H_1 ... H_i after layer i updates
  for (std::size_t i = 0; i < p; ++i) {
    const DenseMatrix* pre = (i == 0) ? nullptr : &prefix;
    const DenseMatrix* suf = (i + 1 == p) ? nullptr : &suffix[i];
    update_layer_core(a, s, i, pre, suf, f, lam);

    prefix = (i == 0) ? layers[i] : DenseMatrix(prefix * layers[i]);
    *s.psi = (i + 1 == p) ? prefix : DenseMatrix(prefix * suffix[i]);

    update_w_core(a, s);
  }
}

ObjectiveValue objective_core(const MatView& a, double frob_a2, const DenseMatrix& psi,
                              const DenseMatrix& w, const DenseMatrix* f, double lam) {
  const DenseMatrix abar = psi.transpose() * a.mul(psi);
  const DenseMatrix gram = psi.transpose() * psi;
  // ||A - Psi W Psi^T||^2 = ||A||^2 - 2 <Abar, W> + <S W, W S>.
  ObjectiveValue v;
  v.utility = frob_a2 - 2.0 * abar.cwiseProduct(w).sum() +
              (gram * w).cwiseProduct(w * gram).sum();
  v.penalty = (f != nullptr) ? (f->transpose() * psi).squaredNorm() : 0.0;
  v.total = v.utility + lam * v.penalty;
  if (!std::isfinite(v.total)) {
    throw numeric_error("objective is not finite (lambda " + std::to_string(lam) + ")");
  }
  return v;
}

LoopResult run_loop(const MatView& a, double frob_a2, FactorState s,
                    const DenseMatrix* f, double lam, double tol, int max_iter,
                    double prev_total) {
  LoopResult result;
  for (int it = 0; it < max_iter; ++it) {
    try {
      sweep_core(a, s, f, lam);
    } catch (const numeric_error& e) {
      throw numeric_error(std::string(e.what()) + " at sweep " +
                          std::to_string(result.iterations + 1));
    }
    const ObjectiveValue cur = objective_core(a, frob_a2, *s.psi, *s.w, f, lam);
    result.trace.push_back(cur);
    result.iterations += 1;
    const double rel =
        std::abs(prev_total - cur.total) / std::max(std::abs(prev_total), 1e-30);
    prev_total = cur.total;
    if (rel < tol) break;
  }
  return result;
}

StageResult run_stage(const MatView& a, std::int64_t r, std::uint64_t seed, double tol,
                      int max_iter) {
  if (a.rows() != a.cols()) throw validation_error("factorization input must be square");
  if (r < 1 || r > a.rows()) throw validation_error("rank out of range");

  Rng rng(seed);
  const double scale = std::sqrt(std::max(a.mean(), 0.0) / static_cast<double>(r));
  StageResult st;
  st.h = init_factor(rng, a.rows(), r, scale);
  st.w = init_factor(rng, r, r, scale);

  std::vector<DenseMatrix> layers{st.h};
  DenseMatrix psi = layers[0];
  FactorState state{&layers, &st.w, &psi};
  const double frob_a2 = a.frob2();
  const double start =
      objective_core(a, frob_a2, psi, st.w, nullptr, 0.0).total;
  auto loop = run_loop(a, frob_a2, state, nullptr, 0.0, tol, max_iter, start);
  st.h = std::move(layers[0]);
  st.trace = std::move(loop.trace);
  st.iterations = loop.iterations;
  return st;
}

}  // namespace detail
}  // namespace fairnmf
