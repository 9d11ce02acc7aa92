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

#include "fairnmf/deep.hpp"

#include <string>
#include <utility>

#include "fairnmf/errors.hpp"
#include "src/engine_internal.hpp"

namespace fairnmf {

namespace {

// Seed strides separating restart, chain and stage streams. Restart ro,
// chain c, stage i (1-based) draw from seed + ro + kChainStride*c +
// kStageStride*(i-1), so the default single trajectory uses the seed
// itself for stage 1.
constexpr std::uint64_t kStageStride = 7919;
constexpr std::uint64_t kChainStride = 1000003;

const DenseMatrix* fairness_cols(const FairnessMatrix* f) {
  return f == nullptr ? nullptr : &f->F;
}

void check_fit_inputs(const SparseMatrix& a, const FairnessMatrix* f,
                      const LayerSchedule& schedule, double lambda,
                      const FitOptions& opts) {
  validate(schedule);
  if (a.n_rows != a.n_cols) throw validation_error("adjacency must be square");
  if (schedule.n() != a.n_rows) throw validation_error("schedule width 0 must equal n");
  if (f != nullptr && f->F.rows() != a.n_rows) {
    throw validation_error("fairness matrix row count differs from n");
  }
  if (!(lambda >= 0.0)) throw validation_error("lambda must be >= 0");
  if (opts.tol < 0.0 || opts.max_iter < 0 || opts.restarts < 1 ||
      opts.chain_restarts < 1 || opts.probe_sweeps < 0) {
    throw validation_error("bad fit options");
  }
}

DenseMatrix left_product(const std::vector<DenseMatrix>& layers) {
  DenseMatrix psi = layers.front();
  for (std::size_t i = 1; i < layers.size(); ++i) psi = DenseMatrix(psi * layers[i]);
  return psi;
}

// Pretraining chain for one (restart, chain) pair: the shared stage-1
// factors, then a shallow fit of each W_{i-1} at the next width.
struct Chain {
  std::vector<DenseMatrix> layers;
  DenseMatrix w;
};

Chain run_chain(const detail::StageResult& stage1, const SparseMatrix& a,
                const LayerSchedule& schedule, std::uint64_t chain_seed, double tol,
                int max_iter) {
  (void)a;
  Chain chain;
  chain.layers.push_back(stage1.h);
  chain.w = stage1.w;
  for (int i = 2; i <= schedule.p(); ++i) {
    const DenseMatrix prev = std::move(chain.w);
    auto st = detail::run_stage(detail::MatView(&prev),
                                schedule.sizes[static_cast<std::size_t>(i)],
                                chain_seed + kStageStride * static_cast<std::uint64_t>(i - 1),
                                tol, max_iter);
    chain.layers.push_back(std::move(st.h));
    chain.w = std::move(st.w);
  }
  return chain;
}

}  // namespace

LayerSchedule default_schedule(std::int64_t n, std::int64_t k) {
  LayerSchedule s;
  s.sizes.push_back(n);
  const std::vector<std::int64_t> widths =
      n <= 10000 ? std::vector<std::int64_t>{64} : std::vector<std::int64_t>{256, 64};
  for (const auto w : widths) {
    if (w < n && w > k) s.sizes.push_back(w);
  }
  s.sizes.push_back(k);
  return s;
}

void validate(const LayerSchedule& s) {
  if (s.sizes.size() < 2) throw validation_error("schedule needs at least [n, k]");
  for (std::size_t i = 0; i < s.sizes.size(); ++i) {
    if (s.sizes[i] < 1) throw validation_error("schedule widths must be positive");
    if (i > 0 && s.sizes[i] > s.sizes[i - 1]) {
      throw validation_error("schedule widths must be nonincreasing");
    }
  }
}

void DeepModel::refresh_psi() { Psi = left_product(layers); }

DeepModel pretrain(const SparseMatrix& a, const LayerSchedule& schedule,
                   const FitOptions& opts) {
  check_fit_inputs(a, nullptr, schedule, 0.0, opts);
  const double tol = opts.pretrain_tol >= 0.0 ? opts.pretrain_tol : opts.tol;
  const int max_iter = opts.pretrain_max_iter >= 0 ? opts.pretrain_max_iter : opts.max_iter;

  const auto stage1 = detail::run_stage(detail::MatView(&a), schedule.sizes[1], opts.seed,
                                        tol, max_iter);
  auto chain = run_chain(stage1, a, schedule, opts.seed, tol, max_iter);

  DeepModel model;
  model.schedule = schedule;
  model.layers = std::move(chain.layers);
  model.W = std::move(chain.w);
  model.refresh_psi();
  return model;
}

void update_hi(DeepModel& model, int i, const SparseMatrix& a, const FairnessMatrix* f,
               double lambda) {
  const int p = model.schedule.p();
  if (i < 1 || i > p) throw validation_error("layer index out of range");
  if (f != nullptr && f->F.rows() != a.n_rows) {
    throw validation_error("fairness matrix row count differs from n");
  }

  // Prefix and suffix products around layer i, associated exactly as the
  // sweep loop associates them.
  DenseMatrix prefix;
  for (int j = 0; j + 1 < i; ++j) {
    prefix = (j == 0) ? model.layers[static_cast<std::size_t>(j)]
                      : DenseMatrix(prefix * model.layers[static_cast<std::size_t>(j)]);
  }
  DenseMatrix suffix;
  for (int j = p - 1; j >= i; --j) {
    suffix = (j == p - 1)
                 ? model.layers[static_cast<std::size_t>(j)]
                 : DenseMatrix(model.layers[static_cast<std::size_t>(j)] * suffix);
  }

  detail::FactorState state{&model.layers, &model.W, &model.Psi};
  detail::update_layer_core(detail::MatView(&a), state, static_cast<std::size_t>(i - 1),
                            i == 1 ? nullptr : &prefix, i == p ? nullptr : &suffix,
                            fairness_cols(f), lambda);

  DenseMatrix head = (i == 1) ? model.layers[0]
                              : DenseMatrix(prefix * model.layers[static_cast<std::size_t>(i - 1)]);
  model.Psi = (i == p) ? std::move(head) : DenseMatrix(head * suffix);
}

void update_wp(DeepModel& model, const SparseMatrix& a) {
  detail::FactorState state{&model.layers, &model.W, &model.Psi};
  detail::update_w_core(detail::MatView(&a), state);
}

ObjectiveValue objective(const SparseMatrix& a, const DeepModel& model,
                         const FairnessMatrix* f, double lambda) {
  if (f != nullptr && f->F.rows() != a.n_rows) {
    throw validation_error("fairness matrix row count differs from n");
  }
  return detail::objective_core(detail::MatView(&a), frob_norm_sq(a), model.Psi, model.W,
                                fairness_cols(f), lambda);
}

FitReport fit(const SparseMatrix& a, const FairnessMatrix* f,
              const LayerSchedule& schedule, double lambda, const FitOptions& opts) {
  check_fit_inputs(a, f, schedule, lambda, opts);
  const double ptol = opts.pretrain_tol >= 0.0 ? opts.pretrain_tol : opts.tol;
  const int piter = opts.pretrain_max_iter >= 0 ? opts.pretrain_max_iter : opts.max_iter;

  const detail::MatView view(&a);
  const double frob_a2 = view.frob2();
  const DenseMatrix* fcols = fairness_cols(f);
  const int p = schedule.p();
  const int chains = p == 1 ? 1 : opts.chain_restarts;

  struct Candidate {
    std::vector<DenseMatrix> layers;
    DenseMatrix w;
    DenseMatrix psi;
    std::vector<ObjectiveValue> probe_trace;
    double score = 0.0;
  };

  // Every candidate trajectory is pretrained the same way the plain
  // pipeline is; extra restarts only add more candidates, scored after
  // probe_sweeps fine-tuning sweeps (or on the pretraining objective when
  // probing is off), and the best score wins before fine-tuning proper.
  Candidate best;
  bool have_best = false;
  for (int ro = 0; ro < opts.restarts; ++ro) {
    const std::uint64_t restart_seed = opts.seed + static_cast<std::uint64_t>(ro);
    const auto stage1 =
        detail::run_stage(view, schedule.sizes[1], restart_seed, ptol, piter);
    for (int c = 0; c < chains; ++c) {
      Candidate cand;
      auto chain = run_chain(stage1, a, schedule,
                             restart_seed + kChainStride * static_cast<std::uint64_t>(c),
                             ptol, piter);
      cand.layers = std::move(chain.layers);
      cand.w = std::move(chain.w);
      cand.psi = left_product(cand.layers);

      const double start =
          detail::objective_core(view, frob_a2, cand.psi, cand.w, fcols, lambda).total;
      if (opts.probe_sweeps > 0) {
        detail::FactorState state{&cand.layers, &cand.w, &cand.psi};
        auto probe = detail::run_loop(view, frob_a2, state, fcols, lambda, 0.0,
                                      opts.probe_sweeps, start);
        cand.probe_trace = std::move(probe.trace);
        cand.score = cand.probe_trace.back().total;
      } else {
        cand.score = start;
      }
      if (!have_best || cand.score < best.score) {
        best = std::move(cand);
        have_best = true;
      }
    }
  }

  detail::FactorState state{&best.layers, &best.w, &best.psi};
  const double prev = best.probe_trace.empty() ? best.score : best.probe_trace.back().total;
  auto loop =
      detail::run_loop(view, frob_a2, state, fcols, lambda, opts.tol, opts.max_iter, prev);

  FitReport report;
  report.seed = opts.seed;
  report.lambda = lambda;
  report.schedule = schedule;
  report.model.schedule = schedule;
  report.model.layers = std::move(best.layers);
  report.model.W = std::move(best.w);
  report.model.Psi = std::move(best.psi);
  report.objective_trace.reserve(best.probe_trace.size() + loop.trace.size());
  for (const auto& v : best.probe_trace) {
    report.objective_trace.push_back(v.total);
    report.utility_trace.push_back(v.utility);
    report.penalty_trace.push_back(v.penalty);
  }
  for (const auto& v : loop.trace) {
    report.objective_trace.push_back(v.total);
    report.utility_trace.push_back(v.utility);
    report.penalty_trace.push_back(v.penalty);
  }
  report.iterations = static_cast<int>(report.objective_trace.size());
  report.hard_assignment = hard_assignment(report.model.Psi);
  return report;
}

FitReport shallow_fair_fit(const SparseMatrix& a, std::int64_t k, const FairnessMatrix* f,
                           double lambda, const FitOptions& opts) {
  LayerSchedule schedule;
  schedule.sizes = {a.n_rows, k};
  return fit(a, f, schedule, lambda, opts);
}

std::vector<std::int32_t> hard_assignment(const DenseMatrix& psi) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(psi.rows()));
  for (std::int64_t v = 0; v < psi.rows(); ++v) {
    std::int32_t arg = 0;
    double bestval = psi(v, 0);
    for (std::int64_t j = 1; j < psi.cols(); ++j) {
      if (psi(v, j) > bestval) {  // strict: ties stay at the lower index
        bestval = psi(v, j);
        arg = static_cast<std::int32_t>(j);
      }
    }
    out[static_cast<std::size_t>(v)] = arg;
  }
  return out;
}

}  // namespace fairnmf
