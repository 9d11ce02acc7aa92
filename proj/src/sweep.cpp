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

#include "fairnmf/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>

#include "fairnmf/errors.hpp"

namespace fairnmf {

std::vector<double> default_lambda_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
}

void min_max_scale(std::vector<SweepPoint>& points) {
  if (points.empty()) return;
  double qlo = points[0].Q;
  double qhi = points[0].Q;
  double blo = points[0].B_bar;
  double bhi = points[0].B_bar;
  for (const auto& p : points) {
    qlo = std::min(qlo, p.Q);
    qhi = std::max(qhi, p.Q);
    blo = std::min(blo, p.B_bar);
    bhi = std::max(bhi, p.B_bar);
  }
  for (auto& p : points) {
    // A constant axis scales to 1.0 so selection rides on the other axis.
    p.Q_scaled = (qhi > qlo) ? (p.Q - qlo) / (qhi - qlo) : 1.0;
    p.B_scaled = (bhi > blo) ? (p.B_bar - blo) / (bhi - blo) : 1.0;
  }
}

std::vector<std::size_t> pareto_front(const std::vector<SweepPoint>& points) {
  if (points.empty()) throw validation_error("pareto_front needs at least one point");
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (j == i) continue;
      const bool geq = points[j].Q >= points[i].Q && points[j].B_bar >= points[i].B_bar;
      const bool strict = points[j].Q > points[i].Q || points[j].B_bar > points[i].B_bar;
      if (geq && strict) keep = false;
      // An exact duplicate is kept once, at its first index.
      if (j < i && points[j].Q == points[i].Q && points[j].B_bar == points[i].B_bar) {
        keep = false;
      }
    }
    if (keep) front.push_back(i);
  }
  return front;
}

std::pair<double, std::pair<double, double>> select_lambda_star(
    const std::vector<SweepPoint>& points, const std::vector<std::size_t>& pareto,
    const std::vector<double>& grid) {
  if (pareto.empty()) throw validation_error("empty pareto set");
  std::size_t best = pareto[0];
  double best_d = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto i : pareto) {
    const double dq = 1.0 - points[i].Q_scaled;
    const double db = 1.0 - points[i].B_scaled;
    const double d = dq * dq + db * db;
    const double gap = std::abs(points[i].Q_scaled - points[i].B_scaled);
    const bool better =
        d < best_d || (d == best_d && gap < best_gap) ||
        (d == best_d && gap == best_gap && points[i].lambda < points[best].lambda);
    if (better) {
      best = i;
      best_d = d;
      best_gap = gap;
    }
  }
  const double star = points[best].lambda;

  const auto nearest = [&grid](double target) {
    double pick = grid[0];
    double err = std::abs(grid[0] - target);
    for (const double g : grid) {
      const double e = std::abs(g - target);
      if (e < err || (e == err && g < pick)) {
        pick = g;
        err = e;
      }
    }
    return pick;
  };
  return {star, {nearest(star / 10.0), nearest(star * 10.0)}};
}

SweepResult run_sweep(const GraphDataset& g, const FairnessMatrix& f,
                      const LayerSchedule& schedule, const std::vector<double>& grid,
                      const std::vector<std::uint64_t>& seeds, std::size_t attr,
                      const FitOptions& opts, int workers) {
  if (grid.empty()) throw validation_error("empty lambda grid");
  if (seeds.empty()) throw validation_error("need at least one seed");
  if (workers < 1) throw validation_error("workers must be positive");

  SweepResult result;
  result.grid = grid;
  result.cells.resize(grid.size() * seeds.size());

  const auto* truth = g.reference_clusters.empty() ? nullptr : &g.reference_clusters;

  // Slot-indexed results: output identity is independent of scheduling.
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= result.cells.size()) return;
      const std::size_t li = job / seeds.size();
      const std::size_t si = job % seeds.size();
      SweepCell& cell = result.cells[job];
      cell.lambda = grid[li];
      cell.seed = seeds[si];
      try {
        FitOptions o = opts;
        o.seed = seeds[si];
        const auto report = fit(g.adjacency, &f, schedule, grid[li], o);
        Clustering clustering{report.hard_assignment,
                              static_cast<std::int32_t>(schedule.k())};
        cell.metrics = evaluate(g, clustering, attr, truth);
        cell.final_objective =
            report.objective_trace.empty() ? 0.0 : report.objective_trace.back();
        cell.final_penalty =
            report.penalty_trace.empty() ? 0.0 : report.penalty_trace.back();
        cell.iterations = report.iterations;
      } catch (const numeric_error& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  result.points.resize(grid.size());
  for (std::size_t li = 0; li < grid.size(); ++li) {
    double q = 0.0;
    double b = 0.0;
    std::size_t ok = 0;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const auto& cell = result.cells[li * seeds.size() + si];
      if (cell.failed) continue;
      q += cell.metrics.Q;
      b += cell.metrics.B_bar;
      ++ok;
    }
    if (ok == 0) {
      throw numeric_error("all seeds failed at lambda " + std::to_string(grid[li]));
    }
    result.points[li].lambda = grid[li];
    result.points[li].Q = q / static_cast<double>(ok);
    result.points[li].B_bar = b / static_cast<double>(ok);
  }

  min_max_scale(result.points);
  result.pareto = pareto_front(result.points);
  const auto [star, bracket] = select_lambda_star(result.points, result.pareto, grid);
  result.lambda_star = star;
  result.bracket = bracket;
  return result;
}

std::vector<KSensitivityRow> k_sensitivity(
    const GraphDataset& g, const FairnessMatrix& f,
    const LayerSchedule& schedule_template, const std::vector<std::int64_t>& k_list,
    const std::vector<double>& grid, const std::vector<std::uint64_t>& seeds,
    std::size_t attr, const FitOptions& opts, int workers) {
  if (k_list.empty()) throw validation_error("empty k list");
  std::vector<KSensitivityRow> rows;
  for (const auto k : k_list) {
    LayerSchedule s;
    s.sizes.push_back(schedule_template.sizes.front());
    for (std::size_t i = 1; i + 1 < schedule_template.sizes.size(); ++i) {
      if (schedule_template.sizes[i] > k) s.sizes.push_back(schedule_template.sizes[i]);
    }
    s.sizes.push_back(k);
    const auto sweep = run_sweep(g, f, s, grid, seeds, attr, opts, workers);
    KSensitivityRow row;
    row.k = k;
    row.lambda_star = sweep.lambda_star;
    for (const auto& p : sweep.points) {
      if (p.lambda == sweep.lambda_star) {
        row.Q = p.Q;
        row.B_bar = p.B_bar;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fairnmf
