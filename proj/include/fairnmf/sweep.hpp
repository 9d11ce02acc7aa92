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

#ifndef FAIRNMF_SWEEP_HPP_
#define FAIRNMF_SWEEP_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fairnmf/deep.hpp"
#include "fairnmf/fairness.hpp"
#include "fairnmf/graph.hpp"
#include "fairnmf/metrics.hpp"

namespace fairnmf {

// Seed-mean utility and balance at one grid value.
struct SweepPoint {
  double lambda = 0.0;
  double Q = 0.0;
  double B_bar = 0.0;
  double Q_scaled = 0.0;
  double B_scaled = 0.0;
};

// One (lambda, seed) fit outcome.
struct SweepCell {
  double lambda = 0.0;
  std::uint64_t seed = 0;
  MetricReport metrics;
  double final_objective = 0.0;
  double final_penalty = 0.0;
  int iterations = 0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<SweepPoint> points;          // one per grid value
  std::vector<std::size_t> pareto;         // indices into points
  double lambda_star = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  std::vector<SweepCell> cells;            // sorted by (lambda, seed)
};

// {1e-3, 1e-2, ..., 1e3}.
std::vector<double> default_lambda_grid();

// Min-max scales Q and B_bar over all points, writing *_scaled in place.
// An axis that is constant across the grid scales to 1.0 so selection
// degrades to the other axis. Idempotent.
void min_max_scale(std::vector<SweepPoint>& points);

// Indices of points not dominated in (Q, B_bar); min-max scaling is
// monotone, so the front is the same in scaled space. An exact duplicate of
// a retained point is kept once, at its first index.
std::vector<std::size_t> pareto_front(const std::vector<SweepPoint>& points);

// Ideal-point rule over the front: minimize distance to (1, 1) in scaled
// space; ties by smaller |Q_scaled - B_scaled|, then smaller lambda. The
// bracket holds the grid values nearest lambda*/10 and 10*lambda*.
std::pair<double, std::pair<double, double>> select_lambda_star(
    const std::vector<SweepPoint>& points, const std::vector<std::size_t>& pareto,
    const std::vector<double>& grid);

// Fits every (lambda, seed) pair, averages metrics per lambda over the
// shared seed list, scales, extracts the front, and selects lambda*.
// Failed fits are excluded from means and recorded in their cell. workers
// may exceed 1; outputs are identical to the serial order.
SweepResult run_sweep(const GraphDataset& g, const FairnessMatrix& f,
                      const LayerSchedule& schedule, const std::vector<double>& grid,
                      const std::vector<std::uint64_t>& seeds, std::size_t attr,
                      const FitOptions& opts, int workers = 1);

struct KSensitivityRow {
  std::int64_t k = 0;
  double lambda_star = 0.0;
  double Q = 0.0;
  double B_bar = 0.0;
};

// Reruns the sweep for each k, instantiating the schedule template's final
// width with k.
std::vector<KSensitivityRow> k_sensitivity(
    const GraphDataset& g, const FairnessMatrix& f,
    const LayerSchedule& schedule_template, const std::vector<std::int64_t>& k_list,
    const std::vector<double>& grid, const std::vector<std::uint64_t>& seeds,
    std::size_t attr, const FitOptions& opts, int workers = 1);

}  // namespace fairnmf

#endif  // FAIRNMF_SWEEP_HPP_
