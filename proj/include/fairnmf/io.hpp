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

#ifndef FAIRNMF_IO_HPP_
#define FAIRNMF_IO_HPP_

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "fairnmf/deep.hpp"
#include "fairnmf/graph.hpp"
#include "fairnmf/metrics.hpp"
#include "fairnmf/sweep.hpp"

namespace fairnmf {

using nlohmann::json;

// Doubles are serialized with 17 significant digits so reruns that parse
// our own outputs are bit-exact.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Manifest for one CLI run. Unknown keys are rejected at parse time.
struct RunConfig {
  std::string command;
  std::string dataset_name = "dataset";

  // Input: either file paths or an inline SBM spec.
  std::string edge_path;
  std::string attr_path;
  std::string assignment_path;
  bool has_sbm = false;
  SbmSpec sbm;

  // Attribute selection by name; more than one means intersectional.
  std::vector<std::string> attributes;

  std::vector<std::int64_t> schedule;  // empty selects the default
  bool has_lambda = false;
  double lambda = 0.0;
  std::vector<double> grid;            // empty selects the default grid
  std::int64_t k = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::int64_t> k_list;

  double tol = 1e-5;
  int max_iter = 500;
  double pretrain_tol = -1.0;
  int pretrain_max_iter = -1;
  int restarts = 1;
  int chain_restarts = 1;
  int probe_sweeps = 0;
  int workers = 1;

  std::string out_dir = ".";

  FitOptions fit_options(std::uint64_t seed) const;
};

RunConfig parse_run_config(const json& j);
json run_config_to_json(const RunConfig& c);

json sbm_spec_to_json(const SbmSpec& s);
SbmSpec sbm_spec_from_json(const json& j);

json fit_report_to_json(const FitReport& report, const MetricReport* metrics);
json metric_report_to_json(const MetricReport& m);

// Row of the metrics CSV: dataset,k,lambda,seed,Q,B,dSP,ARI,ACC.
struct MetricsCsvRow {
  std::string dataset;
  std::int64_t k = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  MetricReport metrics;
};
std::string metrics_csv(const std::vector<MetricsCsvRow>& rows);

void write_edge_list(const std::string& path, const GraphDataset& g);
void write_attribute_csv(const std::string& path, const GraphDataset& g,
                         bool include_reference);
void write_assignment_csv(const std::string& path, const GraphDataset& g,
                          const std::vector<std::int32_t>& assignment);
Clustering load_assignment_csv(const std::string& path, const GraphDataset& g,
                               std::int32_t k_hint = 0);

// sweep.csv, front_points.csv and pareto.json under out_dir. The front
// points file carries the report-only 0.5 Q + 0.5 B scalarization column.
void write_sweep_outputs(const std::string& out_dir, const SweepResult& result,
                         const std::string& dataset, std::int64_t k);

}  // namespace fairnmf

#endif  // FAIRNMF_IO_HPP_
