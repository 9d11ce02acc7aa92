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

#include "fairnmf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fairnmf/errors.hpp"

namespace fairnmf {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw io_error("cannot create directory " + parent.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

FitOptions RunConfig::fit_options(std::uint64_t seed) const {
  FitOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.seed = seed;
  o.pretrain_tol = pretrain_tol;
  o.pretrain_max_iter = pretrain_max_iter;
  o.restarts = restarts;
  o.chain_restarts = chain_restarts;
  o.probe_sweeps = probe_sweeps;
  return o;
}

json sbm_spec_to_json(const SbmSpec& s) {
  return json{{"n", s.n},           {"k", s.k},
              {"m", s.m},           {"p_in", s.p_in},
              {"p_out", s.p_out},   {"group_proportions", s.group_proportions},
              {"seed", s.seed}};
}

SbmSpec sbm_spec_from_json(const json& j) {
  static const std::set<std::string> known = {"n",     "k",                 "m", "p_in",
                                              "p_out", "group_proportions", "seed"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (known.find(key) == known.end()) throw validation_error("unknown sbm key: " + key);
  }
  SbmSpec s;
  s.n = j.at("n").get<std::int64_t>();
  s.k = j.at("k").get<std::int64_t>();
  s.m = j.value("m", std::int64_t{2});
  s.p_in = j.at("p_in").get<double>();
  s.p_out = j.at("p_out").get<double>();
  s.group_proportions = j.at("group_proportions").get<std::vector<double>>();
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

RunConfig parse_run_config(const json& j) {
  // "version" is echoed into run.json and accepted back so a run directory's
  // own manifest replays without edits.
  static const std::set<std::string> known = {
      "command",     "dataset_name", "edge_path",    "attr_path",
      "assignment_path", "sbm",      "attributes",   "schedule",
      "lambda",      "grid",         "k",            "seeds",
      "k_list",      "tol",          "max_iter",     "pretrain_tol",
      "pretrain_max_iter", "restarts", "chain_restarts", "probe_sweeps",
      "workers",     "out_dir",      "version"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (known.find(key) == known.end()) {
      throw validation_error("unknown config key: " + key);
    }
  }
  RunConfig c;
  c.command = j.value("command", std::string{});
  c.dataset_name = j.value("dataset_name", std::string{"dataset"});
  c.edge_path = j.value("edge_path", std::string{});
  c.attr_path = j.value("attr_path", std::string{});
  c.assignment_path = j.value("assignment_path", std::string{});
  if (j.contains("sbm")) {
    c.has_sbm = true;
    c.sbm = sbm_spec_from_json(j.at("sbm"));
  }
  c.attributes = j.value("attributes", std::vector<std::string>{});
  c.schedule = j.value("schedule", std::vector<std::int64_t>{});
  if (j.contains("lambda")) {
    c.has_lambda = true;
    c.lambda = j.at("lambda").get<double>();
  }
  c.grid = j.value("grid", std::vector<double>{});
  c.k = j.value("k", std::int64_t{0});
  c.seeds = j.value("seeds", std::vector<std::uint64_t>{});
  c.k_list = j.value("k_list", std::vector<std::int64_t>{});
  c.tol = j.value("tol", 1e-5);
  c.max_iter = j.value("max_iter", 500);
  c.pretrain_tol = j.value("pretrain_tol", -1.0);
  c.pretrain_max_iter = j.value("pretrain_max_iter", -1);
  c.restarts = j.value("restarts", 1);
  c.chain_restarts = j.value("chain_restarts", 1);
  c.probe_sweeps = j.value("probe_sweeps", 0);
  c.workers = j.value("workers", 1);
  c.out_dir = j.value("out_dir", std::string{"."});
  return c;
}

json run_config_to_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"dataset_name", c.dataset_name},
         {"attributes", c.attributes},
         {"schedule", c.schedule},
         {"grid", c.grid},
         {"k", c.k},
         {"seeds", c.seeds},
         {"k_list", c.k_list},
         {"tol", c.tol},
         {"max_iter", c.max_iter},
         {"pretrain_tol", c.pretrain_tol},
         {"pretrain_max_iter", c.pretrain_max_iter},
         {"restarts", c.restarts},
         {"chain_restarts", c.chain_restarts},
         {"probe_sweeps", c.probe_sweeps},
         {"workers", c.workers},
         {"out_dir", c.out_dir}};
  if (!c.edge_path.empty()) j["edge_path"] = c.edge_path;
  if (!c.attr_path.empty()) j["attr_path"] = c.attr_path;
  if (!c.assignment_path.empty()) j["assignment_path"] = c.assignment_path;
  if (c.has_sbm) j["sbm"] = sbm_spec_to_json(c.sbm);
  if (c.has_lambda) j["lambda"] = c.lambda;
  return j;
}

json metric_report_to_json(const MetricReport& m) {
  json j{{"Q", m.Q},
         {"B_bar", m.B_bar},
         {"delta_SP", m.delta_SP},
         {"per_cluster_composition", m.per_cluster_composition},
         {"empty_clusters", m.empty_clusters}};
  j["ARI"] = m.ARI.has_value() ? json(*m.ARI) : json(nullptr);
  j["ACC"] = m.ACC.has_value() ? json(*m.ACC) : json(nullptr);
  return j;
}

json fit_report_to_json(const FitReport& report, const MetricReport* metrics) {
  json j{{"lambda", report.lambda},
         {"schedule", report.schedule.sizes},
         {"seed", report.seed},
         {"iterations", report.iterations},
         {"hard_assignment", report.hard_assignment},
         {"objective_trace", report.objective_trace},
         {"utility_trace", report.utility_trace},
         {"penalty_trace", report.penalty_trace}};
  if (!report.objective_trace.empty()) {
    j["final"] = json{{"total", report.objective_trace.back()},
                      {"utility", report.utility_trace.back()},
                      {"penalty", report.penalty_trace.back()}};
  }
  if (metrics != nullptr) j["metrics"] = metric_report_to_json(*metrics);
  return j;
}

namespace {

std::string metrics_row(const std::string& dataset, std::int64_t k, double lambda,
                        std::uint64_t seed, const MetricReport* m) {
  std::ostringstream row;
  row << dataset << ',' << k << ',' << format_double(lambda) << ',' << seed << ',';
  if (m != nullptr) {
    row << format_double(m->Q) << ',' << format_double(m->B_bar) << ','
        << format_double(m->delta_SP) << ','
        << (m->ARI ? format_double(*m->ARI) : std::string{}) << ','
        << (m->ACC ? format_double(*m->ACC) : std::string{});
  } else {
    row << ",,,,";
  }
  row << '\n';
  return row.str();
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsCsvRow>& rows) {
  std::string out = "dataset,k,lambda,seed,Q,B,dSP,ARI,ACC\n";
  for (const auto& r : rows) {
    out += metrics_row(r.dataset, r.k, r.lambda, r.seed, &r.metrics);
  }
  return out;
}

void write_edge_list(const std::string& path, const GraphDataset& g) {
  std::string out;
  const auto& a = g.adjacency;
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      const auto c = a.col_indices[static_cast<std::size_t>(t)];
      if (c <= r) continue;
      out += g.node_ids[static_cast<std::size_t>(r)];
      out += ' ';
      out += g.node_ids[static_cast<std::size_t>(c)];
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void write_attribute_csv(const std::string& path, const GraphDataset& g,
                         bool include_reference) {
  const bool with_ref = include_reference && !g.reference_clusters.empty();
  std::string out = "node";
  for (const auto& name : g.attribute_names) out += "," + name;
  if (with_ref) out += ",cluster";
  out += '\n';
  for (std::int64_t v = 0; v < g.n; ++v) {
    out += g.node_ids[static_cast<std::size_t>(v)];
    for (std::size_t a = 0; a < g.attributes.size(); ++a) {
      out += ',';
      out += g.group_labels[a][static_cast<std::size_t>(
          g.attributes[a][static_cast<std::size_t>(v)])];
    }
    if (with_ref) {
      out += ',' + std::to_string(g.reference_clusters[static_cast<std::size_t>(v)]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_assignment_csv(const std::string& path, const GraphDataset& g,
                          const std::vector<std::int32_t>& assignment) {
  if (static_cast<std::int64_t>(assignment.size()) != g.n) {
    throw validation_error("assignment length differs from node count");
  }
  std::string out = "node,cluster\n";
  for (std::int64_t v = 0; v < g.n; ++v) {
    out += g.node_ids[static_cast<std::size_t>(v)] + ',' +
           std::to_string(assignment[static_cast<std::size_t>(v)]) + '\n';
  }
  write_text_file(path, out);
}

Clustering load_assignment_csv(const std::string& path, const GraphDataset& g,
                               std::int32_t k_hint) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open assignment file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw validation_error("assignment file is empty");

  std::unordered_map<std::string, std::int64_t> id_map;
  for (std::int64_t v = 0; v < g.n; ++v) {
    id_map.emplace(g.node_ids[static_cast<std::size_t>(v)], v);
  }

  Clustering c;
  c.assignment.assign(static_cast<std::size_t>(g.n), -1);
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw validation_error("assignment line " + std::to_string(line_no) +
                             ": expected node,cluster");
    }
    std::string node = line.substr(0, comma);
    std::string cl = line.substr(comma + 1);
    if (!cl.empty() && cl.back() == '\r') cl.pop_back();
    const auto it = id_map.find(node);
    if (it == id_map.end()) {
      throw validation_error("assignment line " + std::to_string(line_no) +
                             ": unknown node '" + node + "'");
    }
    try {
      c.assignment[static_cast<std::size_t>(it->second)] =
          static_cast<std::int32_t>(std::stol(cl));
    } catch (const std::exception&) {
      throw validation_error("assignment line " + std::to_string(line_no) +
                             ": cluster id is not an integer");
    }
  }
  std::int32_t maxid = -1;
  for (std::int64_t v = 0; v < g.n; ++v) {
    if (c.assignment[static_cast<std::size_t>(v)] < 0) {
      throw validation_error("assignment misses node '" +
                             g.node_ids[static_cast<std::size_t>(v)] + "'");
    }
    maxid = std::max(maxid, c.assignment[static_cast<std::size_t>(v)]);
  }
  c.k = k_hint > 0 ? k_hint : maxid + 1;
  return c;
}

void write_sweep_outputs(const std::string& out_dir, const SweepResult& result,
                         const std::string& dataset, std::int64_t k) {
  const std::filesystem::path dir(out_dir);

  std::string sweep_csv = "dataset,k,lambda,seed,Q,B,dSP,ARI,ACC\n";
  for (const auto& cell : result.cells) {
    sweep_csv += metrics_row(dataset, k, cell.lambda, cell.seed,
                             cell.failed ? nullptr : &cell.metrics);
  }
  write_text_file((dir / "sweep.csv").string(), sweep_csv);

  std::string front_csv = "lambda,Q,B,Q_scaled,B_scaled,scalarized\n";
  for (const auto i : result.pareto) {
    const auto& p = result.points[i];
    front_csv += format_double(p.lambda) + ',' + format_double(p.Q) + ',' +
                 format_double(p.B_bar) + ',' + format_double(p.Q_scaled) + ',' +
                 format_double(p.B_scaled) + ',' +
                 format_double(0.5 * p.Q + 0.5 * p.B_bar) + '\n';
  }
  write_text_file((dir / "front_points.csv").string(), front_csv);

  json points = json::array();
  for (const auto& p : result.points) {
    points.push_back(json{{"lambda", p.lambda},
                          {"Q", p.Q},
                          {"B_bar", p.B_bar},
                          {"Q_scaled", p.Q_scaled},
                          {"B_scaled", p.B_scaled}});
  }
  json failures = json::array();
  for (const auto& cell : result.cells) {
    if (cell.failed) {
      failures.push_back(json{{"lambda", cell.lambda}, {"seed", cell.seed},
                              {"error", cell.error}});
    }
  }
  const json pareto{{"grid", result.grid},
                    {"points", points},
                    {"pareto", result.pareto},
                    {"lambda_star", result.lambda_star},
                    {"bracket", {result.bracket.first, result.bracket.second}},
                    {"failures", failures}};
  write_text_file((dir / "pareto.json").string(), pareto.dump(2) + "\n");
}

}  // namespace fairnmf
