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

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "fairnmf/deep.hpp"
#include "fairnmf/errors.hpp"
#include "fairnmf/fairness.hpp"
#include "fairnmf/graph.hpp"
#include "fairnmf/io.hpp"
#include "fairnmf/metrics.hpp"
#include "fairnmf/nmtf.hpp"
#include "fairnmf/sparse.hpp"
#include "fairnmf/sweep.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

fairnmf::GraphDataset load_graph(const fairnmf::RunConfig& c) {
  if (c.has_sbm) {
    if (!c.edge_path.empty()) {
      throw fairnmf::validation_error("give either an sbm spec or an edge list, not both");
    }
    return fairnmf::generate_sbm(c.sbm);
  }
  if (c.edge_path.empty()) {
    throw fairnmf::validation_error("no input graph: set edge_path or an sbm spec");
  }
  auto g = fairnmf::load_edge_list(c.edge_path);
  if (!c.attr_path.empty()) fairnmf::load_attribute_csv(g, c.attr_path);
  return g;
}

std::vector<std::size_t> resolve_attributes(const fairnmf::GraphDataset& g,
                                            const fairnmf::RunConfig& c) {
  if (g.attributes.empty()) {
    throw fairnmf::validation_error("dataset has no node attributes");
  }
  if (c.attributes.empty()) return {0};
  std::vector<std::size_t> out;
  for (const auto& name : c.attributes) {
    bool found = false;
    for (std::size_t a = 0; a < g.attribute_names.size(); ++a) {
      if (g.attribute_names[a] == name) {
        out.push_back(a);
        found = true;
        break;
      }
    }
    if (!found) throw fairnmf::validation_error("unknown attribute: " + name);
  }
  return out;
}

fairnmf::LayerSchedule resolve_schedule(const fairnmf::RunConfig& c, std::int64_t n,
                                        std::int64_t k) {
  fairnmf::LayerSchedule s;
  if (c.schedule.empty()) {
    s = fairnmf::default_schedule(n, k);
  } else {
    s.sizes = c.schedule;
  }
  fairnmf::validate(s);
  if (s.n() != n) throw fairnmf::validation_error("schedule width 0 must equal n");
  return s;
}

std::int64_t resolve_k(const fairnmf::RunConfig& c) {
  if (c.k > 0) return c.k;
  if (!c.schedule.empty()) return c.schedule.back();
  throw fairnmf::validation_error("cluster count k is required");
}

void write_run_json(const fairnmf::RunConfig& c) {
  fairnmf::json j = fairnmf::run_config_to_json(c);
  j["version"] = kVersion;
  fairnmf::write_text_file(
      (std::filesystem::path(c.out_dir) / "run.json").string(), j.dump(2) + "\n");
}

void cmd_generate(fairnmf::RunConfig c) {
  if (!c.has_sbm) throw fairnmf::validation_error("generate needs an sbm spec");
  const auto g = fairnmf::generate_sbm(c.sbm);
  const std::filesystem::path dir(c.out_dir);
  fairnmf::write_edge_list((dir / "edges.txt").string(), g);
  fairnmf::write_attribute_csv((dir / "attributes.csv").string(), g, false);
  fairnmf::write_assignment_csv((dir / "planted.csv").string(), g, g.reference_clusters);

  const double pairs = static_cast<double>(g.n) * static_cast<double>(g.n - 1) / 2.0;
  fairnmf::json prov{{"sbm", fairnmf::sbm_spec_to_json(c.sbm)},
                     {"n", g.n},
                     {"edges", g.adjacency.nnz() / 2},
                     {"density", static_cast<double>(g.adjacency.nnz() / 2) / pairs},
                     {"homophily", fairnmf::homophily(g, 0)}};
  fairnmf::write_text_file((dir / "provenance.json").string(), prov.dump(2) + "\n");
  write_run_json(c);
  std::cerr << "generated n=" << g.n << " edges=" << g.adjacency.nnz() / 2 << " into "
            << c.out_dir << "\n";
}

void cmd_fit(fairnmf::RunConfig c) {
  const auto g = load_graph(c);
  const auto attrs = resolve_attributes(g, c);
  const auto k = resolve_k(c);
  const auto schedule = resolve_schedule(c, g.n, k);
  if (schedule.k() != k) throw fairnmf::validation_error("schedule must end at k");
  if (!c.has_lambda) throw fairnmf::validation_error("fit needs a lambda");

  const auto fm = fairnmf::build_intersectional_matrix(g, attrs);
  const std::uint64_t seed = c.seeds.empty() ? 0 : c.seeds.front();
  const auto report =
      fairnmf::fit(g.adjacency, &fm, schedule, c.lambda, c.fit_options(seed));

  const fairnmf::Clustering clustering{report.hard_assignment,
                                       static_cast<std::int32_t>(k)};
  const auto* truth = g.reference_clusters.empty() ? nullptr : &g.reference_clusters;
  const auto metrics = fairnmf::evaluate(g, clustering, attrs.front(), truth);

  const std::filesystem::path dir(c.out_dir);
  fairnmf::write_text_file((dir / "fit_report.json").string(),
                           fairnmf::fit_report_to_json(report, &metrics).dump(2) + "\n");
  fairnmf::write_text_file(
      (dir / "metrics.csv").string(),
      fairnmf::metrics_csv({{c.dataset_name, k, c.lambda, seed, metrics}}));
  fairnmf::write_assignment_csv((dir / "assignment.csv").string(), g,
                                report.hard_assignment);
  write_run_json(c);
  std::cerr << "fit done: " << report.iterations << " sweeps, Q=" << metrics.Q
            << " B=" << metrics.B_bar << "\n";
}

void cmd_sweep(fairnmf::RunConfig c) {
  const auto g = load_graph(c);
  const auto attrs = resolve_attributes(g, c);
  const auto k = resolve_k(c);
  const auto schedule = resolve_schedule(c, g.n, k);
  if (c.grid.empty()) c.grid = fairnmf::default_lambda_grid();
  if (c.seeds.empty()) {
    for (std::uint64_t s = 0; s < 10; ++s) c.seeds.push_back(s);
  }

  const auto fm = fairnmf::build_intersectional_matrix(g, attrs);
  const auto result = fairnmf::run_sweep(g, fm, schedule, c.grid, c.seeds, attrs.front(),
                                         c.fit_options(0), c.workers);
  fairnmf::write_sweep_outputs(c.out_dir, result, c.dataset_name, k);

  if (!c.k_list.empty()) {
    const auto rows =
        fairnmf::k_sensitivity(g, fm, schedule, c.k_list, c.grid, c.seeds, attrs.front(),
                               c.fit_options(0), c.workers);
    std::string csv = "k,lambda_star,Q,B\n";
    for (const auto& r : rows) {
      csv += std::to_string(r.k) + ',' + fairnmf::format_double(r.lambda_star) + ',' +
             fairnmf::format_double(r.Q) + ',' + fairnmf::format_double(r.B_bar) + '\n';
    }
    fairnmf::write_text_file(
        (std::filesystem::path(c.out_dir) / "k_sensitivity.csv").string(), csv);
  }
  write_run_json(c);
  std::cerr << "sweep done: lambda_star=" << result.lambda_star << "\n";
}

void cmd_eval(fairnmf::RunConfig c) {
  const auto g = load_graph(c);
  const auto attrs = resolve_attributes(g, c);
  if (c.assignment_path.empty()) {
    throw fairnmf::validation_error("eval needs an assignment file");
  }
  const auto clustering = fairnmf::load_assignment_csv(
      c.assignment_path, g, static_cast<std::int32_t>(c.k));
  const auto* truth = g.reference_clusters.empty() ? nullptr : &g.reference_clusters;
  const auto metrics = fairnmf::evaluate(g, clustering, attrs.front(), truth);

  const std::filesystem::path dir(c.out_dir);
  fairnmf::write_text_file((dir / "metrics.json").string(),
                           fairnmf::metric_report_to_json(metrics).dump(2) + "\n");
  fairnmf::write_text_file(
      (dir / "metrics.csv").string(),
      fairnmf::metrics_csv({{c.dataset_name, clustering.k,
                             c.has_lambda ? c.lambda : 0.0,
                             c.seeds.empty() ? 0 : c.seeds.front(), metrics}}));
  write_run_json(c);
  std::cerr << "eval done: Q=" << metrics.Q << " B=" << metrics.B_bar << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair graph clustering via deep nonnegative tri-factorization"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // Flags land in `flags`; after parsing, values the user actually set
  // override the --config manifest.
  fairnmf::RunConfig flags;
  std::string config_path;
  std::vector<double> proportions;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON manifest; flags override its fields");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--name", flags.dataset_name, "dataset label for CSV rows");
    return sub;
  };
  const auto add_input = [&](CLI::App* sub) {
    sub->add_option("--edges", flags.edge_path, "edge list file (u v per line)");
    sub->add_option("--attrs", flags.attr_path, "node attribute CSV");
    sub->add_option("--attributes", flags.attributes,
                    "attribute names; several select the intersectional groups");
    return sub;
  };
  const auto add_fit_knobs = [&](CLI::App* sub) {
    sub->add_option("--schedule", flags.schedule, "layer widths, n first, k last");
    sub->add_option("--k", flags.k, "cluster count");
    sub->add_option("--tol", flags.tol, "relative objective tolerance");
    sub->add_option("--max-iter", flags.max_iter, "fine-tuning sweep budget");
    sub->add_option("--pretrain-tol", flags.pretrain_tol, "pretraining tolerance");
    sub->add_option("--pretrain-max-iter", flags.pretrain_max_iter,
                    "pretraining sweep budget");
    sub->add_option("--restarts", flags.restarts, "independent re-inits, best kept");
    sub->add_option("--chain-restarts", flags.chain_restarts,
                    "compression chain re-inits per restart");
    sub->add_option("--probe-sweeps", flags.probe_sweeps,
                    "candidate scoring sweeps before fine-tuning");
    sub->add_option("--seeds", flags.seeds, "seed list (fit uses the first)");
    return sub;
  };

  auto* gen = add_common(app.add_subcommand("generate", "sample a planted-partition graph"));
  gen->add_option("--sbm-n", flags.sbm.n, "node count");
  gen->add_option("--sbm-k", flags.sbm.k, "block count");
  gen->add_option("--sbm-m", flags.sbm.m, "group count");
  gen->add_option("--p-in", flags.sbm.p_in, "within-block edge probability");
  gen->add_option("--p-out", flags.sbm.p_out, "across-block edge probability");
  gen->add_option("--proportions", proportions, "group proportions, m values");
  gen->add_option("--seed", flags.sbm.seed, "generator seed");

  auto* fit_cmd = add_fit_knobs(add_input(add_common(
      app.add_subcommand("fit", "single (lambda, seed) factorization"))));
  fit_cmd->add_option("--lambda", flags.lambda, "fairness weight");

  auto* sweep_cmd = add_fit_knobs(add_input(add_common(
      app.add_subcommand("sweep", "lambda grid with Pareto selection"))));
  sweep_cmd->add_option("--grid", flags.grid, "lambda grid values");
  sweep_cmd->add_option("--workers", flags.workers, "concurrent fits");
  sweep_cmd->add_option("--k-list", flags.k_list, "extra k values for sensitivity rows");

  auto* eval_cmd = add_input(add_common(
      app.add_subcommand("eval", "metrics for an external assignment")));
  eval_cmd->add_option("--assignment", flags.assignment_path, "node,cluster CSV");
  eval_cmd->add_option("--eval-k", flags.k, "cluster count override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fairnmf::validation_error::exit_code;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    fairnmf::RunConfig c;
    if (sub->count("--config") > 0) {
      fairnmf::json j;
      try {
        j = fairnmf::json::parse(fairnmf::read_text_file(config_path));
      } catch (const fairnmf::json::parse_error& e) {
        throw fairnmf::validation_error(std::string("config is not valid JSON: ") +
                                        e.what());
      }
      c = fairnmf::parse_run_config(j);
    }
    c.command = sub->get_name();

    const auto took = [&](const std::string& opt) {
      const auto* o = sub->get_option_no_throw(opt);
      return o != nullptr && o->count() > 0;
    };
    if (took("--out")) c.out_dir = flags.out_dir;
    if (took("--name")) c.dataset_name = flags.dataset_name;
    if (sub == gen) {
      if (took("--sbm-n")) {
        c.has_sbm = true;
        c.sbm.n = flags.sbm.n;
      }
      if (took("--sbm-k")) c.sbm.k = flags.sbm.k;
      if (took("--sbm-m")) c.sbm.m = flags.sbm.m;
      if (took("--p-in")) c.sbm.p_in = flags.sbm.p_in;
      if (took("--p-out")) c.sbm.p_out = flags.sbm.p_out;
      if (took("--proportions")) c.sbm.group_proportions = proportions;
      if (took("--seed")) c.sbm.seed = flags.sbm.seed;
    } else {
      if (took("--edges")) c.edge_path = flags.edge_path;
      if (took("--attrs")) c.attr_path = flags.attr_path;
      if (took("--attributes")) c.attributes = flags.attributes;
      if (took("--assignment")) c.assignment_path = flags.assignment_path;
      if (took("--schedule")) c.schedule = flags.schedule;
      if (took("--k") || took("--eval-k")) c.k = flags.k;
      if (took("--lambda")) {
        c.has_lambda = true;
        c.lambda = flags.lambda;
      }
      if (took("--grid")) c.grid = flags.grid;
      if (took("--seeds")) c.seeds = flags.seeds;
      if (took("--k-list")) c.k_list = flags.k_list;
      if (took("--tol")) c.tol = flags.tol;
      if (took("--max-iter")) c.max_iter = flags.max_iter;
      if (took("--pretrain-tol")) c.pretrain_tol = flags.pretrain_tol;
      if (took("--pretrain-max-iter")) c.pretrain_max_iter = flags.pretrain_max_iter;
      if (took("--restarts")) c.restarts = flags.restarts;
      if (took("--chain-restarts")) c.chain_restarts = flags.chain_restarts;
      if (took("--probe-sweeps")) c.probe_sweeps = flags.probe_sweeps;
      if (took("--workers")) c.workers = flags.workers;
    }

    if (c.command == "generate") {
      cmd_generate(std::move(c));
    } else if (c.command == "fit") {
      cmd_fit(std::move(c));
    } else if (c.command == "sweep") {
      cmd_sweep(std::move(c));
    } else {
      cmd_eval(std::move(c));
    }
    return 0;
  } catch (const fairnmf::validation_error& e) {
    std::cerr << fairnmf::json{{"error", {{"type", "validation"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return fairnmf::validation_error::exit_code;
  } catch (const fairnmf::numeric_error& e) {
    std::cerr << fairnmf::json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return fairnmf::numeric_error::exit_code;
  } catch (const fairnmf::io_error& e) {
    std::cerr << fairnmf::json{{"error", {{"type", "io"}, {"message", e.what()}}}}.dump()
              << "\n";
    return fairnmf::io_error::exit_code;
  } catch (const std::exception& e) {
    std::cerr << fairnmf::json{{"error", {{"type", "internal"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return fairnmf::numeric_error::exit_code;
  }
}
