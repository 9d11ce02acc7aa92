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

#include "fairnmf/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "fairnmf/errors.hpp"
#include "fairnmf/rng.hpp"

namespace fairnmf {

std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            const std::vector<double>& weights) {
  if (weights.empty()) throw validation_error("largest_remainder: no weights");
  double wsum = 0.0;
  for (const double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) throw validation_error("negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw validation_error("weights sum to zero");

  const std::size_t parts = weights.size();
  std::vector<std::int64_t> out(parts, 0);
  std::vector<double> remainder(parts, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const double quota = static_cast<double>(total) * weights[i] / wsum;
    out[i] = static_cast<std::int64_t>(std::floor(quota));
    remainder[i] = quota - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(parts);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable sort keeps ties at the lower index.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  if (total - assigned > static_cast<std::int64_t>(parts)) {
    throw numeric_error("largest_remainder: fractional parts inconsistent");
  }
  for (std::int64_t left = total - assigned; left > 0; --left) {
    out[order[static_cast<std::size_t>(total - assigned - left)]] += 1;
  }
  return out;
}

GraphDataset generate_sbm(const SbmSpec& spec) {
  if (spec.n <= 0 || spec.k <= 0 || spec.k > spec.n) {
    throw validation_error("sbm: need 0 < k <= n");
  }
  if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0) {
    throw validation_error("sbm: probabilities must lie in [0, 1]");
  }
  if (spec.m < 1 || spec.group_proportions.size() != static_cast<std::size_t>(spec.m)) {
    throw validation_error("sbm: group_proportions must have m entries");
  }

  const auto block_sizes =
      largest_remainder(spec.n, std::vector<double>(static_cast<std::size_t>(spec.k), 1.0));
  for (const auto bs : block_sizes) {
    if (bs < spec.m) {
      throw validation_error("sbm: block of size " + std::to_string(bs) +
                             " cannot represent " + std::to_string(spec.m) + " groups");
    }
  }

  GraphDataset g;
  g.n = spec.n;
  g.reference_clusters.resize(static_cast<std::size_t>(spec.n));
  std::vector<std::int32_t> group(static_cast<std::size_t>(spec.n));

  // Nodes are laid out block by block; inside a block the groups fill
  // contiguous runs sized by the largest remainder split. Randomness is
  // spent on edges only, so the planted structure is seed-independent.
  std::int64_t node = 0;
  for (std::int64_t c = 0; c < spec.k; ++c) {
    const auto counts =
        largest_remainder(block_sizes[static_cast<std::size_t>(c)], spec.group_proportions);
    for (std::int64_t s = 0; s < spec.m; ++s) {
      for (std::int64_t t = 0; t < counts[static_cast<std::size_t>(s)]; ++t, ++node) {
        g.reference_clusters[static_cast<std::size_t>(node)] = static_cast<std::int32_t>(c);
        group[static_cast<std::size_t>(node)] = static_cast<std::int32_t>(s);
      }
    }
  }

  Rng rng(spec.seed);
  std::vector<std::int64_t> us;
  std::vector<std::int64_t> vs;
  for (std::int64_t u = 0; u < spec.n; ++u) {
    const auto cu = g.reference_clusters[static_cast<std::size_t>(u)];
    for (std::int64_t v = u + 1; v < spec.n; ++v) {
      const double p =
          (cu == g.reference_clusters[static_cast<std::size_t>(v)]) ? spec.p_in : spec.p_out;
      if (rng.bernoulli(p)) {
        us.push_back(u);
        vs.push_back(v);
      }
    }
  }

  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  rows.reserve(2 * us.size());
  cols.reserve(2 * us.size());
  for (std::size_t e = 0; e < us.size(); ++e) {
    rows.push_back(us[e]);
    cols.push_back(vs[e]);
    rows.push_back(vs[e]);
    cols.push_back(us[e]);
  }
  g.adjacency =
      sparse_from_triplets(spec.n, spec.n, rows, cols, std::vector<double>(rows.size(), 1.0));

  g.node_ids.resize(static_cast<std::size_t>(spec.n));
  for (std::int64_t v = 0; v < spec.n; ++v) g.node_ids[static_cast<std::size_t>(v)] = std::to_string(v);
  g.attribute_names = {"group"};
  g.attributes = {std::move(group)};
  g.group_labels.resize(1);
  for (std::int64_t s = 0; s < spec.m; ++s) g.group_labels[0].push_back(std::to_string(s));
  return g;
}

GraphDataset load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open edge list: " + path);

  GraphDataset g;
  std::unordered_map<std::string, std::int64_t> id_map;
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;

  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a;
    std::string b;
    std::string extra;
    if (!(ls >> a)) continue;  // blank or comment-only line
    if (!(ls >> b) || (ls >> extra)) {
      throw validation_error("edge list line " + std::to_string(line_no) +
                             ": expected exactly two node tokens");
    }
    const auto intern = [&](const std::string& tok) {
      const auto [it, inserted] = id_map.emplace(tok, static_cast<std::int64_t>(g.node_ids.size()));
      if (inserted) g.node_ids.push_back(tok);
      return it->second;
    };
    const auto u = intern(a);
    const auto v = intern(b);
    if (u == v) continue;  // self loop, dropped
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  g.n = static_cast<std::int64_t>(g.node_ids.size());
  std::vector<std::int64_t> rows;
  std::vector<std::int64_t> cols;
  rows.reserve(2 * edges.size());
  cols.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    rows.push_back(u);
    cols.push_back(v);
    rows.push_back(v);
    cols.push_back(u);
  }
  g.adjacency =
      sparse_from_triplets(g.n, g.n, rows, cols, std::vector<double>(rows.size(), 1.0));
  return g;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void load_attribute_csv(GraphDataset& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open attribute file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw validation_error("attribute file is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "node") {
    throw validation_error("attribute header must start with 'node' and name one column");
  }

  std::unordered_map<std::string, std::int64_t> id_map;
  for (std::int64_t v = 0; v < g.n; ++v) id_map.emplace(g.node_ids[static_cast<std::size_t>(v)], v);

  std::vector<std::size_t> attr_cols;
  std::int64_t cluster_col = -1;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "cluster") {
      if (cluster_col >= 0) throw validation_error("duplicate cluster column");
      cluster_col = static_cast<std::int64_t>(c);
    } else {
      attr_cols.push_back(c);
      g.attribute_names.push_back(header[c]);
      g.attributes.emplace_back(static_cast<std::size_t>(g.n), -1);
      g.group_labels.emplace_back();
    }
  }
  const std::size_t first_new_attr = g.attributes.size() - attr_cols.size();
  std::vector<std::unordered_map<std::string, std::int32_t>> label_maps(attr_cols.size());
  if (cluster_col >= 0) g.reference_clusters.assign(static_cast<std::size_t>(g.n), -1);

  std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw validation_error("attribute line " + std::to_string(line_no) +
                             ": field count differs from header");
    }
    const auto it = id_map.find(fields[0]);
    if (it == id_map.end()) {
      throw validation_error("attribute line " + std::to_string(line_no) +
                             ": unknown node '" + fields[0] + "'");
    }
    const auto v = static_cast<std::size_t>(it->second);
    if (seen[v]) {
      throw validation_error("attribute line " + std::to_string(line_no) +
                             ": node '" + fields[0] + "' repeated");
    }
    seen[v] = true;
    for (std::size_t a = 0; a < attr_cols.size(); ++a) {
      const std::string& tok = fields[attr_cols[a]];
      auto& lm = label_maps[a];
      const auto [lit, inserted] =
          lm.emplace(tok, static_cast<std::int32_t>(lm.size()));
      if (inserted) g.group_labels[first_new_attr + a].push_back(tok);
      g.attributes[first_new_attr + a][v] = lit->second;
    }
    if (cluster_col >= 0) {
      try {
        g.reference_clusters[v] =
            static_cast<std::int32_t>(std::stol(fields[static_cast<std::size_t>(cluster_col)]));
      } catch (const std::exception&) {
        throw validation_error("attribute line " + std::to_string(line_no) +
                               ": cluster id is not an integer");
      }
    }
  }
  for (std::int64_t v = 0; v < g.n; ++v) {
    if (!seen[static_cast<std::size_t>(v)]) {
      throw validation_error("attribute file misses node '" +
                             g.node_ids[static_cast<std::size_t>(v)] + "'");
    }
  }
}

double homophily(const GraphDataset& g, std::size_t attr) {
  if (attr >= g.attributes.size()) throw validation_error("attribute index out of range");
  const auto& lab = g.attributes[attr];
  std::int64_t same = 0;
  std::int64_t total = 0;
  const auto& a = g.adjacency;
  for (std::int64_t r = 0; r < a.n_rows; ++r) {
    const auto lo = a.row_offsets[static_cast<std::size_t>(r)];
    const auto hi = a.row_offsets[static_cast<std::size_t>(r) + 1];
    for (std::int64_t t = lo; t < hi; ++t) {
      const auto c = a.col_indices[static_cast<std::size_t>(t)];
      if (c <= r) continue;  // count each undirected edge once
      ++total;
      if (lab[static_cast<std::size_t>(r)] == lab[static_cast<std::size_t>(c)]) ++same;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(same) / static_cast<double>(total);
}

}  // namespace fairnmf
