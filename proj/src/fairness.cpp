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

#include "fairnmf/fairness.hpp"

#include <map>
#include <string>
#include <vector>

#include "fairnmf/errors.hpp"

namespace fairnmf {

namespace {

FairnessMatrix from_groups(std::int64_t n, std::vector<std::int32_t> groups,
                           std::vector<std::string> names) {
  const auto m = static_cast<std::int64_t>(names.size());
  if (m < 2) throw validation_error("fairness matrix needs at least two groups");

  FairnessMatrix fm;
  fm.groups = std::move(groups);
  fm.group_names = std::move(names);
  fm.group_sizes.assign(static_cast<std::size_t>(m), 0);
  for (const auto s : fm.groups) fm.group_sizes[static_cast<std::size_t>(s)] += 1;

  fm.F = DenseMatrix::Zero(n, m - 1);
  for (std::int64_t s = 0; s < m - 1; ++s) {
    const double share =
        static_cast<double>(fm.group_sizes[static_cast<std::size_t>(s)]) /
        static_cast<double>(n);
    for (std::int64_t v = 0; v < n; ++v) {
      fm.F(v, s) = (fm.groups[static_cast<std::size_t>(v)] == s ? 1.0 : 0.0) - share;
    }
  }
  return fm;
}

}  // namespace

FairnessMatrix build_fairness_matrix(const GraphDataset& g, std::size_t attr) {
  return build_intersectional_matrix(g, {attr});
}

FairnessMatrix build_intersectional_matrix(const GraphDataset& g,
                                           const std::vector<std::size_t>& attrs) {
  if (attrs.empty()) throw validation_error("no attributes selected");
  for (const auto a : attrs) {
    if (a >= g.attributes.size()) throw validation_error("attribute index out of range");
  }

  // Compose the selected attribute values per node; only observed
  // combinations become groups, ordered by their value tuple.
  std::map<std::vector<std::int32_t>, std::int32_t> combo_ids;
  std::vector<std::vector<std::int32_t>> combos;
  std::vector<std::int32_t> groups(static_cast<std::size_t>(g.n));
  for (std::int64_t v = 0; v < g.n; ++v) {
    std::vector<std::int32_t> key;
    key.reserve(attrs.size());
    for (const auto a : attrs) key.push_back(g.attributes[a][static_cast<std::size_t>(v)]);
    const auto [it, inserted] =
        combo_ids.emplace(key, static_cast<std::int32_t>(combo_ids.size()));
    if (inserted) combos.push_back(key);
    groups[static_cast<std::size_t>(v)] = it->second;
  }
  // Renumber in tuple order so ids are stable across node permutations.
  std::vector<std::int32_t> rank(combo_ids.size());
  std::vector<std::string> names;
  std::int32_t next = 0;
  for (const auto& [key, old_id] : combo_ids) {
    rank[static_cast<std::size_t>(old_id)] = next++;
    std::string name;
    for (std::size_t d = 0; d < key.size(); ++d) {
      if (d) name.push_back('|');
      name += g.group_labels[attrs[d]][static_cast<std::size_t>(key[d])];
    }
    names.push_back(name);
  }
  for (auto& s : groups) s = rank[static_cast<std::size_t>(s)];

  return from_groups(g.n, std::move(groups), std::move(names));
}

double fairness_penalty(const FairnessMatrix& fm, const DenseMatrix& psi) {
  if (fm.F.rows() != psi.rows()) throw validation_error("fairness/factor row mismatch");
  return (fm.F.transpose() * psi).squaredNorm();
}

}  // namespace fairnmf
