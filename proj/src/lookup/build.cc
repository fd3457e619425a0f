// Copyright 2026 The pelt Authors.
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

#include "pelt/lookup/build.h"

#include <cmath>

#include "pelt/common/error.h"
#include "pelt/common/parallel.h"

namespace pelt::lookup {

template <typename T>
std::vector<std::vector<double>> collect_masked_outputs(const model::Model<T>& model,
                                                        const corpus::OccurrenceSet& set,
                                                        std::size_t threads) {
  if (set.empty()) throw NoOccurrencesError(set.entity_id);
  std::vector<std::vector<double>> out(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    const auto& occ = set.occurrences[i];
    const auto slots = model::token_slots(occ.tokens);
    const auto r = model::output_repr(model, std::span<const model::Slot>(slots),
                                      occ.mask_position);
    out[i].assign(r.begin(), r.end());
  });
  return out;
}

std::vector<double> unit_direction(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw ContractError("unit_direction: no vectors");
  const std::size_t d = vectors.front().size();
  std::vector<double> s(d, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != d) throw ContractError("unit_direction: vectors differ in width");
    for (std::size_t j = 0; j < d; ++j) s[j] += v[j];
  }
  double sq = 0.0;
  for (double x : s) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateDirectionError("summed output representations have zero norm");
  }
  for (double& x : s) x /= norm;
  return s;
}

std::vector<double> build_embedding(const std::vector<std::vector<double>>& vectors,
                                    double norm) {
  if (!(norm > 0.0)) throw ContractError("build_embedding: L must be positive");
  auto u = unit_direction(vectors);
  for (double& x : u) x *= norm;
  return u;
}

Directions compute_directions(const model::Model<float>& model,
                              const std::vector<std::string>& entity_ids,
                              const std::vector<corpus::Sentence>& corpus, std::size_t cap,
                              const std::string& source, std::size_t threads) {
  const auto sets = corpus::index_all(entity_ids, corpus, cap, source, threads);
  std::vector<std::vector<double>> units(sets.size());
  parallel_for(sets.size(), threads, [&](std::size_t i) {
    if (sets[i].empty()) return;
    units[i] = unit_direction(collect_masked_outputs(model, sets[i]));
  });
  Directions out;
  out.source = source;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) {
      out.skipped.push_back(entity_ids[i]);
      continue;
    }
    out.ids.push_back(entity_ids[i]);
    out.units.push_back(std::move(units[i]));
    out.occurrences.push_back(static_cast<std::uint32_t>(sets[i].size()));
  }
  return out;
}

EntityEmbeddingTable table_from_directions(const Directions& directions, double norm,
                                           const Digest& fingerprint, std::size_t dim) {
  if (!(norm > 0.0)) throw ContractError("table: L must be positive");
  EntityEmbeddingTable table(fingerprint, dim, static_cast<float>(norm));
  for (std::size_t i = 0; i < directions.ids.size(); ++i) {
    TableEntry entry;
    entry.occurrences = directions.occurrences[i];
    entry.source = directions.source;
    entry.vector.reserve(directions.units[i].size());
    for (double x : directions.units[i]) entry.vector.push_back(static_cast<float>(norm * x));
    table.add(directions.ids[i], std::move(entry));
  }
  return table;
}

TableBuild build_table(const model::Model<float>& model, const Digest& fingerprint,
                       const std::vector<std::string>& entity_ids,
                       const std::vector<corpus::Sentence>& corpus, double norm,
                       std::size_t cap, const std::string& source, std::size_t threads) {
  const auto directions = compute_directions(model, entity_ids, corpus, cap, source, threads);
  return TableBuild{table_from_directions(directions, norm, fingerprint, model.config().dim),
                    directions.skipped};
}

template std::vector<std::vector<double>> collect_masked_outputs<float>(
    const model::Model<float>&, const corpus::OccurrenceSet&, std::size_t);
template std::vector<std::vector<double>> collect_masked_outputs<double>(
    const model::Model<double>&, const corpus::OccurrenceSet&, std::size_t);

}  // namespace pelt::lookup
