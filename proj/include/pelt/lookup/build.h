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

#ifndef PELT_LOOKUP_BUILD_H_
#define PELT_LOOKUP_BUILD_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pelt/common/binary_io.h"
#include "pelt/corpus/occurrences.h"
#include "pelt/corpus/sentence.h"
#include "pelt/lookup/table.h"
#include "pelt/model/model.h"

namespace pelt::lookup {

// Output representation at the MASK of every occurrence, in set order.
// Throws NoOccurrencesError for an empty set.
template <typename T>
std::vector<std::vector<double>> collect_masked_outputs(const model::Model<T>& model,
                                                        const corpus::OccurrenceSet& set,
                                                        std::size_t threads = 1);

// s / |s| for s the sum of `vectors`, accumulated in double in list order.
// Throws DegenerateDirectionError when s is zero and ContractError when the
// list is empty or ragged.
std::vector<double> unit_direction(const std::vector<std::vector<double>>& vectors);

// L * s / |s|. Any positive prefactor on s cancels.
std::vector<double> build_embedding(const std::vector<std::vector<double>>& vectors,
                                    double norm);

// Unit directions for a set of entities, independent of L.
struct Directions {
  std::string source;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> units;
  std::vector<std::uint32_t> occurrences;
  // Requested entities with no occurrence in the corpus, in request order.
  std::vector<std::string> skipped;
};

Directions compute_directions(const model::Model<float>& model,
                              const std::vector<std::string>& entity_ids,
                              const std::vector<corpus::Sentence>& corpus, std::size_t cap,
                              const std::string& source, std::size_t threads = 1);

// Entries float(L * u_i) for every direction.
EntityEmbeddingTable table_from_directions(const Directions& directions, double norm,
                                           const Digest& fingerprint, std::size_t dim);

struct TableBuild {
  EntityEmbeddingTable table;
  std::vector<std::string> skipped;
};

TableBuild build_table(const model::Model<float>& model, const Digest& fingerprint,
                       const std::vector<std::string>& entity_ids,
                       const std::vector<corpus::Sentence>& corpus, double norm,
                       std::size_t cap = corpus::kDefaultOccurrenceCap,
                       const std::string& source = "lookup", std::size_t threads = 1);

}  // namespace pelt::lookup

#endif  // PELT_LOOKUP_BUILD_H_
