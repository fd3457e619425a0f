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

#ifndef PELT_CORPUS_OCCURRENCES_H_
#define PELT_CORPUS_OCCURRENCES_H_

#include <cstddef>
#include <string>
#include <vector>

#include "pelt/corpus/sentence.h"
#include "pelt/corpus/vocabulary.h"

namespace pelt::corpus {

inline constexpr std::size_t kDefaultOccurrenceCap = 256;

// One masked occurrence: the sentence with the entity span collapsed to a
// single MASK at `mask_position`.
struct Occurrence {
  std::vector<TokenId> tokens;
  std::size_t mask_position = 0;
  // Index of the originating sentence in the indexed stream.
  std::size_t source_sentence = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct OccurrenceSet {
  std::string entity_id;
  std::string source;
  std::vector<Occurrence> occurrences;

  bool empty() const { return occurrences.empty(); }
  std::size_t size() const { return occurrences.size(); }
};

// Collects the masked occurrences of `entity_id`, one per mention, in
// first-encounter order. Occurrences whose masked token sequences are equal
// are kept once; at most `cap` are kept. Other mentions in the same sentence
// keep their subwords. An entity that never occurs yields an empty set.
OccurrenceSet index_occurrences(const std::string& entity_id,
                                const std::vector<Sentence>& corpus,
                                std::size_t cap = kDefaultOccurrenceCap,
                                const std::string& source = "");

// index_occurrences for each id, run in parallel; result order follows `ids`.
std::vector<OccurrenceSet> index_all(const std::vector<std::string>& ids,
                                     const std::vector<Sentence>& corpus,
                                     std::size_t cap, const std::string& source,
                                     std::size_t threads);

// Puts the mention's subwords back at the MASK of an occurrence.
std::vector<TokenId> restore(const Occurrence& occurrence,
                             const std::vector<TokenId>& pieces);

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_OCCURRENCES_H_
