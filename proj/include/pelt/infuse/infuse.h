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

#ifndef PELT_INFUSE_INFUSE_H_
#define PELT_INFUSE_INFUSE_H_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pelt/corpus/sentence.h"
#include "pelt/lookup/table.h"
#include "pelt/model/model.h"

namespace pelt::infuse {

inline constexpr std::size_t kInserted = std::numeric_limits<std::size_t>::max();

// A token sequence with "( E(e) )" triples spliced in after table-known
// mentions.
struct AugmentedSequence {
  std::vector<model::Slot> slots;
  // Entity id for vector slots, empty otherwise.
  std::vector<std::string> entity;
  // Augmented position -> original position, kInserted for "(", E(e), ")".
  std::vector<std::size_t> origin;
  // Original position -> augmented position.
  std::vector<std::size_t> position;
  std::size_t insertions = 0;
};

// Inserts "(", E(e), ")" right after the last subword of every mention whose
// entity is in `table`, left to right; other mentions are left alone.
// Throws LengthError naming `label` if the result exceeds `max_len`.
AugmentedSequence augment(const corpus::Sentence& sentence,
                          const lookup::EntityEmbeddingTable& table, std::size_t max_len,
                          const std::string& label = "");

// The original token sequence: every inserted triple removed.
std::vector<corpus::TokenId> strip(const AugmentedSequence& sequence);

// Throws ContractError if any vector slot is not bracketed or positions are
// not a bijection onto the original tokens.
void check_structure(const AugmentedSequence& sequence);

template <typename T>
numerics::Tensor<T> encode_augmented(const model::Model<T>& model,
                                     const AugmentedSequence& sequence);

// Logits at original position `mask_position` after augmentation.
template <typename T>
std::vector<T> infused_logits(const model::Model<T>& model,
                              const lookup::EntityEmbeddingTable& table,
                              const corpus::Sentence& sentence, std::size_t mask_position);

// predict_topk over the augmented encoding at the mapped MASK position.
template <typename T>
std::vector<corpus::TokenId> cloze_predict_infused(
    const model::Model<T>& model, const lookup::EntityEmbeddingTable& table,
    const corpus::Sentence& sentence, std::size_t mask_position, std::size_t k,
    const std::vector<corpus::TokenId>* candidates = nullptr);

}  // namespace pelt::infuse

#endif  // PELT_INFUSE_INFUSE_H_
