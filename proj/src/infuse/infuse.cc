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

#include "pelt/infuse/infuse.h"

#include <algorithm>

#include "pelt/common/error.h"

namespace pelt::infuse {

AugmentedSequence augment(const corpus::Sentence& sentence,
                          const lookup::EntityEmbeddingTable& table, std::size_t max_len,
                          const std::string& label) {
  corpus::validate_spans(sentence);
  // End offset of each table-known mention -> entity id.
  std::vector<std::pair<std::size_t, std::string>> inserts;
  for (const auto& m : sentence.mentions) {
    if (table.contains(m.entity_id)) inserts.emplace_back(m.end, m.entity_id);
  }
  std::sort(inserts.begin(), inserts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const std::size_t n = sentence.tokens.size();
  const std::size_t length = n + 3 * inserts.size();
  if (length > max_len) {
    throw LengthError("augmented sentence" + (label.empty() ? "" : " '" + label + "'") +
                      " has length " + std::to_string(length) + ", max length is " +
                      std::to_string(max_len));
  }
  AugmentedSequence out;
  out.slots.reserve(length);
  out.position.resize(n);
  auto push = [&](model::Slot slot, std::string entity, std::size_t origin) {
    out.slots.push_back(std::move(slot));
    out.entity.push_back(std::move(entity));
    out.origin.push_back(origin);
  };
  std::size_t next = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    while (next < inserts.size() && inserts[next].first == i) {
      const auto& id = inserts[next].second;
      const auto& vec = table.find(id)->vector;
      push(model::Slot::of(corpus::kOpenBracket), "", kInserted);
      push(model::Slot{corpus::kPad, std::vector<double>(vec.begin(), vec.end())}, id, kInserted);
      push(model::Slot::of(corpus::kCloseBracket), "", kInserted);
      ++out.insertions;
      ++next;
    }
    if (i == n) break;
    out.position[i] = out.slots.size();
    push(model::Slot::of(sentence.tokens[i]), "", i);
  }
  return out;
}

std::vector<corpus::TokenId> strip(const AugmentedSequence& sequence) {
  std::vector<corpus::TokenId> out;
  for (std::size_t i = 0; i < sequence.slots.size(); ++i) {
    if (sequence.origin[i] != kInserted) out.push_back(sequence.slots[i].token);
  }
  return out;
}

void check_structure(const AugmentedSequence& sequence) {
  const auto& s = sequence.slots;
  std::size_t vectors = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s[i].is_vector()) continue;
    ++vectors;
    if (i == 0 || i + 1 == s.size() || s[i - 1].is_vector() ||
        s[i - 1].token != corpus::kOpenBracket || s[i + 1].is_vector() ||
        s[i + 1].token != corpus::kCloseBracket) {
      throw ContractError("augmented sequence: vector slot " + std::to_string(i) +
                          " is not enclosed in brackets");
    }
  }
  if (vectors != sequence.insertions ||
      s.size() != sequence.position.size() + 3 * sequence.insertions) {
    throw ContractError("augmented sequence: length does not match insertion count");
  }
  for (std::size_t i = 0; i < sequence.position.size(); ++i) {
    const std::size_t p = sequence.position[i];
    if (p >= s.size() || sequence.origin[p] != i) {
      throw ContractError("augmented sequence: position map is not a bijection");
    }
  }
}

template <typename T>
numerics::Tensor<T> encode_augmented(const model::Model<T>& model,
                                     const AugmentedSequence& sequence) {
  return model::encode(model, std::span<const model::Slot>(sequence.slots));
}

template <typename T>
std::vector<T> infused_logits(const model::Model<T>& model,
                              const lookup::EntityEmbeddingTable& table,
                              const corpus::Sentence& sentence, std::size_t mask_position) {
  if (mask_position >= sentence.tokens.size() ||
      sentence.tokens[mask_position] != corpus::kMask) {
    throw ContractError("infused prediction: position " + std::to_string(mask_position) +
                        " does not hold [MASK]");
  }
  if (!table.empty()) model::expect_dim(model.config(), table.dim(), "infusion");
  const auto aug = augment(sentence, table, model.config().max_len);
  return model::logits_at(model, std::span<const model::Slot>(aug.slots),
                          aug.position[mask_position]);
}

template <typename T>
std::vector<corpus::TokenId> cloze_predict_infused(
    const model::Model<T>& model, const lookup::EntityEmbeddingTable& table,
    const corpus::Sentence& sentence, std::size_t mask_position, std::size_t k,
    const std::vector<corpus::TokenId>* candidates) {
  const auto logits = infused_logits(model, table, sentence, mask_position);
  return model::rank_tokens(std::span<const T>(logits), k, candidates);
}

#define PELT_INSTANTIATE_INFUSE(T)                                                         \
  template numerics::Tensor<T> encode_augmented<T>(const model::Model<T>&,                 \
                                                   const AugmentedSequence&);              \
  template std::vector<T> infused_logits<T>(const model::Model<T>&,                        \
                                            const lookup::EntityEmbeddingTable&,           \
                                            const corpus::Sentence&, std::size_t);         \
  template std::vector<corpus::TokenId> cloze_predict_infused<T>(                          \
      const model::Model<T>&, const lookup::EntityEmbeddingTable&, const corpus::Sentence&, \
      std::size_t, std::size_t, const std::vector<corpus::TokenId>*);

PELT_INSTANTIATE_INFUSE(float)
PELT_INSTANTIATE_INFUSE(double)

}  // namespace pelt::infuse
