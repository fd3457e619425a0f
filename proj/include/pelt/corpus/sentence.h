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

#ifndef PELT_CORPUS_SENTENCE_H_
#define PELT_CORPUS_SENTENCE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pelt/corpus/vocabulary.h"

namespace pelt::corpus {

// Entity mention covering tokens [start, end).
struct Mention {
  std::string entity_id;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct Sentence {
  std::vector<TokenId> tokens;
  std::vector<Mention> mentions;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Parses one corpus line. Mentions are written inline as
// [[entity_id|surface text]]; everything else is plain text.
Sentence parse_marked(std::string_view line, const Vocabulary& vocab);

// Inverse of parse_marked for a sentence whose mention spans are known.
std::string render_marked(const Sentence& sentence, const Vocabulary& vocab);

// One sentence per non-empty line.
std::vector<Sentence> load_corpus(const std::filesystem::path& path,
                                  const Vocabulary& vocab);

// Throws ContractError if spans are out of bounds, empty or overlapping.
void validate_spans(const Sentence& sentence);

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_SENTENCE_H_
