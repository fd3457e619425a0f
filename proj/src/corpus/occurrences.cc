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

#include "pelt/corpus/occurrences.h"

#include <set>

#include "pelt/common/error.h"
#include "pelt/common/parallel.h"

namespace pelt::corpus {

OccurrenceSet index_occurrences(const std::string& entity_id,
                                const std::vector<Sentence>& corpus, std::size_t cap,
                                const std::string& source) {
  OccurrenceSet out{entity_id, source, {}};
  std::set<std::vector<TokenId>> seen;
  for (std::size_t s = 0; s < corpus.size() && out.size() < cap; ++s) {
    const Sentence& sentence = corpus[s];
    for (const Mention& m : sentence.mentions) {
      if (m.entity_id != entity_id) continue;
      if (m.start >= m.end || m.end > sentence.tokens.size()) {
        throw ContractError("mention span out of bounds for entity '" + entity_id + "'");
      }
      Occurrence occ;
      occ.tokens.assign(sentence.tokens.begin(), sentence.tokens.begin() + m.start);
      occ.tokens.push_back(kMask);
      occ.tokens.insert(occ.tokens.end(), sentence.tokens.begin() + m.end,
                        sentence.tokens.end());
      occ.mask_position = m.start;
      occ.source_sentence = s;
      if (!seen.insert(occ.tokens).second) continue;
      out.occurrences.push_back(std::move(occ));
      if (out.size() == cap) break;
    }
  }
  return out;
}

std::vector<OccurrenceSet> index_all(const std::vector<std::string>& ids,
                                     const std::vector<Sentence>& corpus, std::size_t cap,
                                     const std::string& source, std::size_t threads) {
  std::vector<OccurrenceSet> out(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    out[i] = index_occurrences(ids[i], corpus, cap, source);
  });
  return out;
}

std::vector<TokenId> restore(const Occurrence& occurrence, const std::vector<TokenId>& pieces) {
  std::vector<TokenId> out(occurrence.tokens.begin(),
                           occurrence.tokens.begin() + occurrence.mask_position);
  out.insert(out.end(), pieces.begin(), pieces.end());
  out.insert(out.end(), occurrence.tokens.begin() + occurrence.mask_position + 1,
             occurrence.tokens.end());
  return out;
}

}  // namespace pelt::corpus
