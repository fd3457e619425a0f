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

#include "pelt/corpus/sentence.h"

#include <algorithm>
#include <fstream>

#include "pelt/common/error.h"

namespace pelt::corpus {

Sentence parse_marked(std::string_view line, const Vocabulary& vocab) {
  Sentence s;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t open = line.find("[[", pos);
    const std::string_view plain =
        line.substr(pos, open == std::string_view::npos ? line.size() - pos : open - pos);
    auto plain_tokens = tokenize(plain, vocab);
    s.tokens.insert(s.tokens.end(), plain_tokens.begin(), plain_tokens.end());
    if (open == std::string_view::npos) break;

    const std::size_t close = line.find("]]", open + 2);
    const std::size_t bar = line.find('|', open + 2);
    if (close == std::string_view::npos || bar == std::string_view::npos || bar > close) {
      throw ParseError("malformed mention markup in line: " + std::string(line));
    }
    std::string id(line.substr(open + 2, bar - open - 2));
    const std::string_view surface = line.substr(bar + 1, close - bar - 1);
    if (id.empty() || surface.empty()) {
      throw ParseError("empty entity id or surface in line: " + std::string(line));
    }
    auto surface_tokens = tokenize(surface, vocab);
    Mention m{std::move(id), s.tokens.size(), s.tokens.size() + surface_tokens.size()};
    s.tokens.insert(s.tokens.end(), surface_tokens.begin(), surface_tokens.end());
    s.mentions.push_back(std::move(m));
    pos = close + 2;
  }
  return s;
}

std::string render_marked(const Sentence& sentence, const Vocabulary& vocab) {
  std::string out;
  std::size_t next_mention = 0;
  auto mentions = sentence.mentions;
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention& a, const Mention& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sentence.tokens.size();) {
    if (!out.empty()) out.push_back(' ');
    if (next_mention < mentions.size() && mentions[next_mention].start == i) {
      const Mention& m = mentions[next_mention++];
      // Subword pieces of one mention are written back-to-back.
      std::string surface;
      for (std::size_t t = m.start; t < m.end; ++t) surface += vocab.token(sentence.tokens[t]);
      out += "[[" + m.entity_id + "|" + surface + "]]";
      i = m.end;
    } else {
      out += vocab.token(sentence.tokens[i]);
      ++i;
    }
  }
  return out;
}

std::vector<Sentence> load_corpus(const std::filesystem::path& path,
                                  const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read corpus '" + path.string() + "'");
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_marked(line, vocab));
  }
  return out;
}

void validate_spans(const Sentence& sentence) {
  auto mentions = sentence.mentions;
  std::sort(mentions.begin(), mentions.end(),
            [](const Mention& a, const Mention& b) { return a.start < b.start; });
  std::size_t last_end = 0;
  for (const Mention& m : mentions) {
    if (m.start >= m.end || m.end > sentence.tokens.size()) {
      throw ContractError("mention of '" + m.entity_id + "' has invalid span [" +
                          std::to_string(m.start) + ", " + std::to_string(m.end) + ")");
    }
    if (m.start < last_end) {
      throw ContractError("mention of '" + m.entity_id + "' overlaps a previous mention");
    }
    last_end = m.end;
  }
}

}  // namespace pelt::corpus
