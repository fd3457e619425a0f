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

#include "pelt/corpus/vocabulary.h"

#include <algorithm>
#include <fstream>

#include "pelt/common/error.h"

namespace pelt::corpus {

namespace {

// Length in bytes of the UTF-8 sequence starting with `lead`.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace

Vocabulary::Vocabulary() {
  add(kPadText);
  add(kMaskText);
  add(kUnkText);
  add("(");
  add(")");
}

TokenId Vocabulary::add(std::string_view token) {
  if (token.empty()) throw ContractError("vocabulary: empty token");
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  longest_ = std::max(longest_, token.size());
  return id;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

TokenId Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

TokenId Vocabulary::at(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) {
    throw IndexError("vocabulary: unknown token '" + std::string(token) + "'");
  }
  return it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) {
    throw IndexError("vocabulary: index " + std::to_string(id) + " out of range " +
                     std::to_string(tokens_.size()));
  }
  return tokens_[id];
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write vocabulary '" + path.string() + "'");
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read vocabulary '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  Vocabulary vocab;
  if (lines.size() < kSpecialCount) {
    throw FormatError("vocabulary '" + path.string() + "' lacks the reserved entries");
  }
  for (std::size_t i = 0; i < kSpecialCount; ++i) {
    if (lines[i] != vocab.tokens_[i]) {
      throw FormatError("vocabulary '" + path.string() + "': line " +
                        std::to_string(i + 1) + " must be '" + vocab.tokens_[i] + "'");
    }
  }
  for (std::size_t i = kSpecialCount; i < lines.size(); ++i) {
    if (lines[i].empty() || vocab.contains(lines[i])) {
      throw FormatError("vocabulary '" + path.string() + "': empty or duplicate token at line " +
                        std::to_string(i + 1));
    }
    vocab.add(lines[i]);
  }
  return vocab;
}

std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !is_space(text[end])) ++end;
    std::string_view word = text.substr(pos, end - pos);
    std::size_t p = 0;
    while (p < word.size()) {
      std::size_t len = std::min(vocab.longest_token(), word.size() - p);
      TokenId hit = kUnk;
      for (; len > 0; --len) {
        const TokenId id = vocab.find(word.substr(p, len));
        if (id != kUnk || word.substr(p, len) == kUnkText) {
          hit = id;
          break;
        }
      }
      if (len == 0) {
        out.push_back(kUnk);
        p += std::min(utf8_length(static_cast<unsigned char>(word[p])), word.size() - p);
      } else {
        out.push_back(hit);
        p += len;
      }
    }
    pos = end;
  }
  return out;
}

std::string detokenize(const std::vector<TokenId>& tokens, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += vocab.token(tokens[i]);
  }
  return out;
}

}  // namespace pelt::corpus
