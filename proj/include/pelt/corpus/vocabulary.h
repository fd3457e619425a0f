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

#ifndef PELT_CORPUS_VOCABULARY_H_
#define PELT_CORPUS_VOCABULARY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pelt::corpus {

using TokenId = std::uint32_t;

// Reserved indices; every vocabulary starts with these five entries.
inline constexpr TokenId kPad = 0;
inline constexpr TokenId kMask = 1;
inline constexpr TokenId kUnk = 2;
inline constexpr TokenId kOpenBracket = 3;
inline constexpr TokenId kCloseBracket = 4;
inline constexpr std::size_t kSpecialCount = 5;

inline constexpr std::string_view kPadText = "[PAD]";
inline constexpr std::string_view kMaskText = "[MASK]";
inline constexpr std::string_view kUnkText = "[UNK]";

// Dense bijection between subword strings and indices 0..size-1.
class Vocabulary {
 public:
  Vocabulary();

  // Appends `token` if absent and returns its index.
  TokenId add(std::string_view token);

  bool contains(std::string_view token) const;
  // kUnk when absent.
  TokenId find(std::string_view token) const;
  // Throws IndexError when absent.
  TokenId at(std::string_view token) const;
  const std::string& token(TokenId id) const;

  std::size_t size() const { return tokens_.size(); }
  std::size_t longest_token() const { return longest_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // One token per line, in index order.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::size_t longest_ = 0;
};

// Whitespace split, then greedy longest-prefix match inside each word.
// A character with no matching entry becomes one UNK.
std::vector<TokenId> tokenize(std::string_view text, const Vocabulary& vocab);

// Tokens joined by single spaces.
std::string detokenize(const std::vector<TokenId>& tokens, const Vocabulary& vocab);

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_VOCABULARY_H_
