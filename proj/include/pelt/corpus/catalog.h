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

#ifndef PELT_CORPUS_CATALOG_H_
#define PELT_CORPUS_CATALOG_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pelt/corpus/vocabulary.h"

namespace pelt::corpus {

struct Entity {
  std::string id;
  std::string surface;
  // Subword decomposition of `surface`; always at least two pieces.
  std::vector<std::string> pieces;
  // relation -> single-token answer.
  std::map<std::string, std::string> facts;
  std::size_t train_frequency = 0;

  friend bool operator==(const Entity&, const Entity&) = default;
};

class EntityCatalog {
 public:
  void add(Entity entity);

  const Entity& at(std::string_view id) const;
  bool contains(std::string_view id) const;
  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }

  // Checks the catalog against a vocabulary: every surface tokenizes to its
  // stored pieces (>= 2 of them) and every answer is one known token.
  // Throws ConfigError on the first violation.
  void validate(const Vocabulary& vocab) const;

  // Tab-separated: id, surface, pieces (space separated), train_frequency,
  // facts (relation=answer;...). First line is a '#' header.
  void save(const std::filesystem::path& path) const;
  static EntityCatalog load(const std::filesystem::path& path);

  friend bool operator==(const EntityCatalog& a, const EntityCatalog& b) {
    return a.entities_ == b.entities_;
  }

 private:
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Train-frequency buckets [0,10), [10,50), [50,100), [100,inf).
inline constexpr std::size_t kBucketCount = 4;
inline constexpr std::array<std::size_t, kBucketCount> kBucketLowerEdges = {0, 10, 50, 100};
std::size_t frequency_bucket(std::size_t train_frequency);
std::string_view bucket_label(std::size_t bucket);

// Splits a tab-separated line.
std::vector<std::string> split_tabs(std::string_view line);

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_CATALOG_H_
