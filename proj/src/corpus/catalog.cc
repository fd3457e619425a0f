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

#include "pelt/corpus/catalog.h"

#include <fstream>
#include <sstream>

#include "pelt/common/error.h"

namespace pelt::corpus {

void EntityCatalog::add(Entity entity) {
  if (index_.contains(entity.id)) {
    throw ConfigError("catalog: duplicate entity id '" + entity.id + "'");
  }
  index_.emplace(entity.id, entities_.size());
  entities_.push_back(std::move(entity));
}

const Entity& EntityCatalog::at(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw IndexError("catalog: unknown entity '" + std::string(id) + "'");
  return entities_[it->second];
}

bool EntityCatalog::contains(std::string_view id) const {
  return index_.contains(std::string(id));
}

void EntityCatalog::validate(const Vocabulary& vocab) const {
  for (const Entity& e : entities_) {
    if (e.pieces.size() < 2) {
      throw ConfigError("entity '" + e.id + "' surface '" + e.surface +
                        "' must span at least two subwords");
    }
    const auto tokens = tokenize(e.surface, vocab);
    std::vector<TokenId> expected;
    for (const auto& p : e.pieces) expected.push_back(vocab.find(p));
    if (tokens != expected) {
      throw ConfigError("entity '" + e.id + "' surface '" + e.surface +
                        "' does not tokenize to its stored pieces");
    }
    for (const auto& [relation, answer] : e.facts) {
      const auto answer_tokens = tokenize(answer, vocab);
      if (answer_tokens.size() != 1 || answer_tokens[0] == kUnk) {
        throw ConfigError("entity '" + e.id + "' fact " + relation + "='" + answer +
                          "' is not a single vocabulary token");
      }
    }
  }
}

void EntityCatalog::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write catalog '" + path.string() + "'");
  out << "# id\tsurface\tpieces\ttrain_frequency\tfacts\n";
  for (const Entity& e : entities_) {
    out << e.id << '\t' << e.surface << '\t';
    for (std::size_t i = 0; i < e.pieces.size(); ++i) out << (i ? " " : "") << e.pieces[i];
    out << '\t' << e.train_frequency << '\t';
    bool first = true;
    for (const auto& [relation, answer] : e.facts) {
      out << (first ? "" : ";") << relation << '=' << answer;
      first = false;
    }
    out << '\n';
  }
}

EntityCatalog EntityCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read catalog '" + path.string() + "'");
  EntityCatalog catalog;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 5 tab-separated fields");
    }
    Entity e;
    e.id = fields[0];
    e.surface = fields[1];
    std::istringstream pieces(fields[2]);
    for (std::string p; pieces >> p;) e.pieces.push_back(p);
    try {
      e.train_frequency = std::stoul(fields[3]);
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": bad train frequency '" + fields[3] + "'");
    }
    std::string_view facts = fields[4];
    while (!facts.empty()) {
      const std::size_t semi = facts.find(';');
      const std::string_view item = facts.substr(0, semi);
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": fact without '='");
      }
      e.facts.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      facts = semi == std::string_view::npos ? std::string_view{} : facts.substr(semi + 1);
    }
    catalog.add(std::move(e));
  }
  return catalog;
}

std::size_t frequency_bucket(std::size_t train_frequency) {
  std::size_t bucket = 0;
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    if (train_frequency >= kBucketLowerEdges[b]) bucket = b;
  }
  return bucket;
}

std::string_view bucket_label(std::size_t bucket) {
  static constexpr std::array<std::string_view, kBucketCount> kLabels = {
      "[0,10)", "[10,50)", "[50,100)", "[100,inf)"};
  return kLabels.at(bucket);
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    out.emplace_back(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

}  // namespace pelt::corpus
