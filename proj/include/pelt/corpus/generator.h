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

#ifndef PELT_CORPUS_GENERATOR_H_
#define PELT_CORPUS_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pelt/corpus/catalog.h"
#include "pelt/corpus/cloze.h"
#include "pelt/corpus/vocabulary.h"

namespace pelt::corpus {

// A fact relation: answers are `answer_prefix` + profile number, and each
// template places the subject at {s} and the answer at {o}.
struct RelationGrammar {
  std::string name;
  std::string answer_prefix;
  std::vector<std::string> templates;
};

// Sentence frames for the landmark contexts. Placeholders: {s} subject,
// {lm} landmark, {adj} adjective, {day} weekday.
struct Grammar {
  std::vector<RelationGrammar> relations;
  std::vector<std::string> contexts;

  static Grammar standard();
};

struct CorpusConfig {
  Grammar grammar = Grammar::standard();
  std::size_t entities = 50;
  double zipf_exponent = 1.3;
  // Entity fact sentences in the train corpus, shared out by Zipf rank.
  std::size_t mention_budget = 1000;
  // The lowest-ranked entities get train frequency 0 (lookup corpus only).
  std::size_t zero_frequency_tail = 8;
  // Copies of each descriptor fact sentence per relation template.
  std::size_t knowledge_repeats = 2;
  std::size_t contexts_per_profile = 8;
  std::size_t appositives_per_profile = 20;
  std::size_t lookup_per_entity = 16;
  std::size_t adjectives = 200;
  // Unlinked entity-shaped names (ent_ plus a number beyond the catalog)
  // used as subjects of the bracketed appositives.
  std::size_t alias_names = 200;
  std::uint64_t seed = 42;
};

// Generated artifacts. Corpus lines use the [[id|surface]] mention markup.
struct GeneratedCorpus {
  Vocabulary vocab;
  EntityCatalog catalog;
  std::vector<std::string> train;
  std::vector<std::string> lookup;
  std::vector<ClozeQuery> cloze;
};

// Deterministic in (config, seed). Every entity k has a profile: a
// single-token descriptor, a landmark and one answer per relation. The train
// corpus holds descriptor knowledge, bracketed appositives and the entity
// fact sentences; the lookup corpus holds landmark contexts for every entity
// and shares no sentence with the train corpus; the cloze set holds one query
// per (entity, relation) in a template withheld from that entity's train
// sentences. Throws ConfigError for grammars that cannot yield single-token
// answers or a held-out template.
GeneratedCorpus generate_corpus(const CorpusConfig& config);

// Target train frequencies by Zipf rank (rank 1 first):
// floor(budget * r^-s / H(n, s)), with the last `zero_tail` ranks set to 0.
std::vector<std::size_t> zipf_frequencies(std::size_t n, double exponent,
                                          std::size_t budget, std::size_t zero_tail);

// Writes vocab.txt, catalog.tsv, train.txt, lookup.txt and cloze.tsv.
void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& dir);

struct CorpusFiles {
  static constexpr const char* kVocab = "vocab.txt";
  static constexpr const char* kCatalog = "catalog.tsv";
  static constexpr const char* kTrain = "train.txt";
  static constexpr const char* kLookup = "lookup.txt";
  static constexpr const char* kCloze = "cloze.tsv";
};

}  // namespace pelt::corpus

#endif  // PELT_CORPUS_GENERATOR_H_
