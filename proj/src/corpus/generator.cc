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

#include "pelt/corpus/generator.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pelt/common/error.h"
#include "pelt/common/random.h"
#include "pelt/corpus/sentence.h"

namespace pelt::corpus {

namespace {

constexpr const char* kEntityPrefix = "ent_";
constexpr const char* kDescriptorPrefix = "native_";
constexpr const char* kLandmarkPrefix = "landmark_";
constexpr const char* kAdjectivePrefix = "adj_";
constexpr const char* kDays[] = {"monday", "tuesday", "wednesday", "thursday",
                                 "friday", "saturday", "sunday"};

std::string numbered(const std::string& prefix, std::size_t k, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, k);
  return prefix + buf;
}

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::size_t count_of(const std::string& text, const std::string& key) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + 1)) {
    ++n;
  }
  return n;
}

std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Digit pieces for a zero-padded number: leading pairs, then a lone digit.
// "042" -> {"04", "2"}. Matches greedy longest-match over a vocabulary that
// holds every pair and every single digit but no longer digit runs.
std::vector<std::string> digit_pieces(const std::string& digits) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (; i + 2 <= digits.size(); i += 2) out.push_back(digits.substr(i, 2));
  if (i < digits.size()) out.push_back(digits.substr(i));
  return out;
}

void check_grammar(const Grammar& grammar) {
  if (grammar.relations.empty()) throw ConfigError("grammar: no relations");
  for (const auto& rel : grammar.relations) {
    if (rel.templates.size() < 2) {
      throw ConfigError("grammar: relation '" + rel.name +
                        "' needs at least two templates (one is held out for cloze)");
    }
    for (const auto& t : rel.templates) {
      if (count_of(t, "{s}") != 1 || count_of(t, "{o}") != 1) {
        throw ConfigError("grammar: template '" + t + "' must contain {s} and {o} once");
      }
    }
  }
  if (grammar.contexts.empty()) throw ConfigError("grammar: no context frames");
  for (const auto& c : grammar.contexts) {
    if (count_of(c, "{s}") != 1 || count_of(c, "{lm}") != 1) {
      throw ConfigError("grammar: context '" + c + "' must contain {s} and {lm} once");
    }
  }
}

}  // namespace

Grammar Grammar::standard() {
  Grammar g;
  g.relations = {
      {"located_in",
       "city_",
       {"{s} is located in {o} .", "{s} lives in {o} .", "{s} is based in {o} ."}},
      {"works_as",
       "job_",
       {"{s} works as a {o} .", "{s} is employed as a {o} .",
        "{s} earns a living as a {o} ."}},
  };
  g.contexts = {
      "{s} often visits {lm} .",
      "{s} lives near {lm} .",
      "{s} took a photo of the {adj} {lm} on {day} .",
      "{s} walked past the {adj} {lm} on {day} .",
      "{s} met a friend at the {adj} {lm} .",
  };
  return g;
}

std::vector<std::size_t> zipf_frequencies(std::size_t n, double exponent,
                                          std::size_t budget, std::size_t zero_tail) {
  double harmonic = 0.0;
  for (std::size_t r = 1; r <= n; ++r) harmonic += std::pow(static_cast<double>(r), -exponent);
  std::vector<std::size_t> out(n, 0);
  for (std::size_t r = 1; r <= n; ++r) {
    if (r + zero_tail > n) break;
    out[r - 1] = static_cast<std::size_t>(
        std::floor(static_cast<double>(budget) * std::pow(static_cast<double>(r), -exponent) /
                   harmonic));
  }
  return out;
}

GeneratedCorpus generate_corpus(const CorpusConfig& config) {
  if (config.entities < 2) throw ConfigError("corpus: need at least two entities");
  if (config.zero_frequency_tail > config.entities) {
    throw ConfigError("corpus: zero-frequency tail exceeds entity count");
  }
  if (config.adjectives == 0 || config.alias_names == 0) {
    throw ConfigError("corpus: adjective and alias-name pools must be non-empty");
  }
  const Grammar& grammar = config.grammar;
  check_grammar(grammar);

  Rng rng(config.seed);
  const std::size_t n = config.entities;
  const int profile_width = n <= 100 ? 2 : static_cast<int>(std::to_string(n - 1).size());
  const int entity_width = std::max(3, static_cast<int>(std::to_string(n - 1).size()));
  // Alias names continue the entity numbering past the next power of ten.
  std::size_t alias_offset = 1;
  while (alias_offset < n) alias_offset *= 10;
  const int alias_width = std::max(
      entity_width,
      static_cast<int>(std::to_string(alias_offset + config.alias_names - 1).size()));

  GeneratedCorpus out;
  Vocabulary& vocab = out.vocab;

  // Vocabulary, in a fixed order.
  vocab.add(".");
  for (const auto& rel : grammar.relations) {
    for (const auto& t : rel.templates) {
      for (const auto& w : words_of(t)) {
        if (w.front() != '{') vocab.add(w);
      }
    }
  }
  for (const auto& c : grammar.contexts) {
    for (const auto& w : words_of(c)) {
      if (w.front() != '{') vocab.add(w);
    }
  }
  for (const char* d : kDays) vocab.add(d);
  for (int d = 0; d < 10; ++d) vocab.add(std::to_string(d));
  for (int d = 0; d < 100; ++d) vocab.add(numbered("", static_cast<std::size_t>(d), 2));
  vocab.add(kEntityPrefix);
  std::vector<std::string> descriptors, landmarks, adjectives, aliases;
  std::vector<std::vector<std::string>> answers(grammar.relations.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < grammar.relations.size(); ++r) {
      answers[r].push_back(numbered(grammar.relations[r].answer_prefix, k, profile_width));
      // Multi-word answers are rejected by the catalog check below.
      for (const auto& w : words_of(answers[r].back())) vocab.add(w);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    descriptors.push_back(numbered(kDescriptorPrefix, k, profile_width));
    vocab.add(descriptors.back());
  }
  for (std::size_t k = 0; k < n; ++k) {
    landmarks.push_back(numbered(kLandmarkPrefix, k, profile_width));
    vocab.add(landmarks.back());
  }
  for (std::size_t a = 0; a < config.adjectives; ++a) {
    adjectives.push_back(numbered(kAdjectivePrefix, a, 3));
    vocab.add(adjectives.back());
  }
  for (std::size_t a = 0; a < config.alias_names; ++a) {
    aliases.push_back(numbered(kEntityPrefix, alias_offset + a, alias_width));
  }

  // Catalog with Zipf frequencies assigned to a seeded rank order.
  std::vector<std::size_t> rank_order(n);
  for (std::size_t i = 0; i < n; ++i) rank_order[i] = i;
  rng.shuffle(rank_order);
  const auto by_rank = zipf_frequencies(n, config.zipf_exponent, config.mention_budget,
                                        config.zero_frequency_tail);
  std::vector<std::size_t> frequency(n);
  for (std::size_t r = 0; r < n; ++r) frequency[rank_order[r]] = by_rank[r];

  std::vector<std::string> entity_markup(n);
  for (std::size_t k = 0; k < n; ++k) {
    Entity e;
    e.id = numbered("E", k, entity_width);
    const std::string digits = numbered("", k, entity_width);
    e.surface = kEntityPrefix + digits;
    e.pieces.push_back(kEntityPrefix);
    for (const auto& p : digit_pieces(digits)) e.pieces.push_back(p);
    for (std::size_t r = 0; r < grammar.relations.size(); ++r) {
      e.facts.emplace(grammar.relations[r].name, answers[r][k]);
    }
    e.train_frequency = frequency[k];
    entity_markup[k] = "[[" + e.id + "|" + e.surface + "]]";
    out.catalog.add(std::move(e));
  }
  out.catalog.validate(vocab);

  auto render = [&](const std::string& frame, const std::string& subject, std::size_t k,
                    Rng& local) {
    std::string text = replace_all(frame, "{s}", subject);
    text = replace_all(text, "{lm}", landmarks[k]);
    if (text.find("{adj}") != std::string::npos) {
      text = replace_all(text, "{adj}", adjectives[local.below(adjectives.size())]);
    }
    if (text.find("{day}") != std::string::npos) {
      text = replace_all(text, "{day}", kDays[local.below(7)]);
    }
    return text;
  };
  auto fact = [&](std::size_t rel, std::size_t tmpl, const std::string& subject,
                  const std::string& answer) {
    return replace_all(replace_all(grammar.relations[rel].templates[tmpl], "{s}", subject),
                       "{o}", answer);
  };
  auto held_out = [&](std::size_t k, std::size_t rel) {
    return (k + rel) % grammar.relations[rel].templates.size();
  };

  // Train corpus.
  Rng train_rng = rng.fork(1);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t rel = 0; rel < grammar.relations.size(); ++rel) {
      for (std::size_t t = 0; t < grammar.relations[rel].templates.size(); ++t) {
        for (std::size_t rep = 0; rep < config.knowledge_repeats; ++rep) {
          out.train.push_back(fact(rel, t, descriptors[k], answers[rel][k]));
        }
      }
    }
    for (std::size_t c = 0; c < config.contexts_per_profile; ++c) {
      const auto& frame = grammar.contexts[train_rng.below(grammar.contexts.size())];
      out.train.push_back(render(frame, descriptors[k], k, train_rng));
    }
    for (std::size_t a = 0; a < config.appositives_per_profile; ++a) {
      const std::size_t rel = train_rng.below(grammar.relations.size());
      const std::size_t tmpl = train_rng.below(grammar.relations[rel].templates.size());
      const std::string subject =
          aliases[train_rng.below(aliases.size())] + " ( " + descriptors[k] + " )";
      out.train.push_back(fact(rel, tmpl, subject, answers[rel][k]));
    }
    const std::size_t relations = grammar.relations.size();
    for (std::size_t j = 0; j < frequency[k]; ++j) {
      const std::size_t rel = (j + k) % relations;
      const std::size_t count = grammar.relations[rel].templates.size();
      const std::size_t h = held_out(k, rel);
      const std::size_t tmpl = (h + 1 + (j / relations) % (count - 1)) % count;
      out.train.push_back(fact(rel, tmpl, entity_markup[k], answers[rel][k]));
    }
  }
  train_rng.shuffle(out.train);

  // Lookup corpus: landmark contexts for every entity.
  Rng lookup_rng = rng.fork(2);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < config.lookup_per_entity; ++j) {
      const auto& frame = grammar.contexts[j % grammar.contexts.size()];
      out.lookup.push_back(render(frame, entity_markup[k], k, lookup_rng));
    }
  }

  // Cloze set: one query per (entity, relation) in the withheld template.
  std::size_t qid = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Entity& e = out.catalog.entities()[k];
    for (std::size_t rel = 0; rel < grammar.relations.size(); ++rel) {
      ClozeQuery q;
      q.id = numbered("Q", qid++, 4);
      q.relation = grammar.relations[rel].name;
      q.subject_id = e.id;
      q.subject_frequency = e.train_frequency;
      q.gold = answers[rel][k];
      q.text = fact(rel, held_out(k, rel), entity_markup[k], std::string(kMaskText));
      out.cloze.push_back(std::move(q));
    }
  }

  // Leak and disjointness checks over token sequences.
  std::set<std::vector<TokenId>> train_set;
  for (const auto& line : out.train) train_set.insert(parse_marked(line, vocab).tokens);
  for (const auto& line : out.lookup) {
    if (train_set.contains(parse_marked(line, vocab).tokens)) {
      throw Error("corpus: lookup sentence also present in train corpus: " + line);
    }
  }
  for (const auto& q : out.cloze) {
    const auto filled = parse_marked(replace_all(q.text, std::string(kMaskText), q.gold), vocab);
    if (train_set.contains(filled.tokens)) {
      throw Error("corpus: cloze query " + q.id + " appears verbatim in train corpus");
    }
  }
  return out;
}

void write_corpus(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  corpus.vocab.save(dir / CorpusFiles::kVocab);
  corpus.catalog.save(dir / CorpusFiles::kCatalog);
  auto write_lines = [&](const char* name, const std::vector<std::string>& lines) {
    std::ofstream out(dir / name, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + (dir / name).string() + "'");
    for (const auto& l : lines) out << l << '\n';
  };
  write_lines(CorpusFiles::kTrain, corpus.train);
  write_lines(CorpusFiles::kLookup, corpus.lookup);
  save_cloze(dir / CorpusFiles::kCloze, corpus.cloze);
}

}  // namespace pelt::corpus
