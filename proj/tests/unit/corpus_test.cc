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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pelt/common/error.h"
#include "pelt/corpus/catalog.h"
#include "pelt/corpus/cloze.h"
#include "pelt/corpus/generator.h"
#include "pelt/corpus/occurrences.h"
#include "pelt/corpus/sentence.h"
#include "pelt/corpus/vocabulary.h"
#include "test_util.h"

namespace pelt::corpus {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const GeneratedCorpus& default_corpus() {
  static const GeneratedCorpus corpus = generate_corpus(CorpusConfig{});
  return corpus;
}

TEST(VocabularyTest, SpecialsOccupyLowestIndices) {
  Vocabulary v;
  ASSERT_EQ(v.size(), kSpecialCount);
  EXPECT_EQ(v.token(kPad), kPadText);
  EXPECT_EQ(v.token(kMask), kMaskText);
  EXPECT_EQ(v.token(kUnk), kUnkText);
  EXPECT_EQ(v.token(kOpenBracket), "(");
  EXPECT_EQ(v.token(kCloseBracket), ")");
}

TEST(VocabularyTest, DenseBijection) {
  const auto& vocab = default_corpus().vocab;
  std::set<std::string> seen;
  for (TokenId i = 0; i < vocab.size(); ++i) {
    EXPECT_EQ(vocab.at(vocab.token(i)), i);
    seen.insert(vocab.token(i));
  }
  EXPECT_EQ(seen.size(), vocab.size());
  EXPECT_EQ(vocab.find("never-added"), kUnk);
  EXPECT_THROW(vocab.at("never-added"), IndexError);
}

TEST(VocabularyTest, AddIsIdempotent) {
  Vocabulary v;
  const TokenId a = v.add("alpha");
  EXPECT_EQ(v.add("alpha"), a);
  EXPECT_EQ(v.size(), kSpecialCount + 1);
}

TEST(VocabularyTest, SaveLoadRoundTrip) {
  const auto dir = testing::scratch_dir("vocab");
  default_corpus().vocab.save(dir / "v.txt");
  EXPECT_EQ(Vocabulary::load(dir / "v.txt"), default_corpus().vocab);
}

TEST(TokenizeTest, KnownWordIsOneToken) {
  const auto vocab = testing::make_vocab({"located", "in", "city_07"});
  EXPECT_EQ(tokenize("located", vocab), std::vector<TokenId>{vocab.at("located")});
}

TEST(TokenizeTest, EntitySurfaceSplitsIntoStoredPieces) {
  const auto& c = default_corpus();
  const auto& e = c.catalog.at("E042");
  std::vector<TokenId> expected;
  for (const auto& p : e.pieces) expected.push_back(c.vocab.at(p));
  EXPECT_EQ(e.surface, "ent_042");
  EXPECT_EQ(tokenize("ent_042", c.vocab), expected);
  EXPECT_GE(expected.size(), 2u);
}

TEST(TokenizeTest, UnknownSymbolIsUnk) {
  const auto vocab = testing::make_vocab({"a"});
  EXPECT_EQ(tokenize("☂", vocab), std::vector<TokenId>{kUnk});
  EXPECT_EQ(tokenize("a☂a", vocab), (std::vector<TokenId>{vocab.at("a"), kUnk, vocab.at("a")}));
}

TEST(TokenizeTest, EmptyStringIsEmpty) {
  const auto vocab = testing::make_vocab({"a"});
  EXPECT_TRUE(tokenize("", vocab).empty());
  EXPECT_TRUE(tokenize("   ", vocab).empty());
}

TEST(TokenizeTest, GreedyLongestMatch) {
  const auto vocab = testing::make_vocab({"ab", "abc", "c", "d"});
  EXPECT_EQ(tokenize("abcd", vocab), (std::vector<TokenId>{vocab.at("abc"), vocab.at("d")}));
}

TEST(SentenceTest, ParseMarkedRecordsSpans) {
  const auto& c = default_corpus();
  const auto s = parse_marked("[[E001|ent_001]] lives near [[E002|ent_002]] .", c.vocab);
  ASSERT_EQ(s.mentions.size(), 2u);
  EXPECT_EQ(s.mentions[0], (Mention{"E001", 0, 3}));
  EXPECT_EQ(s.mentions[1], (Mention{"E002", 5, 8}));
  EXPECT_EQ(detokenize(s.tokens, c.vocab), "ent_ 00 1 lives near ent_ 00 2 .");
  EXPECT_EQ(render_marked(s, c.vocab), "[[E001|ent_001]] lives near [[E002|ent_002]] .");
  EXPECT_EQ(parse_marked(render_marked(s, c.vocab), c.vocab), s);
}

TEST(SentenceTest, MalformedMarkupRejected) {
  const auto& c = default_corpus();
  EXPECT_THROW(parse_marked("[[E001 ent_001]] .", c.vocab), ParseError);
  EXPECT_THROW(parse_marked("[[E001|ent_001 .", c.vocab), ParseError);
}

TEST(SentenceTest, SpanValidation) {
  Sentence s;
  s.tokens = {5, 6, 7};
  s.mentions = {{"A", 0, 2}, {"B", 1, 3}};
  EXPECT_THROW(validate_spans(s), ContractError);
  s.mentions = {{"A", 2, 4}};
  EXPECT_THROW(validate_spans(s), ContractError);
  s.mentions = {{"A", 1, 1}};
  EXPECT_THROW(validate_spans(s), ContractError);
  s.mentions = {{"A", 0, 1}, {"B", 1, 3}};
  EXPECT_NO_THROW(validate_spans(s));
}

TEST(CatalogTest, BucketsPartitionFrequencies) {
  EXPECT_EQ(frequency_bucket(0), 0u);
  EXPECT_EQ(frequency_bucket(9), 0u);
  EXPECT_EQ(frequency_bucket(10), 1u);
  EXPECT_EQ(frequency_bucket(49), 1u);
  EXPECT_EQ(frequency_bucket(50), 2u);
  EXPECT_EQ(frequency_bucket(99), 2u);
  EXPECT_EQ(frequency_bucket(100), 3u);
  EXPECT_EQ(frequency_bucket(1u << 30), 3u);
  std::array<std::size_t, kBucketCount> counts{};
  for (const auto& e : default_corpus().catalog.entities()) {
    ++counts[frequency_bucket(e.train_frequency)];
  }
  EXPECT_EQ(counts[0] + counts[1] + counts[2] + counts[3], default_corpus().catalog.size());
}

TEST(CatalogTest, InvariantsAndRoundTrip) {
  const auto& c = default_corpus();
  EXPECT_NO_THROW(c.catalog.validate(c.vocab));
  for (const auto& e : c.catalog.entities()) {
    EXPECT_GE(e.pieces.size(), 2u) << e.id;
    for (const auto& [rel, answer] : e.facts) {
      EXPECT_EQ(tokenize(answer, c.vocab).size(), 1u) << e.id << " " << rel;
    }
  }
  const auto dir = testing::scratch_dir("catalog");
  c.catalog.save(dir / "c.tsv");
  EXPECT_EQ(EntityCatalog::load(dir / "c.tsv"), c.catalog);
  EXPECT_THROW(c.catalog.at("E999"), IndexError);
}

TEST(CatalogTest, ValidateRejectsSingleTokenSurface) {
  auto vocab = testing::make_vocab({"solo", "x"});
  EntityCatalog catalog;
  catalog.add({"E1", "solo", {"solo"}, {{"r", "x"}}, 3});
  EXPECT_THROW(catalog.validate(vocab), ConfigError);
}

TEST(ClozeTest, SaveLoadRoundTrip) {
  const auto dir = testing::scratch_dir("cloze");
  save_cloze(dir / "q.tsv", default_corpus().cloze);
  EXPECT_EQ(load_cloze(dir / "q.tsv"), default_corpus().cloze);
}

TEST(GeneratorTest, SameSeedGivesIdenticalFiles) {
  const auto a = testing::scratch_dir("gen_a");
  const auto b = testing::scratch_dir("gen_b");
  write_corpus(generate_corpus(CorpusConfig{}), a);
  write_corpus(generate_corpus(CorpusConfig{}), b);
  for (const char* f : {CorpusFiles::kVocab, CorpusFiles::kCatalog, CorpusFiles::kTrain,
                        CorpusFiles::kLookup, CorpusFiles::kCloze}) {
    const std::string content = slurp(a / f);
    EXPECT_FALSE(content.empty()) << f;
    EXPECT_EQ(content, slurp(b / f)) << f;
  }
  CorpusConfig other;
  other.seed = 7;
  EXPECT_NE(generate_corpus(other).train, default_corpus().train);
}

TEST(GeneratorTest, TrainMentionsMatchCatalogFrequencies) {
  const auto& c = default_corpus();
  std::map<std::string, std::size_t> mentions;
  for (const auto& line : c.train) {
    for (const auto& m : parse_marked(line, c.vocab).mentions) ++mentions[m.entity_id];
  }
  for (const auto& e : c.catalog.entities()) {
    EXPECT_EQ(mentions[e.id], e.train_frequency) << e.id;
  }
}

TEST(GeneratorTest, ZeroFrequencyEntitiesAppearOnlyInLookup) {
  const auto& c = default_corpus();
  std::set<std::string> in_train;
  std::set<std::string> in_lookup;
  for (const auto& line : c.train) {
    for (const auto& m : parse_marked(line, c.vocab).mentions) in_train.insert(m.entity_id);
  }
  for (const auto& line : c.lookup) {
    for (const auto& m : parse_marked(line, c.vocab).mentions) in_lookup.insert(m.entity_id);
  }
  std::size_t zero = 0;
  for (const auto& e : c.catalog.entities()) {
    EXPECT_TRUE(in_lookup.contains(e.id)) << e.id;
    if (e.train_frequency == 0) {
      ++zero;
      EXPECT_FALSE(in_train.contains(e.id)) << e.id;
    }
  }
  EXPECT_EQ(zero, CorpusConfig{}.zero_frequency_tail);
}

TEST(GeneratorTest, ZipfRankOneShareIsInverseHarmonic) {
  CorpusConfig config;
  config.zipf_exponent = 1.0;
  config.zero_frequency_tail = 0;
  config.mention_budget = 20000;
  config.appositives_per_profile = 1;
  const auto c = generate_corpus(config);
  std::map<std::string, std::size_t> mentions;
  std::size_t total = 0;
  for (const auto& line : c.train) {
    for (const auto& m : parse_marked(line, c.vocab).mentions) {
      ++mentions[m.entity_id];
      ++total;
    }
  }
  std::size_t top = 0;
  for (const auto& [id, count] : mentions) top = std::max(top, count);
  double h50 = 0.0;
  for (int r = 1; r <= 50; ++r) h50 += 1.0 / r;
  EXPECT_NEAR(static_cast<double>(top) / static_cast<double>(total), 1.0 / h50, 0.005);
}

TEST(GeneratorTest, ZipfFrequencyFormula) {
  const auto f = zipf_frequencies(4, 1.0, 100, 1);
  const double h = 1.0 + 0.5 + 1.0 / 3 + 0.25;
  EXPECT_EQ(f[0], static_cast<std::size_t>(100 / h));
  EXPECT_EQ(f[1], static_cast<std::size_t>(50 / h));
  EXPECT_EQ(f[2], static_cast<std::size_t>(100.0 / 3 / h));
  EXPECT_EQ(f[3], 0u);
}

TEST(GeneratorTest, ClozeQueriesNeverVerbatimInTrain) {
  const auto& c = default_corpus();
  std::set<std::vector<TokenId>> train;
  for (const auto& line : c.train) train.insert(parse_marked(line, c.vocab).tokens);
  for (const auto& q : c.cloze) {
    auto s = parse_marked(q.text, c.vocab);
    ASSERT_EQ(std::count(s.tokens.begin(), s.tokens.end(), kMask), 1) << q.id;
    std::replace(s.tokens.begin(), s.tokens.end(), kMask, c.vocab.at(q.gold));
    EXPECT_FALSE(train.contains(s.tokens)) << q.id;
    EXPECT_EQ(c.catalog.at(q.subject_id).facts.at(q.relation), q.gold);
    EXPECT_EQ(c.catalog.at(q.subject_id).train_frequency, q.subject_frequency);
  }
  EXPECT_EQ(c.cloze.size(), c.catalog.size() * Grammar::standard().relations.size());
}

TEST(GeneratorTest, LookupDisjointFromTrain) {
  const auto& c = default_corpus();
  std::set<std::string> train(c.train.begin(), c.train.end());
  for (const auto& line : c.lookup) EXPECT_FALSE(train.contains(line)) << line;
}

TEST(GeneratorTest, ConfigErrors) {
  CorpusConfig one;
  one.entities = 1;
  EXPECT_THROW(generate_corpus(one), ConfigError);
  CorpusConfig multiword;
  multiword.grammar.relations[0].answer_prefix = "new city_";
  EXPECT_THROW(generate_corpus(multiword), ConfigError);
  CorpusConfig single_template;
  single_template.grammar.relations[0].templates.resize(1);
  EXPECT_THROW(generate_corpus(single_template), ConfigError);
}

class OccurrenceTest : public ::testing::Test {
 protected:
  Vocabulary vocab = testing::make_vocab({"ent_", "a", "b", "c", "saw", "met", "."});

  Sentence line(const std::string& text) { return parse_marked(text, vocab); }
};

TEST_F(OccurrenceTest, SingleMentionMasksSpanStart) {
  const std::vector<Sentence> corpus = {line("a saw [[X|ent_ b c]] ."),
                                        line("nothing here .")};
  const auto set = index_occurrences("X", corpus, 256, "lookup");
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.source, "lookup");
  const auto& o = set.occurrences[0];
  EXPECT_EQ(o.mask_position, 2u);
  EXPECT_EQ(o.tokens, (std::vector<TokenId>{vocab.at("a"), vocab.at("saw"), kMask,
                                            vocab.at(".")}));
  EXPECT_EQ(o.source_sentence, 0u);
}

TEST_F(OccurrenceTest, CapKeepsFirstEncountered) {
  std::vector<Sentence> corpus;
  for (int i = 0; i < 300; ++i) {
    // Distinct sentences: i copies of "a" then the mention.
    std::string text;
    for (int j = 0; j < i % 20; ++j) text += "a ";
    for (int j = 0; j < i / 20; ++j) text += "b ";
    corpus.push_back(line(text + "[[X|ent_ c]] ."));
  }
  const auto set = index_occurrences("X", corpus, 256);
  ASSERT_EQ(set.size(), 256u);
  for (std::size_t i = 0; i < 256; ++i) EXPECT_EQ(set.occurrences[i].source_sentence, i);
}

TEST_F(OccurrenceTest, DuplicatesCountedOnce) {
  const std::vector<Sentence> corpus = {line("a saw [[X|ent_ b]] ."), line("a saw [[X|ent_ b]] ."),
                                        line("b saw [[X|ent_ b]] .")};
  const auto set = index_occurrences("X", corpus);
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.occurrences[1].source_sentence, 2u);
}

TEST_F(OccurrenceTest, OneOccurrencePerMention) {
  const std::vector<Sentence> corpus = {line("[[X|ent_ a]] met [[Y|ent_ c]] met [[X|ent_ a]] .")};
  const auto set = index_occurrences("X", corpus);
  ASSERT_EQ(set.size(), 2u);
  const TokenId e = vocab.at("ent_"), a = vocab.at("a"), c = vocab.at("c"),
                met = vocab.at("met"), dot = vocab.at(".");
  EXPECT_EQ(set.occurrences[0].tokens, (std::vector<TokenId>{kMask, met, e, c, met, e, a, dot}));
  EXPECT_EQ(set.occurrences[0].mask_position, 0u);
  EXPECT_EQ(set.occurrences[1].tokens, (std::vector<TokenId>{e, a, met, e, c, met, kMask, dot}));
  EXPECT_EQ(set.occurrences[1].mask_position, 6u);
}

TEST_F(OccurrenceTest, AbsentEntityGivesEmptySet) {
  const std::vector<Sentence> corpus = {line("a saw [[X|ent_ b]] .")};
  EXPECT_TRUE(index_occurrences("Z", corpus).empty());
}

TEST(OccurrenceCorpusTest, RestoreReproducesSourceAndOneMask) {
  const auto& c = default_corpus();
  std::vector<Sentence> lookup;
  for (const auto& l : c.lookup) lookup.push_back(parse_marked(l, c.vocab));
  std::vector<std::string> ids;
  for (const auto& e : c.catalog.entities()) ids.push_back(e.id);
  const auto serial = index_all(ids, lookup, kDefaultOccurrenceCap, "lookup", 1);
  const auto parallel = index_all(ids, lookup, kDefaultOccurrenceCap, "lookup", 4);
  ASSERT_EQ(serial.size(), ids.size());
  std::set<std::vector<TokenId>> source;
  for (const auto& s : lookup) source.insert(s.tokens);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    EXPECT_EQ(serial[i].entity_id, ids[i]);
    ASSERT_EQ(serial[i].occurrences, parallel[i].occurrences);
    EXPECT_LE(serial[i].size(), kDefaultOccurrenceCap);
    std::vector<TokenId> pieces;
    for (const auto& p : c.catalog.at(ids[i]).pieces) pieces.push_back(c.vocab.at(p));
    for (const auto& o : serial[i].occurrences) {
      EXPECT_EQ(std::count(o.tokens.begin(), o.tokens.end(), kMask), 1);
      EXPECT_EQ(o.tokens[o.mask_position], kMask);
      EXPECT_TRUE(source.contains(restore(o, pieces)));
    }
  }
}

}  // namespace
}  // namespace pelt::corpus
