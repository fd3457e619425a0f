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
#include <set>

#include "pelt/common/error.h"
#include "pelt/corpus/generator.h"
#include "pelt/corpus/sentence.h"
#include "pelt/infuse/infuse.h"
#include "pelt/probe/probe.h"
#include "test_util.h"

namespace pelt::probe {
namespace {

class ProbeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus::CorpusConfig cc;
    cc.entities = 12;
    cc.mention_budget = 200;
    cc.zero_frequency_tail = 2;
    cc.lookup_per_entity = 4;
    corpus_ = new corpus::GeneratedCorpus(corpus::generate_corpus(cc));
    model_ = new model::Model<float>(testing::tiny_model<float>(corpus_->vocab.size(), 9));
    std::vector<corpus::Sentence> lookup;
    for (const auto& l : corpus_->lookup) lookup.push_back(corpus::parse_marked(l, corpus_->vocab));
    std::vector<std::string> ids;
    for (const auto& e : corpus_->catalog.entities()) ids.push_back(e.id);
    directions_ = new lookup::Directions(
        lookup::compute_directions(*model_, ids, lookup, 256, "lookup"));
  }
  static void TearDownTestSuite() {
    delete corpus_;
    delete model_;
    delete directions_;
  }

  static const corpus::Vocabulary& vocab() { return corpus_->vocab; }
  static const std::vector<corpus::ClozeQuery>& cloze() { return corpus_->cloze; }

  // Vanilla logits for a query, computed without the probe.
  static std::vector<float> logits_for(const corpus::ClozeQuery& q) {
    const auto s = corpus::parse_marked(q.text, vocab());
    const auto pos = static_cast<std::size_t>(
        std::find(s.tokens.begin(), s.tokens.end(), corpus::kMask) - s.tokens.begin());
    const auto slots = model::token_slots(std::span<const corpus::TokenId>(s.tokens));
    return model::logits_at(*model_, std::span<const model::Slot>(slots), pos);
  }

  static std::vector<corpus::ClozeQuery> with_gold_at_rank(std::size_t rank) {
    auto qs = cloze();
    for (auto& q : qs) {
      const auto logits = logits_for(q);
      const auto order = model::rank_tokens(std::span<const float>(logits), rank);
      q.gold = vocab().token(order[rank - 1]);
    }
    return qs;
  }

  static corpus::GeneratedCorpus* corpus_;
  static model::Model<float>* model_;
  static lookup::Directions* directions_;
};

corpus::GeneratedCorpus* ProbeTest::corpus_ = nullptr;
model::Model<float>* ProbeTest::model_ = nullptr;
lookup::Directions* ProbeTest::directions_ = nullptr;

const Digest kFingerprint = [] {
  Digest d{};
  d.fill(0x42);
  return d;
}();

TEST_F(ProbeTest, GoldAtTopIsPerfect) {
  const auto report = run_probe(with_gold_at_rank(1), vocab(), *model_, kFingerprint, nullptr);
  EXPECT_TRUE(report.rejected.empty());
  EXPECT_DOUBLE_EQ(report.mean_p1, 1.0);
  EXPECT_DOUBLE_EQ(report.micro_p1, 1.0);
  for (const auto& q : report.queries) EXPECT_EQ(q.gold_rank, 1u);
}

TEST_F(ProbeTest, GoldAtSecondScoresZero) {
  const auto report = run_probe(with_gold_at_rank(2), vocab(), *model_, kFingerprint, nullptr);
  EXPECT_DOUBLE_EQ(report.mean_p1, 0.0);
  for (const auto& q : report.queries) EXPECT_EQ(q.gold_rank, 2u);
  for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
    if (report.per_bucket[b].count == 0) continue;
    EXPECT_DOUBLE_EQ(report.bucket_mean_rank[b], 2.0);
  }
}

TEST_F(ProbeTest, AggregatesRecountFromQueries) {
  auto qs = with_gold_at_rank(1);
  // Push every other query of the early-alphabet relations to rank 2.
  std::map<std::string, int> seen;
  for (auto& q : qs) {
    if (seen[q.relation]++ % 2 == 0 && q.relation < "m") {
      q.gold = vocab().token(model::rank_tokens(std::span<const float>(logits_for(q)), 2)[1]);
    }
  }
  const auto report = run_probe(qs, vocab(), *model_, kFingerprint, nullptr);
  std::map<std::string, std::pair<int, int>> per_rel;
  std::array<std::map<std::string, std::pair<int, int>>, corpus::kBucketCount> per_bucket;
  std::size_t hits = 0;
  for (const auto& q : report.queries) {
    const int hit = q.predicted == q.gold;
    per_rel[q.relation].first += hit;
    per_rel[q.relation].second += 1;
    per_bucket[q.bucket][q.relation].first += hit;
    per_bucket[q.bucket][q.relation].second += 1;
    hits += hit;
  }
  double macro = 0.0;
  for (const auto& [r, c] : per_rel) macro += double(c.first) / c.second;
  macro /= per_rel.size();
  EXPECT_NEAR(report.mean_p1, macro, 1e-15);
  EXPECT_NEAR(report.micro_p1, double(hits) / report.queries.size(), 1e-15);
  EXPECT_LT(report.mean_p1, 1.0);
  EXPECT_GT(report.mean_p1, 0.0);
  std::size_t total = 0;
  for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
    total += report.per_bucket[b].count;
    if (per_bucket[b].empty()) continue;
    double m = 0.0;
    for (const auto& [r, c] : per_bucket[b]) m += double(c.first) / c.second;
    EXPECT_NEAR(report.bucket_mean_p1[b], m / per_bucket[b].size(), 1e-15) << b;
  }
  EXPECT_EQ(total, qs.size());
}

TEST_F(ProbeTest, EmptyTableMatchesVanilla) {
  const lookup::EntityEmbeddingTable empty(kFingerprint, model_->config().dim, 3.0f);
  const auto vanilla = run_probe(cloze(), vocab(), *model_, kFingerprint, nullptr);
  const auto infused = run_probe(cloze(), vocab(), *model_, kFingerprint, &empty);
  ASSERT_EQ(vanilla.queries.size(), infused.queries.size());
  for (std::size_t i = 0; i < vanilla.queries.size(); ++i) {
    EXPECT_EQ(vanilla.queries[i].predicted, infused.queries[i].predicted);
    EXPECT_EQ(vanilla.queries[i].gold_rank, infused.queries[i].gold_rank);
  }
  EXPECT_EQ(vanilla.mean_p1, infused.mean_p1);
  EXPECT_EQ(infused.mode, "infused");
}

TEST_F(ProbeTest, InfusedMatchesDirectComputation) {
  const auto table = lookup::table_from_directions(*directions_, 4.0, kFingerprint,
                                                   model_->config().dim);
  const auto report = run_probe(cloze(), vocab(), *model_, kFingerprint, &table);
  for (std::size_t i = 0; i < cloze().size(); ++i) {
    const auto s = corpus::parse_marked(cloze()[i].text, vocab());
    const auto pos = static_cast<std::size_t>(
        std::find(s.tokens.begin(), s.tokens.end(), corpus::kMask) - s.tokens.begin());
    const auto logits = infuse::infused_logits(*model_, table, s, pos);
    EXPECT_EQ(report.queries[i].predicted,
              model::rank_tokens(std::span<const float>(logits), 1).front());
  }
}

TEST_F(ProbeTest, ThreadsDoNotChangeResults) {
  ProbeOptions four;
  four.threads = 4;
  const auto a = run_probe(cloze(), vocab(), *model_, kFingerprint, nullptr);
  const auto b = run_probe(cloze(), vocab(), *model_, kFingerprint, nullptr, four);
  EXPECT_EQ(format_tsv(a), format_tsv(b));
}

TEST_F(ProbeTest, RestrictedRanksAmongRelationAnswers) {
  ProbeOptions restricted;
  restricted.restrict_candidates = true;
  const auto report = run_probe(cloze(), vocab(), *model_, kFingerprint, nullptr, restricted);
  std::map<std::string, std::set<std::string>> answers;
  for (const auto& q : cloze()) answers[q.relation].insert(q.gold);
  for (const auto& q : report.queries) {
    EXPECT_TRUE(answers[q.relation].count(vocab().token(q.predicted))) << q.id;
    EXPECT_LE(q.gold_rank, answers[q.relation].size());
    EXPECT_GE(q.gold_rank, 1u);
  }
}

TEST_F(ProbeTest, RejectsMalformedQueries) {
  auto qs = cloze();
  qs[0].gold = "new city";
  qs[1].text = "no mask here";
  qs[2].text = "[MASK] and [MASK]";
  qs[3].gold = "zzzqqq";
  const auto report = run_probe(qs, vocab(), *model_, kFingerprint, nullptr);
  ASSERT_EQ(report.rejected.size(), 4u);
  EXPECT_EQ(report.rejected[0].id, qs[0].id);
  EXPECT_EQ(report.queries.size(), qs.size() - 4);
  EXPECT_NE(format_report(report).find("rejected " + qs[2].id), std::string::npos);
  EXPECT_THROW(run_probe({}, vocab(), *model_, kFingerprint, nullptr), ContractError);
}

TEST_F(ProbeTest, RefusesMismatchedTable) {
  Digest other{};
  const lookup::EntityEmbeddingTable wrong_fp(other, model_->config().dim, 1.0f);
  EXPECT_THROW(run_probe(cloze(), vocab(), *model_, kFingerprint, &wrong_fp), FingerprintError);
  const auto narrow = lookup::table_from_directions(*directions_, 1.0, kFingerprint,
                                                    model_->config().dim);
  auto small_vocab = testing::make_vocab({"a", "b"});
  EXPECT_THROW(run_probe(cloze(), small_vocab, *model_, kFingerprint, &narrow), ConfigError);
}

TEST_F(ProbeTest, SweepSortsDedupsAndSelects) {
  const auto sweep = sweep_norm(cloze(), vocab(), *model_, kFingerprint, *directions_,
                                {3.0, 1.0, 2.0, 3.0});
  ASSERT_EQ(sweep.curve.size(), 3u);
  EXPECT_EQ(sweep.curve[0].norm, 1.0);
  EXPECT_EQ(sweep.curve[2].norm, 3.0);
  ASSERT_EQ(sweep.warnings.size(), 1u);
  EXPECT_NE(sweep.warnings[0].find("3.000"), std::string::npos);
  double best = -1.0;
  double best_l = 0.0;
  for (const auto& p : sweep.curve) {
    EXPECT_EQ(p.mean_p1, p.report.mean_p1);
    if (p.mean_p1 > best) {
      best = p.mean_p1;
      best_l = p.norm;
    }
  }
  EXPECT_EQ(sweep.selected, best_l);
  EXPECT_THROW(sweep_norm(cloze(), vocab(), *model_, kFingerprint, *directions_, {}),
               ContractError);
  EXPECT_THROW(sweep_norm(cloze(), vocab(), *model_, kFingerprint, *directions_, {1.0, -2.0}),
               ContractError);
}

TEST_F(ProbeTest, TablesAcrossNormsShareDirections) {
  const auto a = lookup::table_from_directions(*directions_, 1.0, kFingerprint,
                                               model_->config().dim);
  const auto b = lookup::table_from_directions(*directions_, 9.0, kFingerprint,
                                               model_->config().dim);
  for (const auto& [id, entry] : a.entries()) {
    const auto& v = b.find(id)->vector;
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      dot += double(entry.vector[i]) * v[i];
      na += double(entry.vector[i]) * entry.vector[i];
      nb += double(v[i]) * v[i];
    }
    EXPECT_NEAR(dot / std::sqrt(na * nb), 1.0, 1e-6) << id;
  }
}

TEST(ParseNormsTest, ListsAndRanges) {
  EXPECT_EQ(parse_norms("1..4"), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(parse_norms("2.5"), (std::vector<double>{2.5}));
  EXPECT_EQ(parse_norms("1,0.5,8"), (std::vector<double>{1, 0.5, 8}));
  EXPECT_THROW(parse_norms("1,,2"), ConfigError);
  EXPECT_THROW(parse_norms("5..1"), ConfigError);
  EXPECT_THROW(parse_norms("abc"), ConfigError);
}

}  // namespace
}  // namespace pelt::probe
