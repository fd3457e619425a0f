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

#include "pelt/probe/probe.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "pelt/common/error.h"
#include "pelt/common/parallel.h"
#include "pelt/corpus/sentence.h"
#include "pelt/infuse/infuse.h"

namespace pelt::probe {

namespace {

struct PreparedQuery {
  const corpus::ClozeQuery* query;
  corpus::Sentence sentence;
  std::size_t mask_position;
  corpus::TokenId gold;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

ProbeReport run_probe(const std::vector<corpus::ClozeQuery>& queries,
                      const corpus::Vocabulary& vocab, const model::Model<float>& model,
                      const Digest& fingerprint, const lookup::EntityEmbeddingTable* table,
                      const ProbeOptions& options) {
  if (queries.empty()) throw ContractError("probe: empty cloze set");
  if (vocab.size() != model.config().vocab) {
    throw ConfigError("probe: vocabulary has " + std::to_string(vocab.size()) +
                      " entries, checkpoint expects " + std::to_string(model.config().vocab));
  }
  ProbeReport report;
  report.mode = table ? "infused" : "vanilla";
  report.model_fingerprint = to_hex(fingerprint);
  report.restricted = options.restrict_candidates;
  if (table) {
    table->require_fingerprint(fingerprint);
    if (!table->empty()) model::expect_dim(model.config(), table->dim(), "probe");
    report.norm = table->norm();
  }

  std::vector<PreparedQuery> prepared;
  for (const auto& q : queries) {
    const auto gold = corpus::tokenize(q.gold, vocab);
    if (gold.size() != 1 || gold[0] == corpus::kUnk) {
      report.rejected.push_back({q.id, "gold answer '" + q.gold + "' is not a vocabulary token"});
      continue;
    }
    corpus::Sentence s;
    try {
      s = corpus::parse_marked(q.text, vocab);
    } catch (const ParseError& e) {
      report.rejected.push_back({q.id, e.what()});
      continue;
    }
    const auto masks = std::count(s.tokens.begin(), s.tokens.end(), corpus::kMask);
    if (masks != 1) {
      report.rejected.push_back({q.id, "expected one [MASK], found " + std::to_string(masks)});
      continue;
    }
    const std::size_t pos = static_cast<std::size_t>(
        std::find(s.tokens.begin(), s.tokens.end(), corpus::kMask) - s.tokens.begin());
    prepared.push_back({&q, std::move(s), pos, gold[0]});
  }
  if (prepared.empty()) throw ContractError("probe: every query was rejected");

  std::map<std::string, std::vector<corpus::TokenId>> answer_sets;
  if (options.restrict_candidates) {
    for (const auto& p : prepared) answer_sets[p.query->relation].push_back(p.gold);
  }

  report.queries.resize(prepared.size());
  parallel_for(prepared.size(), options.threads, [&](std::size_t i) {
    const PreparedQuery& p = prepared[i];
    std::vector<float> logits;
    if (table) {
      logits = infuse::infused_logits(model, *table, p.sentence, p.mask_position);
    } else {
      const auto slots = model::token_slots(p.sentence.tokens);
      logits = model::logits_at(model, std::span<const model::Slot>(slots), p.mask_position);
    }
    const std::vector<corpus::TokenId>* candidates =
        options.restrict_candidates ? &answer_sets.at(p.query->relation) : nullptr;
    const std::span<const float> view(logits);
    QueryResult& r = report.queries[i];
    r.id = p.query->id;
    r.relation = p.query->relation;
    r.bucket = corpus::frequency_bucket(p.query->subject_frequency);
    r.gold = p.gold;
    r.predicted = model::rank_tokens(view, 1, candidates).front();
    r.gold_rank = model::rank_of(view, p.gold, candidates);
  });

  std::array<std::map<std::string, Rate>, corpus::kBucketCount> bucket_relations;
  std::array<double, corpus::kBucketCount> rank_sums{};
  std::size_t hits = 0;
  for (const auto& r : report.queries) {
    const bool hit = r.predicted == r.gold;
    hits += hit;
    auto& rel = report.per_relation[r.relation];
    rel.hits += hit;
    ++rel.count;
    report.per_bucket[r.bucket].hits += hit;
    ++report.per_bucket[r.bucket].count;
    auto& br = bucket_relations[r.bucket][r.relation];
    br.hits += hit;
    ++br.count;
    rank_sums[r.bucket] += static_cast<double>(r.gold_rank);
  }
  double macro = 0.0;
  for (const auto& [name, rate] : report.per_relation) macro += rate.value();
  report.mean_p1 = macro / static_cast<double>(report.per_relation.size());
  report.micro_p1 = static_cast<double>(hits) / static_cast<double>(report.queries.size());
  for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
    if (bucket_relations[b].empty()) continue;
    double sum = 0.0;
    for (const auto& [name, rate] : bucket_relations[b]) sum += rate.value();
    report.bucket_mean_p1[b] = sum / static_cast<double>(bucket_relations[b].size());
    report.bucket_mean_rank[b] = rank_sums[b] / static_cast<double>(report.per_bucket[b].count);
  }
  return report;
}

std::string format_report(const ProbeReport& report) {
  std::ostringstream out;
  out << "probe " << report.mode << "  model " << report.model_fingerprint.substr(0, 16);
  if (report.norm) out << "  L " << fixed(*report.norm, 3);
  out << "  candidates " << (report.restricted ? "relation" : "full-vocab") << '\n';
  for (const auto& r : report.rejected) out << "rejected " << r.id << ": " << r.reason << '\n';
  out << "queries " << report.queries.size() << "  rejected " << report.rejected.size() << '\n';
  out << pad("relation", 20) << pad("P@1", 10) << "n\n";
  for (const auto& [name, rate] : report.per_relation) {
    out << pad(name, 20) << pad(fixed(rate.value()), 10) << rate.count << '\n';
  }
  out << pad("mean P@1 (macro)", 20) << fixed(report.mean_p1) << '\n';
  out << pad("P@1 (micro)", 20) << fixed(report.micro_p1) << '\n';
  out << pad("bucket", 20) << pad("mean P@1", 10) << pad("mean rank", 12) << "n\n";
  for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
    out << pad(std::string(corpus::bucket_label(b)), 20)
        << pad(fixed(report.bucket_mean_p1[b]), 10)
        << pad(fixed(report.bucket_mean_rank[b], 1), 12) << report.per_bucket[b].count << '\n';
  }
  return out.str();
}

std::string format_tsv(const ProbeReport& report) {
  std::ostringstream out;
  out << "mode\t" << report.mode << '\n';
  out << "model\t" << report.model_fingerprint << '\n';
  if (report.norm) out << "norm\t" << fixed(*report.norm, 6) << '\n';
  for (const auto& r : report.rejected) out << "rejected\t" << r.id << '\t' << r.reason << '\n';
  for (const auto& [name, rate] : report.per_relation) {
    out << "relation\t" << name << '\t' << fixed(rate.value(), 6) << '\t' << rate.count << '\n';
  }
  out << "mean_p1\tmacro\t" << fixed(report.mean_p1, 6) << '\t' << report.queries.size() << '\n';
  out << "mean_p1\tmicro\t" << fixed(report.micro_p1, 6) << '\t' << report.queries.size()
      << '\n';
  for (std::size_t b = 0; b < corpus::kBucketCount; ++b) {
    out << "bucket\t" << corpus::bucket_label(b) << '\t' << fixed(report.bucket_mean_p1[b], 6)
        << '\t' << report.per_bucket[b].count << '\t' << fixed(report.bucket_mean_rank[b], 3)
        << '\n';
  }
  for (const auto& q : report.queries) {
    out << "query\t" << q.id << '\t' << q.relation << '\t' << corpus::bucket_label(q.bucket)
        << '\t' << q.gold << '\t' << q.predicted << '\t' << q.gold_rank << '\n';
  }
  return out.str();
}

SweepResult sweep_norm(const std::vector<corpus::ClozeQuery>& queries,
                       const corpus::Vocabulary& vocab, const model::Model<float>& model,
                       const Digest& fingerprint, const lookup::Directions& directions,
                       std::vector<double> norms, const ProbeOptions& options) {
  if (norms.empty()) throw ContractError("sweep: no L values");
  for (double l : norms) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ContractError("sweep: L values must be positive, got " + fixed(l));
    }
  }
  SweepResult result;
  std::sort(norms.begin(), norms.end());
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (norms[i] == norms[i - 1]) {
      result.warnings.push_back("duplicate L value " + fixed(norms[i], 3) + " ignored");
    }
  }
  norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
  for (double l : norms) {
    auto table = lookup::table_from_directions(directions, l, fingerprint, model.config().dim);
    auto report = run_probe(queries, vocab, model, fingerprint, &table, options);
    const double p1 = report.mean_p1;
    result.curve.push_back({l, p1, std::move(report)});
  }
  const SweepPoint* best = &result.curve.front();
  for (const auto& p : result.curve) {
    if (p.mean_p1 > best->mean_p1) best = &p;
  }
  result.selected = best->norm;
  return result;
}

std::string format_sweep(const SweepResult& sweep) {
  std::ostringstream out;
  for (const auto& w : sweep.warnings) out << "warning: " << w << '\n';
  out << pad("L", 10) << pad("mean P@1", 10) << "[0,10) P@1\n";
  for (const auto& p : sweep.curve) {
    out << pad(fixed(p.norm, 3), 10) << pad(fixed(p.mean_p1), 10)
        << fixed(p.report.bucket_mean_p1[0]) << '\n';
  }
  out << "selected L " << fixed(sweep.selected, 3) << '\n';
  return out.str();
}

std::string format_sweep_tsv(const SweepResult& sweep) {
  std::ostringstream out;
  for (const auto& w : sweep.warnings) out << "warning\t" << w << '\n';
  for (const auto& p : sweep.curve) {
    out << "curve\t" << fixed(p.norm, 6) << '\t' << fixed(p.mean_p1, 6) << '\n';
  }
  out << "selected\t" << fixed(sweep.selected, 6) << '\n';
  return out.str();
}

std::vector<double> parse_norms(const std::string& text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad L value '" + std::string(s) + "' in '" + text + "'");
    }
    return v;
  };
  std::vector<double> out;
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const double lo = number(std::string_view(text).substr(0, range));
    const double hi = number(std::string_view(text).substr(range + 2));
    if (hi < lo) throw ConfigError("empty L range '" + text + "'");
    for (double v = lo; v <= hi + 1e-9; v += 1.0) out.push_back(v);
    return out;
  }
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(number(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace pelt::probe
