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

#ifndef PELT_PROBE_PROBE_H_
#define PELT_PROBE_PROBE_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pelt/common/binary_io.h"
#include "pelt/corpus/catalog.h"
#include "pelt/corpus/cloze.h"
#include "pelt/corpus/vocabulary.h"
#include "pelt/lookup/build.h"
#include "pelt/lookup/table.h"
#include "pelt/model/model.h"

namespace pelt::probe {

struct ProbeOptions {
  // Rank only among the gold answers of the query's relation.
  bool restrict_candidates = false;
  std::size_t threads = 1;
};

struct Rate {
  std::size_t hits = 0;
  std::size_t count = 0;

  double value() const { return count ? static_cast<double>(hits) / count : 0.0; }
};

struct QueryResult {
  std::string id;
  std::string relation;
  std::size_t bucket = 0;
  corpus::TokenId gold = 0;
  corpus::TokenId predicted = 0;
  // 1-based rank of the gold token.
  std::size_t gold_rank = 0;
};

struct RejectedQuery {
  std::string id;
  std::string reason;
};

struct ProbeReport {
  std::string mode;  // "vanilla" or "infused"
  std::string model_fingerprint;
  std::optional<float> norm;
  bool restricted = false;
  std::vector<RejectedQuery> rejected;
  std::vector<QueryResult> queries;
  std::map<std::string, Rate> per_relation;
  // Unweighted mean of per-relation P@1.
  double mean_p1 = 0.0;
  // Fraction of all queries answered correctly.
  double micro_p1 = 0.0;
  std::array<Rate, corpus::kBucketCount> per_bucket{};
  // Macro over the relations present in each bucket.
  std::array<double, corpus::kBucketCount> bucket_mean_p1{};
  std::array<double, corpus::kBucketCount> bucket_mean_rank{};
};

// Evaluates every valid query; queries whose gold is not a single known
// token or whose text does not hold exactly one MASK are listed in
// `rejected`. With a table, subject (and any other known) mentions are
// infused; the table must carry `fingerprint`. Throws ContractError if no
// query survives validation.
ProbeReport run_probe(const std::vector<corpus::ClozeQuery>& queries,
                      const corpus::Vocabulary& vocab, const model::Model<float>& model,
                      const Digest& fingerprint, const lookup::EntityEmbeddingTable* table,
                      const ProbeOptions& options = {});

// Aligned human-readable form.
std::string format_report(const ProbeReport& report);
// Tab-separated lines: kind, key, value[, count].
std::string format_tsv(const ProbeReport& report);

struct SweepPoint {
  double norm = 0.0;
  double mean_p1 = 0.0;
  ProbeReport report;
};

struct SweepResult {
  std::vector<SweepPoint> curve;
  double selected = 0.0;
  std::vector<std::string> warnings;
};

// Probes one table per L built from shared directions. L values are sorted
// and deduplicated (with a warning); the argmax prefers the smaller L.
SweepResult sweep_norm(const std::vector<corpus::ClozeQuery>& queries,
                       const corpus::Vocabulary& vocab, const model::Model<float>& model,
                       const Digest& fingerprint, const lookup::Directions& directions,
                       std::vector<double> norms, const ProbeOptions& options = {});

std::string format_sweep(const SweepResult& sweep);
std::string format_sweep_tsv(const SweepResult& sweep);

// Parses "a..b" (integer steps), "a,b,c" or a single value.
std::vector<double> parse_norms(const std::string& text);

}  // namespace pelt::probe

#endif  // PELT_PROBE_PROBE_H_
