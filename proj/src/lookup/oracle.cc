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

#include "pelt/lookup/oracle.h"

#include <cmath>
#include <numeric>

#include "pelt/common/error.h"
#include "pelt/common/random.h"
#include "pelt/lookup/build.h"
#include "pelt/numerics/ops.h"

namespace pelt::lookup {

namespace nx = pelt::numerics;

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("cosine: vectors differ in width");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DegenerateDirectionError("cosine of a zero vector");
  return dot / std::sqrt(na * nb);
}

OracleReport gradient_direction_oracle(const model::Model<double>& model,
                                       const corpus::OccurrenceSet& set,
                                       const OracleOptions& options) {
  const auto rs = collect_masked_outputs(model, set);
  const std::size_t m = rs.size(), d = model.config().dim;

  OracleReport report;
  report.occurrences = m;
  report.sum_r.assign(d, 0.0);
  std::vector<double> r_values;
  for (const auto& r : rs) {
    r_values.insert(r_values.end(), r.begin(), r.end());
    for (std::size_t j = 0; j < d; ++j) report.sum_r[j] += r[j];
  }
  const nx::Tensor<double> r_matrix({m, d}, r_values);

  std::vector<corpus::TokenId> partition = options.partition;
  const auto& embeddings = model.output_embeddings();
  if (partition.empty()) {
    partition.resize(embeddings.rows());
    std::iota(partition.begin(), partition.end(), corpus::TokenId{0});
  }
  report.partition_size = partition.size();
  std::vector<double> e_rows;
  for (auto t : partition) {
    if (t >= embeddings.rows()) {
      throw IndexError("oracle: partition row " + std::to_string(t) + " outside vocabulary");
    }
    const auto row = embeddings.row(t);
    e_rows.insert(e_rows.end(), row.begin(), row.end());
  }
  const nx::Tensor<double> partition_rows({partition.size(), d}, e_rows);

  // Surrogate: L_s(e) = sum_i log Z_i - e . r_i with Z_i fixed.
  {
    std::vector<double> point = options.surrogate_point;
    if (point.empty()) {
      Rng rng(options.seed);
      point.resize(d);
      for (double& x : point) x = rng.normal();
    }
    if (point.size() != d) throw DimensionError("oracle: surrogate point has wrong width");
    const nx::Tensor<double> e({d, 1}, point);
    nx::Tape<double> tape;
    const nx::Var rv = tape.leaf(r_matrix, false);
    const nx::Var ev = tape.leaf(e, true);
    const nx::Var pv = tape.leaf(partition_rows, false);
    // log Z_i over the partition only, a constant for e.
    const nx::Var z_logits = nx::matmul_transposed(tape, rv, pv);
    double log_z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = tape.value(z_logits).row(i);
      double peak = row[0];
      for (double x : row) peak = std::max(peak, x);
      double total = 0.0;
      for (double x : row) total += std::exp(x - peak);
      log_z += peak + std::log(total);
    }
    const nx::Var scores = nx::sum(tape, nx::matmul(tape, rv, ev));
    const nx::Var loss = nx::add(tape, tape.constant(nx::Tensor<double>({1}, {log_z})),
                                 nx::scale(tape, scores, -1.0));
    tape.backward(loss);
    const auto g = tape.grad(ev);
    for (std::size_t j = 0; j < d; ++j) {
      report.surrogate_max_deviation =
          std::max(report.surrogate_max_deviation, std::abs(g[j] + report.sum_r[j]));
    }
  }

  // Full: logits_i = [E r_i ; e . r_i], target e, gradient at e = 0.
  {
    const nx::Tensor<double> e({1, d});
    nx::Tape<double> tape;
    const nx::Var rv = tape.leaf(r_matrix, false);
    const nx::Var ev = tape.leaf(e, true);
    const nx::Var pv = tape.leaf(partition_rows, false);
    const nx::Var logits = nx::concat_columns(tape, nx::matmul_transposed(tape, rv, pv),
                                              nx::matmul_transposed(tape, rv, ev));
    const std::vector<std::size_t> targets(m, partition.size());
    const nx::Var loss = nx::cross_entropy(tape, logits, std::span<const std::size_t>(targets));
    tape.backward(loss);
    const auto g = tape.grad(ev);
    report.full_step.resize(d);
    for (std::size_t j = 0; j < d; ++j) report.full_step[j] = -g[j];
    report.full_cosine = cosine(report.full_step, report.sum_r);
  }
  return report;
}

}  // namespace pelt::lookup
