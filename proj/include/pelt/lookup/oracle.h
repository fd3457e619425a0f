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

#ifndef PELT_LOOKUP_ORACLE_H_
#define PELT_LOOKUP_ORACLE_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "pelt/corpus/occurrences.h"
#include "pelt/model/model.h"

namespace pelt::lookup {

struct OracleOptions {
  // Point at which the surrogate gradient is evaluated; empty means a
  // seeded random point.
  std::vector<double> surrogate_point;
  std::uint64_t seed = 0;
  // Vocabulary rows forming the partition function alongside e; empty
  // means the whole vocabulary.
  std::vector<corpus::TokenId> partition;
};

struct OracleReport {
  std::size_t occurrences = 0;
  std::size_t partition_size = 0;
  // max_j |dL_s/dE(e)_j + (sum r)_j| with e left out of every Z.
  double surrogate_max_deviation = 0.0;
  // cos(-dL/dE(e) at E(e) = 0, sum r) with e inside every Z.
  double full_cosine = 0.0;
  std::vector<double> sum_r;
  std::vector<double> full_step;
};

// Treats e as an extra vocabulary entry whose embedding is the only free
// variable and each occurrence's MASK target. Gradients come from the tape.
OracleReport gradient_direction_oracle(const model::Model<double>& model,
                                       const corpus::OccurrenceSet& set,
                                       const OracleOptions& options = {});

double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pelt::lookup

#endif  // PELT_LOOKUP_ORACLE_H_
