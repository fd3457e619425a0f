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

#include "pelt/numerics/grad_check.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pelt/common/error.h"
#include "pelt/common/random.h"

namespace pelt::numerics {

namespace {

double checked(double value, const std::string& where) {
  if (!std::isfinite(value)) {
    throw NumericalError("grad_check: non-finite loss " + std::to_string(value) +
                         " while perturbing " + where);
  }
  return value;
}

}  // namespace

GradCheckResult grad_check(const LossClosure& loss, ParamStore<double>& params,
                           const GradCheckOptions& options) {
  if (!(options.step > 0.0) || !std::isfinite(options.step)) {
    throw std::invalid_argument("grad_check: step must be a positive finite number");
  }
  params.zero_grad();
  checked(loss(params, true), "<analytic pass>");

  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (const auto& entry : params) {
    auto g = entry.tensor.grad();
    analytic.emplace_back(g.begin(), g.end());
  }

  // (parameter, coordinate) pairs, sampled uniformly over all coordinates.
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  const std::size_t total = params.value_count();
  if (options.samples == 0 || options.samples >= total) {
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (std::size_t i = 0; i < params[p].tensor.size(); ++i) coords.emplace_back(p, i);
    }
  } else {
    std::vector<std::size_t> offsets;
    for (std::size_t p = 0, acc = 0; p < params.size(); ++p) {
      offsets.push_back(acc);
      acc += params[p].tensor.size();
    }
    Rng rng(options.seed);
    for (std::size_t s = 0; s < options.samples; ++s) {
      const std::size_t flat = rng.below(total);
      const auto it = std::upper_bound(offsets.begin(), offsets.end(), flat) - 1;
      const std::size_t p = static_cast<std::size_t>(it - offsets.begin());
      coords.emplace_back(p, flat - *it);
    }
  }

  GradCheckResult result;
  for (auto [p, i] : coords) {
    double& x = params[p].tensor.values()[i];
    const double saved = x;
    const std::string where = params[p].name + "[" + std::to_string(i) + "]";
    x = saved + options.step;
    const double plus = checked(loss(params, false), where);
    x = saved - options.step;
    const double minus = checked(loss(params, false), where);
    x = saved;
    const double numeric = (plus - minus) / (2.0 * options.step);
    const double a = analytic[p][i];
    const double denom = std::max({std::abs(a), std::abs(numeric), options.floor});
    const double rel = std::abs(a - numeric) / denom;
    ++result.coordinates_checked;
    if (rel > result.max_relative_error || result.worst_parameter.empty()) {
      result.max_relative_error = rel;
      result.worst_parameter = params[p].name;
      result.worst_index = i;
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace pelt::numerics
