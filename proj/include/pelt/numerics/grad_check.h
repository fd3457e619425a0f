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

#ifndef PELT_NUMERICS_GRAD_CHECK_H_
#define PELT_NUMERICS_GRAD_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "pelt/numerics/param_store.h"

namespace pelt::numerics {

// Evaluates the loss at the current parameter values. When `with_grad` is
// true it must also leave d(loss)/d(param) in each parameter's gradient
// buffer (replacing, not accumulating).
using LossClosure = std::function<double(ParamStore<double>& params, bool with_grad)>;

struct GradCheckOptions {
  double step = 1e-5;
  // 0 checks every coordinate.
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  // Denominator floor for the relative error, so coordinates whose true
  // derivative is ~0 are judged on absolute error instead.
  double floor = 1e-8;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

// Central-difference check of analytic gradients over sampled coordinates.
// Relative error is |a - n| / max(|a|, |n|, floor). 64-bit only.
GradCheckResult grad_check(const LossClosure& loss, ParamStore<double>& params,
                           const GradCheckOptions& options = {});

}  // namespace pelt::numerics

#endif  // PELT_NUMERICS_GRAD_CHECK_H_
