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

#include "pelt/numerics/adam.h"

#include <cmath>
#include <string>

#include "pelt/common/error.h"

namespace pelt::numerics {

template <typename T>
void Adam<T>::step(ParamStore<T>& params, double lr) {
  for (const auto& entry : params) {
    if (!entry.tensor.has_grad()) {
      throw ContractError("adam: parameter '" + entry.name + "' has no gradient");
    }
  }
  if (first_.empty()) {
    for (const auto& entry : params) {
      first_.emplace_back(entry.tensor.size(), T{0});
      second_.emplace_back(entry.tensor.size(), T{0});
    }
  } else if (first_.size() != params.size()) {
    throw ContractError("adam: parameter set changed between steps");
  }
  ++steps_;
  const double correction1 = 1.0 - std::pow(options_.beta1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(options_.beta2, static_cast<double>(steps_));
  const T b1 = static_cast<T>(options_.beta1);
  const T b2 = static_cast<T>(options_.beta2);
  const T step_size = static_cast<T>(lr / correction1);
  const T inv_sqrt_c2 = static_cast<T>(1.0 / std::sqrt(correction2));
  const T eps = static_cast<T>(options_.epsilon);
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto values = params[p].tensor.values();
    auto grads = params[p].tensor.grad();
    auto& m = first_[p];
    auto& v = second_[p];
    for (std::size_t i = 0; i < values.size(); ++i) {
      const T g = grads[i];
      m[i] = b1 * m[i] + (T{1} - b1) * g;
      v[i] = b2 * v[i] + (T{1} - b2) * g * g;
      values[i] -= step_size * m[i] / (std::sqrt(v[i]) * inv_sqrt_c2 + eps);
    }
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace pelt::numerics
