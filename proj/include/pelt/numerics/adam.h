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

#ifndef PELT_NUMERICS_ADAM_H_
#define PELT_NUMERICS_ADAM_H_

#include <cstdint>
#include <vector>

#include "pelt/numerics/param_store.h"

namespace pelt::numerics {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. First and second moments are kept per
// parameter, aligned with the store's insertion order.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Applies one update using the gradients currently held by `params`.
  // Every parameter must carry a gradient buffer.
  void step(ParamStore<T>& params, double lr);

  std::uint64_t steps_taken() const { return steps_; }

 private:
  AdamOptions options_;
  std::uint64_t steps_ = 0;
  std::vector<std::vector<T>> first_;
  std::vector<std::vector<T>> second_;
};

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace pelt::numerics

#endif  // PELT_NUMERICS_ADAM_H_
