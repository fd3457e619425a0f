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

#ifndef PELT_MODEL_GRADCHECK_H_
#define PELT_MODEL_GRADCHECK_H_

#include <cstddef>
#include <cstdint>

#include "pelt/numerics/grad_check.h"

namespace pelt::model {

// Relative-error denominator floor for the full-loss check. Central
// differences at h=1e-5 carry about 1e-11 of absolute rounding noise, and the
// key biases have an identically zero gradient.
inline constexpr double kMlmGradCheckFloor = 1e-6;

// A randomly initialized 64-bit model and a random masked batch.
struct MlmGradCheckSetup {
  std::size_t dim = 32;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t vocab = 512;
  std::size_t max_len = 16;
  std::size_t sentences = 4;
  std::size_t length = 10;
  std::size_t masks_per_sentence = 2;
  double ln_eps = 1e-5;
  // Standard deviation of the initial weight matrices.
  double init_scale = 0.1;
  std::uint64_t seed = 0;
};

// Finite-difference check of the full MLM loss over sampled coordinates.
numerics::GradCheckResult check_mlm_gradients(const MlmGradCheckSetup& setup,
                                              const numerics::GradCheckOptions& options);

}  // namespace pelt::model

#endif  // PELT_MODEL_GRADCHECK_H_
