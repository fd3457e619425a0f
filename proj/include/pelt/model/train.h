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

#ifndef PELT_MODEL_TRAIN_H_
#define PELT_MODEL_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pelt/common/random.h"
#include "pelt/corpus/sentence.h"
#include "pelt/model/checkpoint.h"
#include "pelt/model/model.h"

namespace pelt::model {

struct MaskingOptions {
  // Probability that a whole entity mention is masked (one target per subword).
  double entity_rate = 0.15;
  // Probability that an ordinary token is masked.
  double token_rate = 0.15;
};

// Selected positions are always replaced by MASK. When nothing is selected,
// one unit (a mention or an ordinary token) is chosen uniformly.
MaskedSentence mask_sentence(const corpus::Sentence& sentence, const MaskingOptions& options,
                             Rng& rng);

struct TrainOptions {
  std::size_t steps = 3000;
  std::size_t batch_size = 32;
  double lr = 3e-3;
  // Linear warmup over this fraction of steps, then linear decay to 0.
  double warmup_fraction = 0.1;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 1.0;
  MaskingOptions masking;
  std::size_t threads = 1;
  std::size_t log_every = 100;
};

struct LossPoint {
  std::size_t step = 0;
  double loss = 0.0;
};

struct TrainResult {
  Checkpoint checkpoint;
  // Batch loss at step 0 (before any update) and at every log_every steps.
  std::vector<LossPoint> log;
};

using TrainLogger = std::function<void(const LossPoint&)>;

double learning_rate(const TrainOptions& options, std::size_t step);

// Trains a fresh model initialized from config.seed; masking and batch order
// draw from the same seed. Deterministic in (corpus, config, options).
// Throws NumericalError naming the step if the loss becomes non-finite and
// LengthError for sentences longer than config.max_len.
TrainResult train_mlm(const std::vector<corpus::Sentence>& corpus, const ModelConfig& config,
                      const TrainOptions& options, const TrainLogger& logger = {});

}  // namespace pelt::model

#endif  // PELT_MODEL_TRAIN_H_
