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

#include "pelt/model/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pelt/common/error.h"
#include "pelt/numerics/adam.h"

namespace pelt::model {

MaskedSentence mask_sentence(const corpus::Sentence& sentence, const MaskingOptions& options,
                             Rng& rng) {
  const std::size_t n = sentence.tokens.size();
  // Units: each mention span, then each token outside any mention.
  std::vector<std::pair<std::size_t, std::size_t>> units;
  std::vector<bool> in_mention(n, false);
  for (const auto& m : sentence.mentions) {
    units.emplace_back(m.start, m.end);
    for (std::size_t i = m.start; i < m.end; ++i) in_mention[i] = true;
  }
  const std::size_t mention_units = units.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_mention[i] && sentence.tokens[i] != corpus::kPad) units.emplace_back(i, i + 1);
  }
  if (units.empty()) throw ContractError("mask_sentence: sentence has no maskable token");

  std::vector<bool> chosen(units.size(), false);
  bool any = false;
  for (std::size_t u = 0; u < units.size(); ++u) {
    chosen[u] = rng.bernoulli(u < mention_units ? options.entity_rate : options.token_rate);
    any = any || chosen[u];
  }
  if (!any) chosen[rng.below(units.size())] = true;

  std::vector<bool> masked(n, false);
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (!chosen[u]) continue;
    for (std::size_t i = units[u].first; i < units[u].second; ++i) masked[i] = true;
  }
  MaskedSentence out;
  out.tokens = sentence.tokens;
  for (std::size_t i = 0; i < n; ++i) {
    if (!masked[i]) continue;
    out.positions.push_back(i);
    out.targets.push_back(sentence.tokens[i]);
    out.tokens[i] = corpus::kMask;
  }
  return out;
}

double learning_rate(const TrainOptions& options, std::size_t step) {
  const double total = static_cast<double>(options.steps);
  const double warmup = std::max(1.0, std::floor(options.warmup_fraction * total));
  const double s = static_cast<double>(step);
  if (s < warmup) return options.lr * (s + 1.0) / warmup;
  return options.lr * std::max(0.0, (total - s) / std::max(1.0, total - warmup));
}

namespace {

void clip_gradients(numerics::ParamStore<float>& params, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (const auto& e : params) {
    for (float g : e.tensor.grad()) sq += static_cast<double>(g) * g;
  }
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const float factor = static_cast<float>(max_norm / norm);
  for (auto& e : params) {
    for (float& g : e.tensor.grad()) g *= factor;
  }
}

}  // namespace

TrainResult train_mlm(const std::vector<corpus::Sentence>& corpus, const ModelConfig& config,
                      const TrainOptions& options, const TrainLogger& logger) {
  if (corpus.empty()) throw ContractError("train_mlm: empty corpus");
  if (options.batch_size == 0) throw ConfigError("train_mlm: batch size must be positive");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].tokens.size() > config.max_len) {
      throw LengthError("train_mlm: sentence " + std::to_string(i) + " has " +
                        std::to_string(corpus[i].tokens.size()) + " tokens, max length is " +
                        std::to_string(config.max_len));
    }
  }
  Model<float> model = Model<float>::init(config);
  Rng rng = Rng(config.seed).fork(1);
  numerics::Adam<float> adam;

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = order.size();

  TrainResult result{Checkpoint{model, {}}, {}};
  double last_loss = 0.0;
  std::vector<MaskedSentence> batch;
  for (std::size_t step = 0; step < options.steps; ++step) {
    batch.clear();
    for (std::size_t b = 0; b < options.batch_size; ++b) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      batch.push_back(mask_sentence(corpus[order[cursor++]], options.masking, rng));
    }
    const double loss = mlm_loss(model, std::span<const MaskedSentence>(batch), true,
                                 options.threads);
    if (!std::isfinite(loss)) {
      throw NumericalError("train_mlm: non-finite loss at step " + std::to_string(step));
    }
    last_loss = loss;
    if (step == 0 || (options.log_every && step % options.log_every == 0) ||
        step + 1 == options.steps) {
      result.log.push_back({step, loss});
      if (logger) logger(result.log.back());
    }
    clip_gradients(model.params(), options.clip_norm);
    adam.step(model.params(), learning_rate(options, step));
  }
  model.params().drop_grad();
  result.checkpoint = Checkpoint{std::move(model), {options.steps, last_loss}};
  return result;
}

}  // namespace pelt::model
