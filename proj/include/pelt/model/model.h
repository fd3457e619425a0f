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

#ifndef PELT_MODEL_MODEL_H_
#define PELT_MODEL_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pelt/corpus/vocabulary.h"
#include "pelt/numerics/param_store.h"
#include "pelt/numerics/tape.h"
#include "pelt/numerics/tensor.h"

namespace pelt::model {

using corpus::TokenId;

struct ModelConfig {
  std::size_t dim = 64;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t ffn_mult = 4;
  std::size_t max_len = 64;
  std::size_t vocab = 0;
  double ln_eps = 1e-5;
  std::uint64_t seed = 0;

  // Throws ConfigError on zero sizes or dim not divisible by heads.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Throws ConfigError unless `config.dim == dim`.
void expect_dim(const ModelConfig& config, std::size_t dim, const std::string& context);

// One input position: a vocabulary token, or a D-vector fed in place of an
// embedding row.
struct Slot {
  TokenId token = corpus::kPad;
  std::vector<double> vector;

  bool is_vector() const { return !vector.empty(); }
  static Slot of(TokenId t) { return Slot{t, {}}; }
};

std::vector<Slot> token_slots(std::span<const TokenId> tokens);

// A training or evaluation sentence: `tokens` already carry MASK at each of
// `positions`, whose original tokens are `targets`.
struct MaskedSentence {
  std::vector<TokenId> tokens;
  std::vector<std::size_t> positions;
  std::vector<TokenId> targets;
};

// Post-LN transformer encoder with a tied MLM head. Parameter names:
//   embed.word [V x D]        input lookup and output softmax weight
//   embed.position [max_len x D], embed.ln.{gain,bias}
//   layer{l}.attn.{wq,bq,wk,bk,wv,bv,wo,bo}, layer{l}.ln1.{gain,bias}
//   layer{l}.ffn.{w1,b1,w2,b2}, layer{l}.ln2.{gain,bias}
//   head.dense.{w,b}, head.ln.{gain,bias}
// No other matrix maps into vocabulary space.
template <typename T>
class Model {
 public:
  using Tensor = numerics::Tensor<T>;
  using Tape = numerics::Tape<T>;
  using Var = numerics::Var;

  // Weights N(0, 0.02) from config.seed; biases 0, layer-norm gains 1.
  static Model init(const ModelConfig& config);
  // Wraps existing parameters; checks names and shapes against `config`.
  Model(ModelConfig config, numerics::ParamStore<T> params);

  const ModelConfig& config() const { return config_; }
  numerics::ParamStore<T>& params() { return params_; }
  const numerics::ParamStore<T>& params() const { return params_; }

  // The matrix rows are looked up from, and the matrix logits are taken
  // against. Both return the same tensor.
  const Tensor& input_embeddings() const { return params_[word_index_].tensor; }
  const Tensor& output_embeddings() const { return params_[word_index_].tensor; }

  // Parameters bound as leaves of one tape, in store order.
  struct Bound {
    std::vector<Var> vars;
  };
  Bound bind(Tape& tape, bool requires_grad) const;

  // H = Enc(LayerNorm(X + P)) for the given slots; [n x D].
  // PAD tokens are excluded as attention keys.
  Var encode(Tape& tape, const Bound& bound, std::span<const Slot> slots) const;
  // r = LayerNorm(GELU(h W + b)) for the listed rows of H; [m x D].
  Var output_repr(Tape& tape, const Bound& bound, Var h,
                  std::span<const std::size_t> positions) const;
  // r E^T; [m x V].
  Var logits(Tape& tape, const Bound& bound, Var r) const;

  template <typename U>
  Model<U> cast() const {
    return Model<U>(config_, params_.template cast<U>());
  }

 private:
  std::size_t index(const std::string& name) const { return params_.index_of(name); }

  ModelConfig config_;
  numerics::ParamStore<T> params_;
  std::size_t word_index_ = 0;
};

// Convenience forward passes without gradients.
template <typename T>
numerics::Tensor<T> encode(const Model<T>& model, std::span<const Slot> slots);
template <typename T>
std::vector<T> output_repr(const Model<T>& model, std::span<const Slot> slots,
                           std::size_t position);
template <typename T>
std::vector<T> logits_at(const Model<T>& model, std::span<const Slot> slots,
                         std::size_t position);

// Mean cross-entropy over all masked positions of the batch. With
// `with_grad`, parameter gradient buffers are overwritten with d(loss)/dθ;
// per-sentence gradients are summed in batch order, so the result does not
// depend on `threads`. Throws ContractError if no position is masked.
template <typename T>
double mlm_loss(Model<T>& model, std::span<const MaskedSentence> batch, bool with_grad,
                std::size_t threads = 1);

// Token ids ordered by descending logit, ties to the lower id; k is clamped
// to the candidate count. `candidates`, when given, restricts the ranking.
template <typename T>
std::vector<TokenId> rank_tokens(std::span<const T> logits, std::size_t k,
                                 const std::vector<TokenId>* candidates = nullptr);

// 1-based rank of `token` under the same ordering; 0 if not a candidate.
template <typename T>
std::size_t rank_of(std::span<const T> logits, TokenId token,
                    const std::vector<TokenId>* candidates = nullptr);

// predict_topk at `position`, which must hold MASK (ContractError otherwise).
template <typename T>
std::vector<TokenId> predict_topk(const Model<T>& model, std::span<const Slot> slots,
                                  std::size_t position, std::size_t k,
                                  const std::vector<TokenId>* candidates = nullptr);

extern template class Model<float>;
extern template class Model<double>;

}  // namespace pelt::model

#endif  // PELT_MODEL_MODEL_H_
