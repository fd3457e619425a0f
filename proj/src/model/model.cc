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

#include "pelt/model/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pelt/common/error.h"
#include "pelt/common/parallel.h"
#include "pelt/common/random.h"
#include "pelt/numerics/ops.h"

namespace pelt::model {

namespace nx = pelt::numerics;
using nx::Shape;
using nx::Var;

void ModelConfig::validate() const {
  if (dim == 0 || ffn_mult == 0 || max_len == 0 || vocab == 0) {
    throw ConfigError("model config: dim, ffn_mult, max_len and vocab must be positive");
  }
  if (heads == 0 || dim % heads != 0) {
    throw ConfigError("model config: dim " + std::to_string(dim) +
                      " is not divisible by head count " + std::to_string(heads));
  }
  if (vocab <= corpus::kSpecialCount) {
    throw ConfigError("model config: vocabulary of " + std::to_string(vocab) +
                      " holds only special tokens");
  }
  if (!(ln_eps >= 0.0)) throw ConfigError("model config: ln_eps must be >= 0");
}

void expect_dim(const ModelConfig& config, std::size_t dim, const std::string& context) {
  if (config.dim != dim) {
    throw ConfigError(context + ": checkpoint has D=" + std::to_string(config.dim) +
                      " but D=" + std::to_string(dim) + " was expected");
  }
}

std::vector<Slot> token_slots(std::span<const TokenId> tokens) {
  std::vector<Slot> out;
  out.reserve(tokens.size());
  for (TokenId t : tokens) out.push_back(Slot::of(t));
  return out;
}

namespace {

struct ParamSpec {
  std::string name;
  Shape shape;
  enum { kNormal, kZero, kOne } fill;
};

std::vector<ParamSpec> param_specs(const ModelConfig& c) {
  const std::size_t d = c.dim, f = c.dim * c.ffn_mult;
  std::vector<ParamSpec> specs = {
      {"embed.word", {c.vocab, d}, ParamSpec::kNormal},
      {"embed.position", {c.max_len, d}, ParamSpec::kNormal},
      {"embed.ln.gain", {d}, ParamSpec::kOne},
      {"embed.ln.bias", {d}, ParamSpec::kZero},
  };
  for (std::size_t l = 0; l < c.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    for (const char* m : {"q", "k", "v", "o"}) {
      specs.push_back({p + "attn.w" + m, {d, d}, ParamSpec::kNormal});
      specs.push_back({p + "attn.b" + m, {d}, ParamSpec::kZero});
    }
    specs.push_back({p + "ln1.gain", {d}, ParamSpec::kOne});
    specs.push_back({p + "ln1.bias", {d}, ParamSpec::kZero});
    specs.push_back({p + "ffn.w1", {d, f}, ParamSpec::kNormal});
    specs.push_back({p + "ffn.b1", {f}, ParamSpec::kZero});
    specs.push_back({p + "ffn.w2", {f, d}, ParamSpec::kNormal});
    specs.push_back({p + "ffn.b2", {d}, ParamSpec::kZero});
    specs.push_back({p + "ln2.gain", {d}, ParamSpec::kOne});
    specs.push_back({p + "ln2.bias", {d}, ParamSpec::kZero});
  }
  specs.push_back({"head.dense.w", {d, d}, ParamSpec::kNormal});
  specs.push_back({"head.dense.b", {d}, ParamSpec::kZero});
  specs.push_back({"head.ln.gain", {d}, ParamSpec::kOne});
  specs.push_back({"head.ln.bias", {d}, ParamSpec::kZero});
  return specs;
}

constexpr double kInitStd = 0.02;

}  // namespace

template <typename T>
Model<T> Model<T>::init(const ModelConfig& config) {
  config.validate();
  Rng rng(config.seed);
  nx::ParamStore<T> params;
  for (const auto& spec : param_specs(config)) {
    nx::Tensor<T> t(spec.shape);
    for (auto& v : t.values()) {
      switch (spec.fill) {
        case ParamSpec::kNormal: v = static_cast<T>(kInitStd * rng.normal()); break;
        case ParamSpec::kZero: v = T{0}; break;
        case ParamSpec::kOne: v = T{1}; break;
      }
    }
    params.add(spec.name, std::move(t));
  }
  return Model(config, std::move(params));
}

template <typename T>
Model<T>::Model(ModelConfig config, nx::ParamStore<T> params)
    : config_(config), params_(std::move(params)) {
  config_.validate();
  const auto specs = param_specs(config_);
  if (specs.size() != params_.size()) {
    throw ConfigError("model: expected " + std::to_string(specs.size()) + " parameters, got " +
                      std::to_string(params_.size()));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (params_[i].name != specs[i].name || params_[i].tensor.shape() != specs[i].shape) {
      throw ConfigError("model: parameter " + std::to_string(i) + " is '" + params_[i].name +
                        "' " + nx::shape_string(params_[i].tensor.shape()) + ", expected '" +
                        specs[i].name + "' " + nx::shape_string(specs[i].shape));
    }
  }
  word_index_ = params_.index_of("embed.word");
}

template <typename T>
typename Model<T>::Bound Model<T>::bind(Tape& tape, bool requires_grad) const {
  Bound b;
  b.vars.reserve(params_.size());
  for (const auto& e : params_) b.vars.push_back(tape.leaf(e.tensor, requires_grad));
  return b;
}

template <typename T>
Var Model<T>::encode(Tape& tape, const Bound& bound, std::span<const Slot> slots) const {
  const std::size_t n = slots.size(), d = config_.dim;
  if (n == 0) throw ContractError("encode: empty sequence");
  if (n > config_.max_len) {
    throw LengthError("encode: sequence of length " + std::to_string(n) +
                      " exceeds max length " + std::to_string(config_.max_len));
  }
  auto p = [&](const std::string& name) { return bound.vars[index(name)]; };

  std::vector<std::size_t> ids(n), positions(n), vector_rows;
  std::vector<std::uint8_t> masked(n, 0);
  std::vector<T> vector_values;
  for (std::size_t i = 0; i < n; ++i) {
    positions[i] = i;
    if (slots[i].is_vector()) {
      if (slots[i].vector.size() != d) {
        throw ConfigError("encode: vector slot of width " +
                          std::to_string(slots[i].vector.size()) + " for model D=" +
                          std::to_string(d));
      }
      ids[i] = corpus::kPad;
      vector_rows.push_back(i);
      for (double v : slots[i].vector) vector_values.push_back(static_cast<T>(v));
    } else {
      if (slots[i].token >= config_.vocab) {
        throw IndexError("encode: token " + std::to_string(slots[i].token) +
                         " outside vocabulary of " + std::to_string(config_.vocab));
      }
      ids[i] = slots[i].token;
      masked[i] = slots[i].token == corpus::kPad;
    }
  }
  Var x = nx::gather_rows(tape, p("embed.word"), std::span<const std::size_t>(ids));
  if (!vector_rows.empty()) {
    nx::Tensor<T> replacements({vector_rows.size(), d}, std::move(vector_values));
    x = nx::replace_rows(tape, x, std::span<const std::size_t>(vector_rows), replacements);
  }
  x = nx::add(tape, x,
              nx::gather_rows(tape, p("embed.position"), std::span<const std::size_t>(positions)));
  const T eps = static_cast<T>(config_.ln_eps);
  x = nx::layer_norm(tape, x, p("embed.ln.gain"), p("embed.ln.bias"), eps);

  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::string pre = "layer" + std::to_string(l) + ".";
    auto linear = [&](Var in, const std::string& w, const std::string& b) {
      return nx::add_bias(tape, nx::matmul(tape, in, p(pre + w)), p(pre + b));
    };
    Var q = linear(x, "attn.wq", "attn.bq");
    Var k = linear(x, "attn.wk", "attn.bk");
    Var v = linear(x, "attn.wv", "attn.bv");
    Var a = nx::attention(tape, q, k, v, config_.heads, std::span<const std::uint8_t>(masked));
    x = nx::layer_norm(tape, nx::add(tape, x, linear(a, "attn.wo", "attn.bo")),
                       p(pre + "ln1.gain"), p(pre + "ln1.bias"), eps);
    Var f = linear(nx::gelu(tape, linear(x, "ffn.w1", "ffn.b1")), "ffn.w2", "ffn.b2");
    x = nx::layer_norm(tape, nx::add(tape, x, f), p(pre + "ln2.gain"), p(pre + "ln2.bias"), eps);
  }
  return x;
}

template <typename T>
Var Model<T>::output_repr(Tape& tape, const Bound& bound, Var h,
                          std::span<const std::size_t> positions) const {
  auto p = [&](const std::string& name) { return bound.vars[index(name)]; };
  Var rows = nx::gather_rows(tape, h, positions);
  Var dense = nx::add_bias(tape, nx::matmul(tape, rows, p("head.dense.w")), p("head.dense.b"));
  return nx::layer_norm(tape, nx::gelu(tape, dense), p("head.ln.gain"), p("head.ln.bias"),
                        static_cast<T>(config_.ln_eps));
}

template <typename T>
Var Model<T>::logits(Tape& tape, const Bound& bound, Var r) const {
  return nx::matmul_transposed(tape, r, bound.vars[word_index_]);
}

template <typename T>
nx::Tensor<T> encode(const Model<T>& model, std::span<const Slot> slots) {
  nx::Tape<T> tape;
  const auto bound = model.bind(tape, false);
  return tape.value(model.encode(tape, bound, slots));
}

template <typename T>
std::vector<T> output_repr(const Model<T>& model, std::span<const Slot> slots,
                           std::size_t position) {
  if (position >= slots.size()) {
    throw IndexError("output_repr: position " + std::to_string(position) +
                     " outside sequence of length " + std::to_string(slots.size()));
  }
  nx::Tape<T> tape;
  const auto bound = model.bind(tape, false);
  const std::size_t pos[1] = {position};
  Var r = model.output_repr(tape, bound, model.encode(tape, bound, slots),
                            std::span<const std::size_t>(pos));
  const auto& v = tape.value(r).values();
  return {v.begin(), v.end()};
}

template <typename T>
std::vector<T> logits_at(const Model<T>& model, std::span<const Slot> slots,
                         std::size_t position) {
  if (position >= slots.size()) {
    throw IndexError("logits_at: position " + std::to_string(position) +
                     " outside sequence of length " + std::to_string(slots.size()));
  }
  nx::Tape<T> tape;
  const auto bound = model.bind(tape, false);
  const std::size_t pos[1] = {position};
  Var r = model.output_repr(tape, bound, model.encode(tape, bound, slots),
                            std::span<const std::size_t>(pos));
  const auto& v = tape.value(model.logits(tape, bound, r)).values();
  return {v.begin(), v.end()};
}

template <typename T>
double mlm_loss(Model<T>& model, std::span<const MaskedSentence> batch, bool with_grad,
                std::size_t threads) {
  std::size_t total = 0;
  for (const auto& s : batch) {
    if (s.positions.size() != s.targets.size()) {
      throw ContractError("mlm_loss: positions and targets differ in length");
    }
    total += s.positions.size();
  }
  if (total == 0) throw ContractError("mlm_loss: batch has no masked position");

  auto& params = model.params();
  const std::size_t count = params.size();
  std::vector<double> losses(batch.size(), 0.0);
  // Per-sentence gradients, reduced in batch order below.
  std::vector<std::vector<std::vector<T>>> grads(with_grad ? batch.size() : 0);
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    const MaskedSentence& s = batch[i];
    if (s.positions.empty()) return;
    nx::Tape<T> tape;
    const auto bound = model.bind(tape, with_grad);
    const auto slots = token_slots(s.tokens);
    Var h = model.encode(tape, bound, slots);
    Var r = model.output_repr(tape, bound, h, std::span<const std::size_t>(s.positions));
    std::vector<std::size_t> targets(s.targets.begin(), s.targets.end());
    Var loss = nx::cross_entropy(tape, model.logits(tape, bound, r),
                                 std::span<const std::size_t>(targets));
    losses[i] = static_cast<double>(tape.value(loss)[0]);
    if (!with_grad) return;
    tape.backward(loss, static_cast<T>(1.0 / static_cast<double>(total)));
    grads[i].resize(count);
    for (std::size_t p = 0; p < count; ++p) {
      if (tape.has_grad(bound.vars[p])) {
        auto g = tape.grad(bound.vars[p]);
        grads[i][p].assign(g.begin(), g.end());
      }
    }
  });
  if (with_grad) {
    params.zero_grad();
    for (const auto& sentence_grads : grads) {
      if (sentence_grads.empty()) continue;
      for (std::size_t p = 0; p < count; ++p) {
        const auto& g = sentence_grads[p];
        if (g.empty()) continue;
        auto dst = params[p].tensor.grad();
        for (std::size_t j = 0; j < g.size(); ++j) dst[j] += g[j];
      }
    }
  }
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(total);
}

namespace {

template <typename T>
std::vector<TokenId> ordered(std::span<const T> logits, const std::vector<TokenId>* candidates) {
  std::vector<TokenId> ids;
  if (candidates) {
    for (TokenId c : *candidates) {
      if (c >= logits.size()) {
        throw IndexError("candidate token " + std::to_string(c) + " outside vocabulary");
      }
      ids.push_back(c);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  } else {
    ids.resize(logits.size());
    std::iota(ids.begin(), ids.end(), TokenId{0});
  }
  return ids;
}

template <typename T>
bool before(std::span<const T> logits, TokenId a, TokenId b) {
  return logits[a] > logits[b] || (logits[a] == logits[b] && a < b);
}

}  // namespace

template <typename T>
std::vector<TokenId> rank_tokens(std::span<const T> logits, std::size_t k,
                                 const std::vector<TokenId>* candidates) {
  auto ids = ordered(logits, candidates);
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](TokenId a, TokenId b) { return before(logits, a, b); });
  ids.resize(k);
  return ids;
}

template <typename T>
std::size_t rank_of(std::span<const T> logits, TokenId token,
                    const std::vector<TokenId>* candidates) {
  const auto ids = ordered(logits, candidates);
  if (!std::binary_search(ids.begin(), ids.end(), token)) return 0;
  std::size_t rank = 1;
  for (TokenId id : ids) rank += before(logits, id, token) ? 1 : 0;
  return rank;
}

template <typename T>
std::vector<TokenId> predict_topk(const Model<T>& model, std::span<const Slot> slots,
                                  std::size_t position, std::size_t k,
                                  const std::vector<TokenId>* candidates) {
  if (position >= slots.size() || slots[position].is_vector() ||
      slots[position].token != corpus::kMask) {
    throw ContractError("predict_topk: position " + std::to_string(position) +
                        " does not hold [MASK]");
  }
  const auto logits = logits_at(model, slots, position);
  return rank_tokens(std::span<const T>(logits), k, candidates);
}

#define PELT_INSTANTIATE_MODEL(T)                                                          \
  template class Model<T>;                                                                 \
  template nx::Tensor<T> encode<T>(const Model<T>&, std::span<const Slot>);                \
  template std::vector<T> output_repr<T>(const Model<T>&, std::span<const Slot>,           \
                                         std::size_t);                                     \
  template std::vector<T> logits_at<T>(const Model<T>&, std::span<const Slot>, std::size_t); \
  template double mlm_loss<T>(Model<T>&, std::span<const MaskedSentence>, bool, std::size_t); \
  template std::vector<TokenId> rank_tokens<T>(std::span<const T>, std::size_t,            \
                                               const std::vector<TokenId>*);               \
  template std::size_t rank_of<T>(std::span<const T>, TokenId, const std::vector<TokenId>*); \
  template std::vector<TokenId> predict_topk<T>(const Model<T>&, std::span<const Slot>,    \
                                                std::size_t, std::size_t,                  \
                                                const std::vector<TokenId>*);

PELT_INSTANTIATE_MODEL(float)
PELT_INSTANTIATE_MODEL(double)

}  // namespace pelt::model
