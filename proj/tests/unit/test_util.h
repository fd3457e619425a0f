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

#ifndef PELT_TESTS_UNIT_TEST_UTIL_H_
#define PELT_TESTS_UNIT_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pelt/common/random.h"
#include "pelt/corpus/sentence.h"
#include "pelt/corpus/vocabulary.h"
#include "pelt/model/model.h"
#include "pelt/numerics/grad_check.h"
#include "pelt/numerics/ops.h"
#include "pelt/numerics/tape.h"
#include "pelt/numerics/tensor.h"

namespace pelt::testing {

using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

inline Tensor<double> random_tensor(numerics::Shape shape, std::uint64_t seed,
                                    double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  Rng rng(seed);
  for (double& v : t.values()) v = scale * rng.normal();
  return t;
}

using OpBuilder = std::function<Var(Tape<double>&, const std::vector<Var>&)>;

// Max relative error of the tape gradient of sum(op(inputs) * R) against
// central differences, R a fixed random projection.
inline numerics::GradCheckResult check_op(std::vector<Tensor<double>> inputs,
                                          const OpBuilder& op, std::uint64_t seed = 3) {
  numerics::ParamStore<double> params;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    params.add("in" + std::to_string(i), std::move(inputs[i]));
  }
  const numerics::LossClosure loss = [&](numerics::ParamStore<double>& p, bool with_grad) {
    Tape<double> tape;
    std::vector<Var> leaves;
    for (auto& e : p) leaves.push_back(tape.leaf(e.tensor));
    const Var out = op(tape, leaves);
    Var total = out;
    if (tape.value(out).size() != 1) {
      const Var proj = tape.constant(random_tensor({tape.value(out).cols(), 1}, seed));
      total = numerics::sum(tape, numerics::matmul(tape, out, proj));
    }
    const double value = tape.value(total)[0];
    if (with_grad) {
      tape.backward(total);
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        p[i].tensor.zero_grad();
        if (tape.has_grad(leaves[i])) {
          auto src = tape.grad(leaves[i]);
          std::copy(src.begin(), src.end(), p[i].tensor.grad().begin());
        }
      }
    }
    return value;
  };
  numerics::GradCheckOptions options;
  options.samples = 0;
  return numerics::grad_check(loss, params, options);
}

// A vocabulary of specials plus the given words.
inline corpus::Vocabulary make_vocab(const std::vector<std::string>& words) {
  corpus::Vocabulary vocab;
  for (const auto& w : words) vocab.add(w);
  return vocab;
}

template <typename T>
model::Model<T> tiny_model(std::size_t vocab, std::uint64_t seed = 1, std::size_t dim = 16,
                           std::size_t layers = 1) {
  model::ModelConfig c;
  c.dim = dim;
  c.layers = layers;
  c.heads = 2;
  c.ffn_mult = 2;
  c.max_len = 24;
  c.vocab = vocab;
  c.seed = seed;
  return model::Model<T>::init(c);
}

inline std::filesystem::path data_dir() { return PELT_DATA_DIR; }

// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pelt_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pelt::testing

#endif  // PELT_TESTS_UNIT_TEST_UTIL_H_
