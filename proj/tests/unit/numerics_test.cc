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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pelt/common/error.h"
#include "pelt/numerics/adam.h"
#include "pelt/numerics/grad_check.h"
#include "pelt/numerics/ops.h"
#include "pelt/numerics/param_store.h"
#include "test_util.h"

namespace pelt::numerics {
namespace {

using testing::check_op;
using testing::random_tensor;

constexpr double kOpTolerance = 1e-4;

Tensor<double> mat(std::size_t r, std::size_t c, std::vector<double> v) {
  return Tensor<double>::matrix(r, c, std::move(v));
}

double row_norm(std::span<const double> row) {
  double s = 0.0;
  for (double v : row) s += v * v;
  return std::sqrt(s);
}

TEST(TensorTest, ValueCountMustMatchShape) {
  EXPECT_THROW(Tensor<double>({2, 3}, std::vector<double>(5)), DimensionError);
  Tensor<double> t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_FALSE(t.has_grad());
  t.zero_grad();
  EXPECT_EQ(t.grad().size(), t.size());
}

TEST(ParamStoreTest, InsertionOrderAndUniqueNames) {
  ParamStore<double> store;
  store.add("zeta", Tensor<double>({1}));
  store.add("alpha", Tensor<double>({2}));
  store.add("mid", Tensor<double>({3}));
  std::vector<std::string> names;
  for (const auto& e : store) names.push_back(e.name);
  EXPECT_EQ(names, (std::vector<std::string>{"zeta", "alpha", "mid"}));
  EXPECT_THROW(store.add("alpha", Tensor<double>({1})), ContractError);
  EXPECT_THROW(store.get("missing"), IndexError);
}

TEST(MatmulTest, IdentityLeavesMatrixUnchanged) {
  Tape<double> tape;
  const auto eye = mat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  const auto m = random_tensor({3, 4}, 11);
  const Var out = matmul(tape, tape.leaf(eye), tape.leaf(m));
  EXPECT_EQ(tape.value(out), m);
}

TEST(MatmulTest, HandExample) {
  Tape<double> tape;
  const auto a = mat(2, 2, {1, 2, 3, 4});
  const auto b = mat(2, 1, {1, 1});
  const Var out = matmul(tape, tape.leaf(a), tape.leaf(b));
  EXPECT_EQ(tape.value(out), mat(2, 1, {3, 7}));
}

TEST(MatmulTest, GradientOfSumIsOnesTimesBTransposed) {
  const auto a = random_tensor({3, 4}, 1);
  const auto b = random_tensor({4, 2}, 2);
  Tape<double> tape;
  const Var va = tape.leaf(a);
  tape.backward(sum(tape, matmul(tape, va, tape.leaf(b))));
  const auto g = tape.grad(va);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_DOUBLE_EQ(g[i * 4 + k], b.at(k, 0) + b.at(k, 1));
    }
  }
  // Against central differences too.
  EXPECT_LT(check_op({a, b}, [](Tape<double>& t, const std::vector<Var>& in) {
              return sum(t, matmul(t, in[0], in[1]));
            }).max_relative_error,
            kOpTolerance);
}

TEST(MatmulTest, ShapeMismatchNamesBothShapes) {
  Tape<double> tape;
  const auto a = random_tensor({2, 3}, 1);
  const auto b = random_tensor({4, 5}, 2);
  try {
    matmul(tape, tape.leaf(a), tape.leaf(b));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("[2x3]"), std::string::npos) << what;
    EXPECT_NE(what.find("[4x5]"), std::string::npos) << what;
  }
}

TEST(LayerNormTest, HandExample) {
  Tape<double> tape;
  const auto x = mat(1, 3, {1, 2, 3});
  const auto gain = Tensor<double>::filled({3}, 1.0);
  const auto bias = Tensor<double>::filled({3}, 0.0);
  const Var out = layer_norm(tape, tape.leaf(x), tape.leaf(gain), tape.leaf(bias), 0.0);
  const auto v = tape.value(out).values();
  const double expected = 1.0 / std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(v[0], -expected, 1e-12);
  EXPECT_NEAR(v[1], 0.0, 1e-12);
  EXPECT_NEAR(v[2], expected, 1e-12);
  EXPECT_NEAR(v[0], -1.2247, 1e-4);
  EXPECT_NEAR(row_norm(v), std::sqrt(3.0), 1e-12);
}

TEST(LayerNormTest, ConstantRowGivesBias) {
  Tape<double> tape;
  const auto x = mat(1, 4, {5, 5, 5, 5});
  const auto gain = random_tensor({4}, 3);
  const auto bias = Tensor<double>({4}, {0.5, -1, 2, 0});
  const Var out = layer_norm(tape, tape.leaf(x), tape.leaf(gain), tape.leaf(bias), 1e-5);
  const auto v = tape.value(out).values();
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(v[i], bias[i]);
}

TEST(LayerNormTest, RowNormIsSqrtD) {
  for (std::size_t d : {3u, 16u, 64u, 257u}) {
    Tape<double> tape;
    const auto x = random_tensor({5, d}, d, 3.0);
    const auto gain = Tensor<double>::filled({d}, 1.0);
    const auto bias = Tensor<double>::filled({d}, 0.0);
    const Var out = layer_norm(tape, tape.leaf(x), tape.leaf(gain), tape.leaf(bias), 0.0);
    for (std::size_t r = 0; r < 5; ++r) {
      EXPECT_NEAR(row_norm(tape.value(out).row(r)), std::sqrt(static_cast<double>(d)), 1e-9);
    }
  }
}

TEST(LayerNormTest, PositiveScaleInvariance) {
  const std::size_t d = 32;
  const auto x = random_tensor({4, d}, 9);
  const auto gain = Tensor<double>::filled({d}, 1.0);
  const auto bias = Tensor<double>::filled({d}, 0.0);
  Tape<double> tape;
  const Var base = layer_norm(tape, tape.leaf(x), tape.leaf(gain), tape.leaf(bias), 0.0);
  for (double c : {0.1, 1.0, 7.0, 10.0}) {
    const Var scaled = layer_norm(tape, scale(tape, tape.leaf(x), c), tape.leaf(gain),
                                  tape.leaf(bias), 0.0);
    const auto a = tape.value(base).values();
    const auto b = tape.value(scaled).values();
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12) << "c=" << c;
  }
}

TEST(LayerNormTest, DimensionMismatchAndNegativeEpsilon) {
  Tape<double> tape;
  const auto x = random_tensor({2, 4}, 1);
  const auto gain3 = Tensor<double>::filled({3}, 1.0);
  const auto gain4 = Tensor<double>::filled({4}, 1.0);
  const auto bias4 = Tensor<double>::filled({4}, 0.0);
  EXPECT_THROW(layer_norm(tape, tape.leaf(x), tape.leaf(gain3), tape.leaf(bias4), 0.0),
               DimensionError);
  EXPECT_THROW(layer_norm(tape, tape.leaf(x), tape.leaf(gain4), tape.leaf(bias4), -1.0),
               ContractError);
}

TEST(SoftmaxTest, RowsSumToOne) {
  Tape<double> tape;
  const auto x = random_tensor({6, 50}, 4, 5.0);
  const Var out = softmax(tape, tape.leaf(x));
  for (std::size_t r = 0; r < 6; ++r) {
    const auto row = tape.value(out).row(r);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(SoftmaxCrossEntropyTest, UniformTwoWay) {
  Tape<double> tape;
  const auto logits = Tensor<double>({2}, {0, 0});
  const Var loss = softmax_cross_entropy(tape, tape.leaf(logits), 0);
  EXPECT_NEAR(tape.value(loss)[0], std::log(2.0), 1e-15);
}

TEST(SoftmaxCrossEntropyTest, ConfidentCorrect) {
  Tape<double> tape;
  const auto logits = Tensor<double>({3}, {10, 0, 0});
  const Var loss = softmax_cross_entropy(tape, tape.leaf(logits), 0);
  // -log(e^10 / (e^10 + 2)) = log1p(2 e^-10).
  EXPECT_NEAR(tape.value(loss)[0], std::log1p(2.0 * std::exp(-10.0)), 1e-15);
  EXPECT_NEAR(tape.value(loss)[0], 9.08e-5, 1e-7);
}

TEST(SoftmaxCrossEntropyTest, GradientIsSoftmaxMinusOneHot) {
  const auto logits = Tensor<double>({5}, {0.3, -1.2, 2.0, 0.0, 0.7});
  Tape<double> tape;
  const Var leaf = tape.leaf(logits);
  tape.backward(softmax_cross_entropy(tape, leaf, 2));
  const auto g = tape.grad(leaf);
  double z = 0.0;
  for (double v : logits.values()) z += std::exp(v);
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(g[i], std::exp(logits[i]) / z - (i == 2 ? 1.0 : 0.0), 1e-15);
    total += g[i];
  }
  EXPECT_NEAR(total, 0.0, 1e-15);
}

TEST(SoftmaxCrossEntropyTest, TargetOutOfRange) {
  Tape<double> tape;
  const auto logits = Tensor<double>({3}, {0, 0, 0});
  EXPECT_THROW(softmax_cross_entropy(tape, tape.leaf(logits), 3), IndexError);
}

TEST(GatherRowsTest, RepeatedIndicesAccumulateGradient) {
  const auto table = random_tensor({4, 3}, 5);
  Tape<double> tape;
  const Var leaf = tape.leaf(table);
  const std::vector<std::size_t> idx = {2, 0, 2};
  tape.backward(sum(tape, gather_rows(tape, leaf, std::span<const std::size_t>(idx))));
  const auto g = tape.grad(leaf);
  const std::vector<double> per_row = {1, 0, 2, 0};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(g[r * 3 + c], per_row[r]);
  }
  EXPECT_THROW(gather_rows(tape, leaf, std::span<const std::size_t>(std::vector<std::size_t>{4})),
               IndexError);
}

TEST(AttentionTest, MaskedKeysAreIgnored) {
  const auto q = random_tensor({5, 8}, 1);
  const auto k = random_tensor({5, 8}, 2);
  auto v = random_tensor({5, 8}, 3);
  const std::vector<std::uint8_t> masked = {0, 0, 1, 0, 1};
  Tape<double> tape;
  const Var a = attention(tape, tape.leaf(q), tape.leaf(k), tape.leaf(v), 2,
                          std::span<const std::uint8_t>(masked));
  const Tensor<double> before = tape.value(a);
  for (std::size_t c = 0; c < 8; ++c) {
    v.at(2, c) += 100.0;
    v.at(4, c) -= 50.0;
  }
  Tape<double> tape2;
  const Var b = attention(tape2, tape2.leaf(q), tape2.leaf(k), tape2.leaf(v), 2,
                          std::span<const std::uint8_t>(masked));
  EXPECT_EQ(tape2.value(b), before);
}

// Every differentiable op against central differences at h = 1e-5.
TEST(FiniteDifferenceTest, EveryOp) {
  using In = const std::vector<Var>&;
  using T = Tape<double>;
  struct Case {
    const char* name;
    std::vector<Tensor<double>> inputs;
    testing::OpBuilder op;
  };
  const std::vector<std::size_t> rows = {3, 0, 3, 1};
  const std::vector<std::size_t> replaced = {1};
  const std::vector<std::uint8_t> masked = {0, 1, 0, 0};
  const std::vector<std::size_t> targets = {2, 0, 5, 1};
  const auto replacement = random_tensor({1, 6}, 77);
  std::vector<Case> cases = {
      {"matmul", {random_tensor({3, 4}, 1), random_tensor({4, 5}, 2)},
       [](T& t, In in) { return matmul(t, in[0], in[1]); }},
      {"matmul_transposed", {random_tensor({3, 4}, 1), random_tensor({5, 4}, 2)},
       [](T& t, In in) { return matmul_transposed(t, in[0], in[1]); }},
      {"add", {random_tensor({3, 4}, 1), random_tensor({3, 4}, 2)},
       [](T& t, In in) { return add(t, in[0], in[1]); }},
      {"add_bias", {random_tensor({3, 4}, 1), random_tensor({4}, 2)},
       [](T& t, In in) { return add_bias(t, in[0], in[1]); }},
      {"scale", {random_tensor({3, 4}, 1)}, [](T& t, In in) { return scale(t, in[0], -2.5); }},
      {"sum", {random_tensor({3, 4}, 1)}, [](T& t, In in) { return sum(t, in[0]); }},
      {"layer_norm",
       {random_tensor({3, 6}, 1), random_tensor({6}, 2), random_tensor({6}, 3)},
       [](T& t, In in) { return layer_norm(t, in[0], in[1], in[2], 1e-5); }},
      {"gelu", {random_tensor({3, 4}, 1, 2.0)}, [](T& t, In in) { return gelu(t, in[0]); }},
      {"softmax", {random_tensor({3, 5}, 1)}, [](T& t, In in) { return softmax(t, in[0]); }},
      {"gather_rows", {random_tensor({4, 3}, 1)},
       [&](T& t, In in) { return gather_rows(t, in[0], std::span<const std::size_t>(rows)); }},
      {"replace_rows", {random_tensor({3, 6}, 1)},
       [&](T& t, In in) {
         return replace_rows(t, in[0], std::span<const std::size_t>(replaced), replacement);
       }},
      {"concat_columns", {random_tensor({3, 2}, 1), random_tensor({3, 4}, 2)},
       [](T& t, In in) { return concat_columns(t, in[0], in[1]); }},
      {"attention",
       {random_tensor({4, 8}, 1), random_tensor({4, 8}, 2), random_tensor({4, 8}, 3)},
       [&](T& t, In in) {
         return attention(t, in[0], in[1], in[2], 2, std::span<const std::uint8_t>(masked));
       }},
      {"cross_entropy", {random_tensor({4, 6}, 1, 2.0)},
       [&](T& t, In in) {
         return cross_entropy(t, in[0], std::span<const std::size_t>(targets));
       }},
      {"softmax_cross_entropy", {random_tensor({6}, 1, 2.0)},
       [](T& t, In in) { return softmax_cross_entropy(t, in[0], 4); }},
  };
  for (auto& c : cases) {
    const auto r = check_op(c.inputs, c.op);
    EXPECT_LT(r.max_relative_error, kOpTolerance)
        << c.name << " worst " << r.worst_parameter << "[" << r.worst_index << "]";
    EXPECT_GT(r.coordinates_checked, 0u) << c.name;
  }
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  ParamStore<double> p;
  p.add("w", random_tensor({3, 3}, 1));
  const auto before = p.get("w");
  p.zero_grad();
  Adam<double> adam;
  adam.step(p, 0.1);
  adam.step(p, 0.1);
  EXPECT_EQ(p.get("w"), before);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  ParamStore<double> p;
  p.add("theta", Tensor<double>({1}, {0.5}));
  p.zero_grad();
  p.get("theta").grad()[0] = 1.0;
  Adam<double> adam;
  adam.step(p, 1e-3);
  // Bias-corrected m = v = 1 on step 1, so the update is lr / (1 + eps).
  EXPECT_NEAR(p.get("theta")[0], 0.5 - 1e-3 / (1.0 + 1e-8), 1e-15);
}

TEST(AdamTest, MomentsAccumulateAcrossSteps) {
  auto make = [] {
    ParamStore<double> p;
    p.add("theta", Tensor<double>({2}, {1.0, -1.0}));
    p.zero_grad();
    p.get("theta").grad()[0] = 0.3;
    p.get("theta").grad()[1] = -2.0;
    return p;
  };
  auto once = make();
  auto twice = make();
  Adam<double> a1;
  Adam<double> a2;
  a1.step(once, 0.01);
  a2.step(twice, 0.01);
  a2.step(twice, 0.01);
  EXPECT_NE(once.get("theta"), twice.get("theta"));
  EXPECT_EQ(a2.steps_taken(), 2u);
  // With a constant gradient both bias-corrected moments stay exact, so each
  // step moves by lr * g / (|g| + eps).
  EXPECT_NEAR(twice.get("theta")[0], 1.0 - 2 * 0.01 * 0.3 / (0.3 + 1e-8), 1e-12);
}

TEST(AdamTest, MissingGradientIsContractViolation) {
  ParamStore<double> p;
  p.add("w", Tensor<double>({2}));
  Adam<double> adam;
  EXPECT_THROW(adam.step(p, 0.1), ContractError);
}

TEST(GradCheckTest, QuadraticIsExact) {
  ParamStore<double> p;
  p.add("a", random_tensor({4, 3}, 1));
  p.add("b", random_tensor({5}, 2));
  const LossClosure loss = [](ParamStore<double>& ps, bool with_grad) {
    double total = 0.0;
    for (auto& e : ps) {
      for (std::size_t i = 0; i < e.tensor.size(); ++i) {
        total += e.tensor[i] * e.tensor[i];
        if (with_grad) e.tensor.grad()[i] = 2.0 * e.tensor[i];
      }
    }
    return total;
  };
  GradCheckOptions options;
  options.samples = 0;
  const auto r = grad_check(loss, p, options);
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_EQ(r.coordinates_checked, 17u);
}

TEST(GradCheckTest, DetectsWrongGradient) {
  ParamStore<double> p;
  p.add("w", random_tensor({3}, 1));
  const LossClosure loss = [](ParamStore<double>& ps, bool with_grad) {
    auto& w = ps.get("w");
    if (with_grad) {
      for (std::size_t i = 0; i < 3; ++i) w.grad()[i] = 3.0 * w[i];
    }
    return w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
  };
  EXPECT_GT(grad_check(loss, p).max_relative_error, 0.1);
}

TEST(GradCheckTest, ZeroStepRejected) {
  ParamStore<double> p;
  p.add("w", Tensor<double>({1}));
  const LossClosure loss = [](ParamStore<double>&, bool) { return 0.0; };
  GradCheckOptions options;
  options.step = 0.0;
  EXPECT_THROW(grad_check(loss, p, options), std::invalid_argument);
}

TEST(GradCheckTest, NonFiniteLossNamesParameter) {
  ParamStore<double> p;
  p.add("blowup", Tensor<double>({1}, {0.0}));
  const LossClosure loss = [](ParamStore<double>& ps, bool with_grad) {
    auto& w = ps.get("blowup");
    if (with_grad) w.grad()[0] = 0.0;
    return w[0] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  try {
    grad_check(loss, p);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("blowup"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace pelt::numerics
