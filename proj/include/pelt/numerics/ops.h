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

#ifndef PELT_NUMERICS_OPS_H_
#define PELT_NUMERICS_OPS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pelt/numerics/tape.h"
#include "pelt/numerics/tensor.h"

// Differentiable operations recorded on a Tape. Matrices are rank 2
// (rows x cols); vectors are rank 1 and broadcast only as a bias row.
namespace pelt::numerics {

// a[m x k] * b[k x n].
template <typename T>
Var matmul(Tape<T>& tape, Var a, Var b);

// a[m x k] * b[n x k]^T. Used for tied logits (r * E^T).
template <typename T>
Var matmul_transposed(Tape<T>& tape, Var a, Var b);

template <typename T>
Var add(Tape<T>& tape, Var a, Var b);

// x[m x n] + bias[n] on every row.
template <typename T>
Var add_bias(Tape<T>& tape, Var x, Var bias);

template <typename T>
Var scale(Tape<T>& tape, Var x, T factor);

// Scalar sum of all elements.
template <typename T>
Var sum(Tape<T>& tape, Var x);

// Per-row normalization over the last dimension followed by gain/bias.
// Rows with zero variance and epsilon == 0 normalize to zeros.
template <typename T>
Var layer_norm(Tape<T>& tape, Var x, Var gain, Var bias, T epsilon);

// Exact GELU, x * Phi(x).
template <typename T>
Var gelu(Tape<T>& tape, Var x);

// Row-wise softmax.
template <typename T>
Var softmax(Tape<T>& tape, Var x);

// Rows of `table` selected by `indices`; gradient scatters back.
template <typename T>
Var gather_rows(Tape<T>& tape, Var table, std::span<const std::size_t> indices);

// x with the listed rows overwritten by constant vectors. No gradient flows
// to the replaced rows of x or to the replacements.
template <typename T>
Var replace_rows(Tape<T>& tape, Var x, std::span<const std::size_t> rows,
                 const Tensor<T>& replacements);

// [a | b] along columns; rows must agree.
template <typename T>
Var concat_columns(Tape<T>& tape, Var a, Var b);

// Multi-head scaled dot-product attention over q, k, v of shape [n x D].
// Keys flagged in `masked_keys` (may be empty) receive zero weight.
template <typename T>
Var attention(Tape<T>& tape, Var q, Var k, Var v, std::size_t heads,
              std::span<const std::uint8_t> masked_keys);

// Sum over rows of -log softmax(logits[i])[targets[i]].
template <typename T>
Var cross_entropy(Tape<T>& tape, Var logits, std::span<const std::size_t> targets);

// Single-row form: -log softmax(logits)[target] for one logit vector.
template <typename T>
Var softmax_cross_entropy(Tape<T>& tape, Var logits, std::size_t target);

}  // namespace pelt::numerics

#endif  // PELT_NUMERICS_OPS_H_
