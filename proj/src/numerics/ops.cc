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

#include "pelt/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernels.h"
#include "pelt/common/error.h"

namespace pelt::numerics {

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

namespace {

template <typename T>
const Tensor<T>& matrix(const Tape<T>& tape, Var v, const char* op) {
  const Tensor<T>& t = tape.value(v);
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " +
                         shape_string(t.shape()));
  }
  return t;
}

template <typename T>
void accumulate(std::span<T> dst, std::span<const T> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

template <typename T>
Var matmul(Tape<T>& tape, Var a, Var b) {
  const Tensor<T>& av = matrix(tape, a, "matmul");
  const Tensor<T>& bv = matrix(tape, b, "matmul");
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  if (bv.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions disagree for " +
                         shape_string(av.shape()) + " x " + shape_string(bv.shape()));
  }
  Tensor<T> out({m, n});
  kernels::gemm_nn(m, k, n, av.values().data(), bv.values().data(),
                   out.values().data());
  return tape.record(std::move(out), {a, b}, [a, b, m, k, n](Tape<T>& t, Var self) {
    const T* dc = t.grad(self).data();
    if (t.requires_grad(a)) {
      kernels::gemm_nt(m, n, k, dc, t.value(b).values().data(), t.grad(a).data());
    }
    if (t.requires_grad(b)) {
      kernels::gemm_tn(k, m, n, t.value(a).values().data(), dc, t.grad(b).data());
    }
  });
}

template <typename T>
Var matmul_transposed(Tape<T>& tape, Var a, Var b) {
  const Tensor<T>& av = matrix(tape, a, "matmul_transposed");
  const Tensor<T>& bv = matrix(tape, b, "matmul_transposed");
  const std::size_t m = av.dim(0), k = av.dim(1), n = bv.dim(0);
  if (bv.dim(1) != k) {
    throw DimensionError("matmul_transposed: inner dimensions disagree for " +
                         shape_string(av.shape()) + " x " +
                         shape_string(bv.shape()) + "^T");
  }
  Tensor<T> out({m, n});
  kernels::gemm_nt(m, k, n, av.values().data(), bv.values().data(),
                   out.values().data());
  return tape.record(std::move(out), {a, b}, [a, b, m, k, n](Tape<T>& t, Var self) {
    const T* dc = t.grad(self).data();
    if (t.requires_grad(a)) {
      kernels::gemm_nn(m, n, k, dc, t.value(b).values().data(), t.grad(a).data());
    }
    if (t.requires_grad(b)) {
      kernels::gemm_tn(n, m, k, dc, t.value(a).values().data(), t.grad(b).data());
    }
  });
}

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
  const Tensor<T>& av = tape.value(a);
  const Tensor<T>& bv = tape.value(b);
  if (av.shape() != bv.shape()) {
    throw DimensionError("add: shapes " + shape_string(av.shape()) + " and " +
                         shape_string(bv.shape()) + " differ");
  }
  Tensor<T> out = av;
  auto o = out.values();
  auto bb = bv.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bb[i];
  return tape.record(std::move(out), {a, b}, [a, b](Tape<T>& t, Var self) {
    std::span<const T> g = t.grad(self);
    if (t.requires_grad(a)) accumulate(t.grad(a), g);
    if (t.requires_grad(b)) accumulate(t.grad(b), g);
  });
}

template <typename T>
Var add_bias(Tape<T>& tape, Var x, Var bias) {
  const Tensor<T>& xv = matrix(tape, x, "add_bias");
  const Tensor<T>& bv = tape.value(bias);
  const std::size_t rows = xv.dim(0), cols = xv.dim(1);
  if (bv.size() != cols) {
    throw DimensionError("add_bias: bias " + shape_string(bv.shape()) +
                         " does not match " + shape_string(xv.shape()));
  }
  Tensor<T> out = xv;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < cols; ++c) row[c] += bv[c];
  }
  return tape.record(std::move(out), {x, bias},
                     [x, bias, rows, cols](Tape<T>& t, Var self) {
                       std::span<const T> g = t.grad(self);
                       if (t.requires_grad(x)) accumulate(t.grad(x), g);
                       if (t.requires_grad(bias)) {
                         auto gb = t.grad(bias);
                         for (std::size_t r = 0; r < rows; ++r) {
                           for (std::size_t c = 0; c < cols; ++c) gb[c] += g[r * cols + c];
                         }
                       }
                     });
}

template <typename T>
Var scale(Tape<T>& tape, Var x, T factor) {
  Tensor<T> out = tape.value(x);
  for (T& v : out.values()) v *= factor;
  return tape.record(std::move(out), {x}, [x, factor](Tape<T>& t, Var self) {
    std::span<const T> g = t.grad(self);
    auto gx = t.grad(x);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += factor * g[i];
  });
}

template <typename T>
Var sum(Tape<T>& tape, Var x) {
  T total = 0;
  for (T v : tape.value(x).values()) total += v;
  return tape.record(Tensor<T>({1}, {total}), {x}, [x](Tape<T>& t, Var self) {
    const T g = t.grad(self)[0];
    for (T& v : t.grad(x)) v += g;
  });
}

template <typename T>
Var layer_norm(Tape<T>& tape, Var x, Var gain, Var bias, T epsilon) {
  if (epsilon < 0) throw ContractError("layer_norm: epsilon must be >= 0");
  const Tensor<T>& xv = tape.value(x);
  const std::size_t cols = xv.cols();
  const std::size_t rows = xv.size() / std::max<std::size_t>(cols, 1);
  if (tape.value(gain).size() != cols || tape.value(bias).size() != cols) {
    throw DimensionError("layer_norm: input " + shape_string(xv.shape()) +
                         " with gain " + shape_string(tape.value(gain).shape()) +
                         " and bias " + shape_string(tape.value(bias).shape()));
  }
  const auto& gv = tape.value(gain);
  const auto& bv = tape.value(bias);
  Tensor<T> out(xv.shape());
  std::vector<T> normalized(xv.size());
  std::vector<T> inv_std(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* in = xv.values().data() + r * cols;
    T mean = 0;
    for (std::size_t c = 0; c < cols; ++c) mean += in[c];
    mean /= static_cast<T>(cols);
    T var = 0;
    for (std::size_t c = 0; c < cols; ++c) var += (in[c] - mean) * (in[c] - mean);
    var /= static_cast<T>(cols);
    const T denom = var + epsilon;
    const T inv = denom > 0 ? T{1} / std::sqrt(denom) : T{0};
    inv_std[r] = inv;
    for (std::size_t c = 0; c < cols; ++c) {
      const T xh = (in[c] - mean) * inv;
      normalized[r * cols + c] = xh;
      out[r * cols + c] = gv[c] * xh + bv[c];
    }
  }
  return tape.record(
      std::move(out), {x, gain, bias},
      [x, gain, bias, rows, cols, normalized = std::move(normalized),
       inv_std = std::move(inv_std)](Tape<T>& t, Var self) {
        std::span<const T> g = t.grad(self);
        if (t.requires_grad(gain)) {
          auto gg = t.grad(gain);
          for (std::size_t i = 0; i < g.size(); ++i) gg[i % cols] += g[i] * normalized[i];
        }
        if (t.requires_grad(bias)) {
          auto gb = t.grad(bias);
          for (std::size_t i = 0; i < g.size(); ++i) gb[i % cols] += g[i];
        }
        if (t.requires_grad(x)) {
          const auto& gv = t.value(gain);
          auto gx = t.grad(x);
          const T n = static_cast<T>(cols);
          for (std::size_t r = 0; r < rows; ++r) {
            T sum_d = 0, sum_dx = 0;
            for (std::size_t c = 0; c < cols; ++c) {
              const T d = g[r * cols + c] * gv[c];
              sum_d += d;
              sum_dx += d * normalized[r * cols + c];
            }
            for (std::size_t c = 0; c < cols; ++c) {
              const T d = g[r * cols + c] * gv[c];
              gx[r * cols + c] +=
                  inv_std[r] / n * (n * d - sum_d - normalized[r * cols + c] * sum_dx);
            }
          }
        }
      });
}

template <typename T>
Var gelu(Tape<T>& tape, Var x) {
  constexpr T kInvSqrt2 = T(0.70710678118654752440);
  Tensor<T> out = tape.value(x);
  for (T& v : out.values()) v = T(0.5) * v * (T(1) + std::erf(v * kInvSqrt2));
  return tape.record(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    constexpr T kInvSqrt2 = T(0.70710678118654752440);
    constexpr T kInvSqrt2Pi = T(0.39894228040143267794);
    std::span<const T> g = t.grad(self);
    auto in = t.value(x).values();
    auto gx = t.grad(x);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const T z = in[i];
      const T cdf = T(0.5) * (T(1) + std::erf(z * kInvSqrt2));
      const T pdf = kInvSqrt2Pi * std::exp(T(-0.5) * z * z);
      gx[i] += g[i] * (cdf + z * pdf);
    }
  });
}

namespace {

template <typename T>
void softmax_row(const T* in, T* out, std::size_t n) {
  T peak = -std::numeric_limits<T>::infinity();
  for (std::size_t j = 0; j < n; ++j) peak = std::max(peak, in[j]);
  T total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = std::exp(in[j] - peak);
    total += out[j];
  }
  for (std::size_t j = 0; j < n; ++j) out[j] /= total;
}

}  // namespace

template <typename T>
Var softmax(Tape<T>& tape, Var x) {
  const Tensor<T>& xv = tape.value(x);
  const std::size_t cols = xv.cols();
  const std::size_t rows = xv.size() / std::max<std::size_t>(cols, 1);
  Tensor<T> out(xv.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    softmax_row(xv.values().data() + r * cols, out.values().data() + r * cols, cols);
  }
  return tape.record(std::move(out), {x}, [x, rows, cols](Tape<T>& t, Var self) {
    std::span<const T> g = t.grad(self);
    auto y = t.value(self).values();
    auto gx = t.grad(x);
    for (std::size_t r = 0; r < rows; ++r) {
      T dot = 0;
      for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * y[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        gx[r * cols + c] += y[r * cols + c] * (g[r * cols + c] - dot);
      }
    }
  });
}

template <typename T>
Var gather_rows(Tape<T>& tape, Var table, std::span<const std::size_t> indices) {
  const Tensor<T>& tv = matrix(tape, table, "gather_rows");
  const std::size_t cols = tv.dim(1);
  Tensor<T> out({indices.size(), cols});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= tv.dim(0)) {
      throw IndexError("gather_rows: row " + std::to_string(indices[i]) +
                       " out of range for " + shape_string(tv.shape()));
    }
    std::copy_n(tv.row(indices[i]).data(), cols, out.row(i).data());
  }
  std::vector<std::size_t> rows(indices.begin(), indices.end());
  return tape.record(std::move(out), {table},
                     [table, cols, rows = std::move(rows)](Tape<T>& t, Var self) {
                       std::span<const T> g = t.grad(self);
                       auto gt = t.grad(table);
                       for (std::size_t i = 0; i < rows.size(); ++i) {
                         T* dst = gt.data() + rows[i] * cols;
                         const T* src = g.data() + i * cols;
                         for (std::size_t c = 0; c < cols; ++c) dst[c] += src[c];
                       }
                     });
}

template <typename T>
Var replace_rows(Tape<T>& tape, Var x, std::span<const std::size_t> rows,
                 const Tensor<T>& replacements) {
  const Tensor<T>& xv = matrix(tape, x, "replace_rows");
  const std::size_t cols = xv.dim(1);
  if (replacements.rows() != rows.size() || replacements.cols() != cols) {
    throw DimensionError("replace_rows: " + std::to_string(rows.size()) +
                         " rows of width " + std::to_string(cols) + " but got " +
                         shape_string(replacements.shape()));
  }
  Tensor<T> out = xv;
  std::vector<bool> replaced(xv.dim(0), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= xv.dim(0)) {
      throw IndexError("replace_rows: row " + std::to_string(rows[i]) +
                       " out of range for " + shape_string(xv.shape()));
    }
    std::copy_n(replacements.row(i).data(), cols, out.row(rows[i]).data());
    replaced[rows[i]] = true;
  }
  return tape.record(std::move(out), {x},
                     [x, cols, replaced = std::move(replaced)](Tape<T>& t, Var self) {
                       std::span<const T> g = t.grad(self);
                       auto gx = t.grad(x);
                       for (std::size_t r = 0; r < replaced.size(); ++r) {
                         if (replaced[r]) continue;
                         for (std::size_t c = 0; c < cols; ++c) {
                           gx[r * cols + c] += g[r * cols + c];
                         }
                       }
                     });
}

template <typename T>
Var concat_columns(Tape<T>& tape, Var a, Var b) {
  const Tensor<T>& av = matrix(tape, a, "concat_columns");
  const Tensor<T>& bv = matrix(tape, b, "concat_columns");
  if (av.dim(0) != bv.dim(0)) {
    throw DimensionError("concat_columns: row counts differ for " +
                         shape_string(av.shape()) + " and " + shape_string(bv.shape()));
  }
  const std::size_t rows = av.dim(0), ca = av.dim(1), cb = bv.dim(1);
  Tensor<T> out({rows, ca + cb});
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(av.row(r).data(), ca, out.row(r).data());
    std::copy_n(bv.row(r).data(), cb, out.row(r).data() + ca);
  }
  return tape.record(std::move(out), {a, b}, [a, b, rows, ca, cb](Tape<T>& t, Var self) {
    std::span<const T> g = t.grad(self);
    for (std::size_t r = 0; r < rows; ++r) {
      if (t.requires_grad(a)) {
        auto ga = t.grad(a);
        for (std::size_t c = 0; c < ca; ++c) ga[r * ca + c] += g[r * (ca + cb) + c];
      }
      if (t.requires_grad(b)) {
        auto gb = t.grad(b);
        for (std::size_t c = 0; c < cb; ++c) gb[r * cb + c] += g[r * (ca + cb) + ca + c];
      }
    }
  });
}

template <typename T>
Var attention(Tape<T>& tape, Var q, Var k, Var v, std::size_t heads,
              std::span<const std::uint8_t> masked_keys) {
  const Tensor<T>& qv = matrix(tape, q, "attention");
  const Tensor<T>& kv = matrix(tape, k, "attention");
  const Tensor<T>& vv = matrix(tape, v, "attention");
  if (qv.shape() != kv.shape() || qv.shape() != vv.shape()) {
    throw DimensionError("attention: q " + shape_string(qv.shape()) + ", k " +
                         shape_string(kv.shape()) + ", v " + shape_string(vv.shape()));
  }
  const std::size_t n = qv.dim(0), width = qv.dim(1);
  if (heads == 0 || width % heads != 0) {
    throw DimensionError("attention: width " + std::to_string(width) +
                         " not divisible by " + std::to_string(heads) + " heads");
  }
  if (!masked_keys.empty() && masked_keys.size() != n) {
    throw DimensionError("attention: key mask length " +
                         std::to_string(masked_keys.size()) + " for " +
                         std::to_string(n) + " positions");
  }
  const std::size_t dh = width / heads;
  const T scale_factor = T(1) / std::sqrt(static_cast<T>(dh));
  std::vector<bool> mask(n, false);
  for (std::size_t j = 0; j < masked_keys.size(); ++j) mask[j] = masked_keys[j];

  // weights[h][i][j]
  std::vector<T> weights(heads * n * n, T{0});
  Tensor<T> out({n, width});
  const T* Q = qv.values().data();
  const T* K = kv.values().data();
  const T* V = vv.values().data();
  std::vector<T> scores(n);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t off = h * dh;
    for (std::size_t i = 0; i < n; ++i) {
      T peak = -std::numeric_limits<T>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (mask[j]) continue;
        T s = 0;
        for (std::size_t d = 0; d < dh; ++d) s += Q[i * width + off + d] * K[j * width + off + d];
        scores[j] = s * scale_factor;
        peak = std::max(peak, scores[j]);
      }
      T* w = weights.data() + (h * n + i) * n;
      T total = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask[j]) continue;
        w[j] = std::exp(scores[j] - peak);
        total += w[j];
      }
      if (total > 0) {
        for (std::size_t j = 0; j < n; ++j) w[j] /= total;
      }
      T* o = out.values().data() + i * width + off;
      for (std::size_t j = 0; j < n; ++j) {
        if (w[j] == 0) continue;
        const T* vr = V + j * width + off;
        for (std::size_t d = 0; d < dh; ++d) o[d] += w[j] * vr[d];
      }
    }
  }
  return tape.record(
      std::move(out), {q, k, v},
      [q, k, v, n, width, heads, dh, scale_factor,
       weights = std::move(weights)](Tape<T>& t, Var self) {
        std::span<const T> g = t.grad(self);
        const T* Q = t.value(q).values().data();
        const T* K = t.value(k).values().data();
        const T* V = t.value(v).values().data();
        const bool need_q = t.requires_grad(q), need_k = t.requires_grad(k),
                   need_v = t.requires_grad(v);
        T* gq = need_q ? t.grad(q).data() : nullptr;
        T* gk = need_k ? t.grad(k).data() : nullptr;
        T* gv = need_v ? t.grad(v).data() : nullptr;
        std::vector<T> dw(n), ds(n);
        for (std::size_t h = 0; h < heads; ++h) {
          const std::size_t off = h * dh;
          for (std::size_t i = 0; i < n; ++i) {
            const T* w = weights.data() + (h * n + i) * n;
            const T* go = g.data() + i * width + off;
            T dot = 0;
            for (std::size_t j = 0; j < n; ++j) {
              T acc = 0;
              const T* vr = V + j * width + off;
              for (std::size_t d = 0; d < dh; ++d) acc += go[d] * vr[d];
              dw[j] = acc;
              dot += acc * w[j];
              if (need_v && w[j] != 0) {
                T* dv = gv + j * width + off;
                for (std::size_t d = 0; d < dh; ++d) dv[d] += w[j] * go[d];
              }
            }
            for (std::size_t j = 0; j < n; ++j) ds[j] = w[j] * (dw[j] - dot) * scale_factor;
            for (std::size_t j = 0; j < n; ++j) {
              if (ds[j] == 0) continue;
              if (need_q) {
                T* dq = gq + i * width + off;
                const T* kr = K + j * width + off;
                for (std::size_t d = 0; d < dh; ++d) dq[d] += ds[j] * kr[d];
              }
              if (need_k) {
                T* dk = gk + j * width + off;
                const T* qr = Q + i * width + off;
                for (std::size_t d = 0; d < dh; ++d) dk[d] += ds[j] * qr[d];
              }
            }
          }
        }
      });
}

template <typename T>
Var cross_entropy(Tape<T>& tape, Var logits, std::span<const std::size_t> targets) {
  const Tensor<T>& lv = matrix(tape, logits, "cross_entropy");
  const std::size_t rows = lv.dim(0), cols = lv.dim(1);
  if (targets.size() != rows) {
    throw DimensionError("cross_entropy: " + std::to_string(targets.size()) +
                         " targets for logits " + shape_string(lv.shape()));
  }
  std::vector<T> probs(rows * cols);
  T loss = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (targets[r] >= cols) {
      throw IndexError("cross_entropy: target " + std::to_string(targets[r]) +
                       " out of range for " + std::to_string(cols) + " classes");
    }
    const T* in = lv.values().data() + r * cols;
    T peak = -std::numeric_limits<T>::infinity();
    for (std::size_t c = 0; c < cols; ++c) peak = std::max(peak, in[c]);
    T total = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      probs[r * cols + c] = std::exp(in[c] - peak);
      total += probs[r * cols + c];
    }
    for (std::size_t c = 0; c < cols; ++c) probs[r * cols + c] /= total;
    loss += std::log(total) + peak - in[targets[r]];
  }
  std::vector<std::size_t> gold(targets.begin(), targets.end());
  return tape.record(Tensor<T>({1}, {loss}), {logits},
                     [logits, cols, probs = std::move(probs),
                      gold = std::move(gold)](Tape<T>& t, Var self) {
                       const T g = t.grad(self)[0];
                       auto gl = t.grad(logits);
                       for (std::size_t i = 0; i < probs.size(); ++i) gl[i] += g * probs[i];
                       for (std::size_t r = 0; r < gold.size(); ++r) {
                         gl[r * cols + gold[r]] -= g;
                       }
                     });
}

template <typename T>
Var softmax_cross_entropy(Tape<T>& tape, Var logits, std::size_t target) {
  const Tensor<T>& lv = tape.value(logits);
  if (lv.rank() == 2 && lv.dim(0) != 1) {
    throw DimensionError("softmax_cross_entropy: expected one logit row, got " +
                         shape_string(lv.shape()));
  }
  Var row = logits;
  if (lv.rank() != 2) {
    // Present a vector as a 1 x V matrix; the reshape is value-preserving.
    Tensor<T> reshaped({1, lv.size()}, std::vector<T>(lv.values().begin(), lv.values().end()));
    row = tape.record(std::move(reshaped), {logits}, [logits](Tape<T>& t, Var self) {
      std::span<const T> g = t.grad(self);
      auto gl = t.grad(logits);
      for (std::size_t i = 0; i < gl.size(); ++i) gl[i] += g[i];
    });
  }
  const std::size_t targets[1] = {target};
  return cross_entropy(tape, row, std::span<const std::size_t>(targets));
}

#define PELT_INSTANTIATE_OPS(T)                                                          \
  template Var matmul<T>(Tape<T>&, Var, Var);                                           \
  template Var matmul_transposed<T>(Tape<T>&, Var, Var);                                \
  template Var add<T>(Tape<T>&, Var, Var);                                              \
  template Var add_bias<T>(Tape<T>&, Var, Var);                                         \
  template Var scale<T>(Tape<T>&, Var, T);                                              \
  template Var sum<T>(Tape<T>&, Var);                                                   \
  template Var layer_norm<T>(Tape<T>&, Var, Var, Var, T);                               \
  template Var gelu<T>(Tape<T>&, Var);                                                  \
  template Var softmax<T>(Tape<T>&, Var);                                               \
  template Var gather_rows<T>(Tape<T>&, Var, std::span<const std::size_t>);             \
  template Var replace_rows<T>(Tape<T>&, Var, std::span<const std::size_t>,             \
                               const Tensor<T>&);                                       \
  template Var concat_columns<T>(Tape<T>&, Var, Var);                                   \
  template Var attention<T>(Tape<T>&, Var, Var, Var, std::size_t, std::span<const std::uint8_t>); \
  template Var cross_entropy<T>(Tape<T>&, Var, std::span<const std::size_t>);           \
  template Var softmax_cross_entropy<T>(Tape<T>&, Var, std::size_t);

PELT_INSTANTIATE_OPS(float)
PELT_INSTANTIATE_OPS(double)

}  // namespace pelt::numerics
