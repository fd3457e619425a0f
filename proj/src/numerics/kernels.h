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

#ifndef PELT_SRC_NUMERICS_KERNELS_H_
#define PELT_SRC_NUMERICS_KERNELS_H_

#include <cstddef>
#include <vector>

namespace pelt::numerics::kernels {

// c[m x n] += a[m x inner] * b[inner x n]
template <typename T>
void gemm_nn(std::size_t m, std::size_t inner, std::size_t n, const T* a,
             const T* b, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    T* __restrict crow = c + i * n;
    for (std::size_t p = 0; p < inner; ++p) {
      const T av = a[i * inner + p];
      const T* __restrict brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[m x n] += a[inner x m]^T * b[inner x n]
template <typename T>
void gemm_tn(std::size_t m, std::size_t inner, std::size_t n, const T* a,
             const T* b, T* c) {
  for (std::size_t p = 0; p < inner; ++p) {
    const T* __restrict brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const T av = a[p * m + i];
      T* __restrict crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[m x n] += a[m x inner] * b[n x inner]^T. Transposes b once so the inner
// loop stays a contiguous axpy.
template <typename T>
void gemm_nt(std::size_t m, std::size_t inner, std::size_t n, const T* a,
             const T* b, T* c) {
  thread_local std::vector<T> bt;
  bt.resize(inner * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < inner; ++p) bt[p * n + j] = b[j * inner + p];
  }
  gemm_nn(m, inner, n, a, bt.data(), c);
}

}  // namespace pelt::numerics::kernels

#endif  // PELT_SRC_NUMERICS_KERNELS_H_
