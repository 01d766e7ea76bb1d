/*
 * Copyright 2026 The rawvid Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by the ISP, metrics and the transformer
// reference. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is picked once per process from cpuid and
// may be forced with RAWVID_SIMD=scalar|avx2.
namespace rawvid::simd {

struct KernelTable {
  const char* name;

  // C[m x n] += A[m x k] * B[k x n], all row-major with explicit leading dims.
  void (*gemm)(int m, int n, int k, const float* a, int lda, const float* b, int ldb, float* c,
               int ldc);
  // y += alpha * x
  void (*axpy)(std::size_t n, float alpha, const float* x, float* y);
  float (*dot)(std::size_t n, const float* a, const float* b);
  // sum((a - b)^2) accumulated in double.
  double (*sum_sq_diff)(std::size_t n, const float* a, const float* b);
  // sum(a^2) accumulated in double.
  double (*sum_sq)(std::size_t n, const float* a);
  // In-place planar 3x3 matrix: [r g b]^T <- M [r g b]^T, M row-major.
  void (*color_matrix)(std::size_t n, const float* m9, float* r, float* g, float* b);
  // In-place x <- clamp(x(2.51x+0.03)/(x(2.43x+0.59)+0.14), 0, 1).
  void (*aces_fit)(std::size_t n, float* x);
  // In-place x <- x * gate
  void (*mul)(std::size_t n, const float* gate, float* x);
};

const KernelTable& scalar_kernels();
// nullptr when the CPU or the build lacks AVX2/FMA.
const KernelTable* avx2_kernels();

const KernelTable& active();
// Overrides the dispatch choice; "scalar", "avx2" or "auto". Returns false if
// the requested variant is unavailable.
bool select(std::string_view variant);

inline void gemm(int m, int n, int k, const float* a, int lda, const float* b, int ldb, float* c,
                 int ldc) {
  active().gemm(m, n, k, a, lda, b, ldb, c, ldc);
}
inline void axpy(std::size_t n, float alpha, const float* x, float* y) { active().axpy(n, alpha, x, y); }
inline float dot(std::size_t n, const float* a, const float* b) { return active().dot(n, a, b); }
inline double sum_sq_diff(std::size_t n, const float* a, const float* b) {
  return active().sum_sq_diff(n, a, b);
}
inline double sum_sq(std::size_t n, const float* a) { return active().sum_sq(n, a); }
inline void color_matrix(std::size_t n, const float* m9, float* r, float* g, float* b) {
  active().color_matrix(n, m9, r, g, b);
}
inline void aces_fit(std::size_t n, float* x) { active().aces_fit(n, x); }
inline void mul(std::size_t n, const float* gate, float* x) { active().mul(n, gate, x); }

}  // namespace rawvid::simd
