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

#include <algorithm>

#include "rawvid/simd/kernels.hpp"

namespace rawvid::simd {

namespace {

void gemm_scalar(int m, int n, int k, const float* a, int lda, const float* b, int ldb, float* c,
                 int ldc) {
  for (int i = 0; i < m; ++i) {
    float* crow = c + static_cast<std::ptrdiff_t>(i) * ldc;
    for (int p = 0; p < k; ++p) {
      const float av = a[static_cast<std::ptrdiff_t>(i) * lda + p];
      if (av == 0.0f) continue;
      const float* brow = b + static_cast<std::ptrdiff_t>(p) * ldb;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void axpy_scalar(std::size_t n, float alpha, const float* x, float* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

float dot_scalar(std::size_t n, const float* a, const float* b) {
  float s = 0.0f;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_sq_diff_scalar(std::size_t n, const float* a, const float* b) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

double sum_sq_scalar(std::size_t n, const float* a) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(a[i]) * a[i];
  return s;
}

void color_matrix_scalar(std::size_t n, const float* m, float* r, float* g, float* b) {
  for (std::size_t i = 0; i < n; ++i) {
    const float x = r[i], y = g[i], z = b[i];
    r[i] = m[0] * x + m[1] * y + m[2] * z;
    g[i] = m[3] * x + m[4] * y + m[5] * z;
    b[i] = m[6] * x + m[7] * y + m[8] * z;
  }
}

void aces_fit_scalar(std::size_t n, float* x) {
  for (std::size_t i = 0; i < n; ++i) {
    const float v = x[i];
    const float y = (v * (2.51f * v + 0.03f)) / (v * (2.43f * v + 0.59f) + 0.14f);
    x[i] = std::clamp(y, 0.0f, 1.0f);
  }
}

void mul_scalar(std::size_t n, const float* gate, float* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= gate[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",           gemm_scalar,          axpy_scalar,     dot_scalar, sum_sq_diff_scalar,
      sum_sq_scalar,      color_matrix_scalar,  aces_fit_scalar, mul_scalar,
  };
  return table;
}

}  // namespace rawvid::simd
