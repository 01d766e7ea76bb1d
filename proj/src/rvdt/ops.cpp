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

#include "rawvid/rvdt/ops.hpp"

#include <algorithm>

#include "rawvid/error.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/simd/kernels.hpp"

namespace rawvid::rvdt {

namespace {

void check_map(const Tensor& x, const char* what) {
  require(x.rank() == 3, ErrorKind::Shape, std::string(what) + " expects a C x H x W tensor, got " + x.shape_string());
}

inline int fold(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor* bias, int stride, int pad) {
  check_map(x, "conv2d");
  require(w.rank() == 4 && w.dim(1) == x.dim(0) && w.dim(2) == w.dim(3), ErrorKind::Shape,
          "conv2d weight " + w.shape_string() + " does not match input " + x.shape_string());
  const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const int cout = w.dim(0), k = w.dim(2);
  if (pad < 0) pad = k / 2;
  require(stride >= 1, ErrorKind::Shape, "conv2d stride must be positive");
  const int ho = (h + 2 * pad - k) / stride + 1, wo = (wd + 2 * pad - k) / stride + 1;
  require(ho > 0 && wo > 0, ErrorKind::Shape, "conv2d input smaller than kernel");
  if (bias) require(bias->size() == static_cast<std::size_t>(cout), ErrorKind::Shape, "conv2d bias size mismatch");

  const int kk = cin * k * k;
  const int n = ho * wo;
  Tensor out({cout, ho, wo});
  if (bias)
    for (int o = 0; o < cout; ++o) std::fill_n(out.ptr() + static_cast<std::size_t>(o) * n, n, bias->data[o]);

  // im2col in column chunks so memory stays bounded on large frames.
  constexpr int kChunk = 1024;
  const int chunks = (n + kChunk - 1) / kChunk;
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t ci) {
    const int c0 = static_cast<int>(ci) * kChunk, c1 = std::min(n, c0 + kChunk), nc = c1 - c0;
    std::vector<float> col(static_cast<std::size_t>(kk) * nc);
    for (int c = 0; c < cin; ++c)
      for (int ky = 0; ky < k; ++ky)
        for (int kx = 0; kx < k; ++kx) {
          float* dst = col.data() + static_cast<std::size_t>((c * k + ky) * k + kx) * nc;
          const float* src = x.ptr() + static_cast<std::size_t>(c) * h * wd;
          for (int p = c0; p < c1; ++p) {
            const int oy = p / wo, ox = p % wo;
            const int iy = oy * stride + ky - pad, ix = ox * stride + kx - pad;
            dst[p - c0] = (iy >= 0 && iy < h && ix >= 0 && ix < wd) ? src[iy * wd + ix] : 0.0f;
          }
        }
    std::vector<float> acc(static_cast<std::size_t>(cout) * nc, 0.0f);
    simd::gemm(cout, nc, kk, w.ptr(), kk, col.data(), nc, acc.data(), nc);
    for (int o = 0; o < cout; ++o) {
      float* dst = out.ptr() + static_cast<std::size_t>(o) * n + c0;
      const float* a = acc.data() + static_cast<std::size_t>(o) * nc;
      for (int p = 0; p < nc; ++p) dst[p] += a[p];
    }
  });
  return out;
}

Tensor conv2d_grouped(const Tensor& x, const Tensor& w, const Tensor* bias, int groups) {
  check_map(x, "conv2d_grouped");
  const int cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  require(groups >= 1 && cin % groups == 0 && w.rank() == 4 && w.dim(0) % groups == 0 &&
              w.dim(1) == cin / groups && w.dim(2) == w.dim(3),
          ErrorKind::Shape, "grouped conv weight " + w.shape_string() + " does not match input " + x.shape_string());
  const int cout = w.dim(0), k = w.dim(2), pad = k / 2;
  const int in_per = cin / groups, out_per = cout / groups;
  Tensor out({cout, h, wd});
  for (int o = 0; o < cout; ++o) {
    const int g = o / out_per;
    float* dst = out.ptr() + static_cast<std::size_t>(o) * h * wd;
    const float b = bias ? bias->data[o] : 0.0f;
    for (int y = 0; y < h; ++y)
      for (int xx = 0; xx < wd; ++xx) {
        float s = b;
        for (int ic = 0; ic < in_per; ++ic) {
          const float* src = x.ptr() + static_cast<std::size_t>(g * in_per + ic) * h * wd;
          const float* wk = w.ptr() + (static_cast<std::size_t>(o) * in_per + ic) * k * k;
          for (int ky = 0; ky < k; ++ky) {
            const int iy = y + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < k; ++kx) {
              const int ix = xx + kx - pad;
              if (ix < 0 || ix >= wd) continue;
              s += wk[ky * k + kx] * src[iy * wd + ix];
            }
          }
        }
        dst[y * wd + xx] = s;
      }
  }
  return out;
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor* bias) {
  require(x.rank() >= 1 && w.rank() == 2 && x.dim(-1) == w.dim(0), ErrorKind::Shape,
          "linear weight " + w.shape_string() + " does not match input " + x.shape_string());
  const int in = w.dim(0), outc = w.dim(1);
  const int m = static_cast<int>(x.size() / static_cast<std::size_t>(in));
  std::vector<int> shape = x.shape;
  shape.back() = outc;
  Tensor out(shape);
  if (bias) {
    require(bias->size() == static_cast<std::size_t>(outc), ErrorKind::Shape, "linear bias size mismatch");
    for (int r = 0; r < m; ++r) std::copy(bias->data.begin(), bias->data.end(), out.ptr() + static_cast<std::size_t>(r) * outc);
  }
  constexpr int kRows = 256;
  const int chunks = (m + kRows - 1) / kRows;
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t ci) {
    const int r0 = static_cast<int>(ci) * kRows, r1 = std::min(m, r0 + kRows);
    simd::gemm(r1 - r0, outc, in, x.ptr() + static_cast<std::size_t>(r0) * in, in, w.ptr(), outc,
               out.ptr() + static_cast<std::size_t>(r0) * outc, outc);
  });
  return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps) {
  const int c = x.dim(-1);
  require(gamma.size() == static_cast<std::size_t>(c) && beta.size() == static_cast<std::size_t>(c),
          ErrorKind::Shape, "layer norm parameters do not match the channel axis");
  Tensor out(x.shape);
  const std::size_t rows = x.size() / static_cast<std::size_t>(c);
  for (std::size_t r = 0; r < rows; ++r) {
    const float* src = x.ptr() + r * c;
    float* dst = out.ptr() + r * c;
    double mean = 0.0;
    for (int i = 0; i < c; ++i) mean += src[i];
    mean /= c;
    double var = 0.0;
    for (int i = 0; i < c; ++i) var += (src[i] - mean) * (src[i] - mean);
    var /= c;
    const double inv = 1.0 / std::sqrt(var + eps);
    for (int i = 0; i < c; ++i)
      dst[i] = static_cast<float>((src[i] - mean) * inv) * gamma.data[i] + beta.data[i];
  }
  return out;
}

void add_inplace(Tensor& a, const Tensor& b) {
  require(a.shape == b.shape, ErrorKind::Shape, "add: shapes " + a.shape_string() + " and " + b.shape_string());
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
}

void leaky_relu_inplace(Tensor& x, float slope) {
  for (float& v : x.data) v = v >= 0.0f ? v : slope * v;
}

float gelu(float x) { return static_cast<float>(0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)))); }

void gelu_inplace(Tensor& x) {
  for (float& v : x.data) v = gelu(v);
}

Tensor pixel_shuffle(const Tensor& x, int r) {
  check_map(x, "pixel_shuffle");
  require(r >= 1 && x.dim(0) % (r * r) == 0, ErrorKind::Shape,
          "pixel shuffle needs channels divisible by r^2, got " + x.shape_string());
  const int c = x.dim(0) / (r * r), h = x.dim(1), w = x.dim(2);
  Tensor out({c, h * r, w * r});
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const float* src = x.ptr() + static_cast<std::size_t>(ch * r * r + i * r + j) * h * w;
        for (int y = 0; y < h; ++y)
          for (int xx = 0; xx < w; ++xx)
            out.data[(static_cast<std::size_t>(ch) * h * r + y * r + i) * w * r + xx * r + j] = src[y * w + xx];
      }
  return out;
}

Tensor upsample_nearest2(const Tensor& x) {
  check_map(x, "upsample");
  const int c = x.dim(0), h = x.dim(1), w = x.dim(2);
  Tensor out({c, 2 * h, 2 * w});
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < 2 * h; ++y)
      for (int xx = 0; xx < 2 * w; ++xx)
        out.data[(static_cast<std::size_t>(ch) * 2 * h + y) * 2 * w + xx] =
            x.data[(static_cast<std::size_t>(ch) * h + y / 2) * w + xx / 2];
  return out;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  check_map(a, "concat");
  check_map(b, "concat");
  require(a.dim(1) == b.dim(1) && a.dim(2) == b.dim(2), ErrorKind::Shape, "concat: spatial extents differ");
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

Tensor reflect_pad_end(const Tensor& x, int pad_h, int pad_w) {
  require(x.rank() >= 2 && pad_h >= 0 && pad_w >= 0, ErrorKind::Shape, "invalid reflect padding");
  if (pad_h == 0 && pad_w == 0) return x;
  const int h = x.dim(-2), w = x.dim(-1);
  std::vector<int> shape = x.shape;
  shape[shape.size() - 2] = h + pad_h;
  shape.back() = w + pad_w;
  Tensor out(shape);
  const std::size_t planes = x.size() / (static_cast<std::size_t>(h) * w);
  const int ho = h + pad_h, wo = w + pad_w;
  for (std::size_t p = 0; p < planes; ++p)
    for (int y = 0; y < ho; ++y)
      for (int xx = 0; xx < wo; ++xx)
        out.data[(p * ho + y) * wo + xx] = x.data[(p * h + fold(y, h)) * w + fold(xx, w)];
  return out;
}

Tensor crop_end(const Tensor& x, int h, int w) {
  require(x.rank() >= 2 && h <= x.dim(-2) && w <= x.dim(-1), ErrorKind::Shape, "crop larger than tensor");
  if (h == x.dim(-2) && w == x.dim(-1)) return x;
  const int hi = x.dim(-2), wi = x.dim(-1);
  std::vector<int> shape = x.shape;
  shape[shape.size() - 2] = h;
  shape.back() = w;
  Tensor out(shape);
  const std::size_t planes = x.size() / (static_cast<std::size_t>(hi) * wi);
  for (std::size_t p = 0; p < planes; ++p)
    for (int y = 0; y < h; ++y)
      std::copy_n(x.ptr() + (p * hi + y) * wi, w, out.ptr() + (p * h + y) * w);
  return out;
}

}  // namespace rawvid::rvdt
