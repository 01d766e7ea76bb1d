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

#include "rawvid/rvdt/attention.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/rvdt/ops.hpp"
#include "rawvid/simd/kernels.hpp"

namespace rawvid::rvdt {

WindowGeometry window_geometry(int frames, int height, int width, int wt, int wh, int ww) {
  require(frames >= 1 && height >= 1 && width >= 1 && wt >= 1 && wh >= 1 && ww >= 1, ErrorKind::Shape,
          "invalid window geometry");
  WindowGeometry g;
  g.frames = frames;
  g.height = height;
  g.width = width;
  g.wt = std::min(wt, frames);
  g.wh = std::min(wh, height);
  g.ww = std::min(ww, width);
  require(frames % g.wt == 0, ErrorKind::Shape, "temporal window must divide the frame count");
  g.padded_h = (height + g.wh - 1) / g.wh * g.wh;
  g.padded_w = (width + g.ww - 1) / g.ww * g.ww;
  return g;
}

Tensor window_partition(const Tensor& x, const WindowGeometry& g) {
  require(x.rank() == 4 && x.dim(0) == g.frames && x.dim(2) == g.height && x.dim(3) == g.width, ErrorKind::Shape,
          "window partition input " + x.shape_string() + " does not match its geometry");
  const int c = x.dim(1);
  const Tensor p = reflect_pad_end(x, g.padded_h - g.height, g.padded_w - g.width);
  const int nt = g.frames / g.wt, ny = g.padded_h / g.wh, nx = g.padded_w / g.ww;
  Tensor out({g.windows(), g.tokens(), c});
  const std::size_t hw = static_cast<std::size_t>(g.padded_h) * g.padded_w;
  for (int bt = 0; bt < nt; ++bt)
    for (int by = 0; by < ny; ++by)
      for (int bx = 0; bx < nx; ++bx) {
        const int win = (bt * ny + by) * nx + bx;
        for (int dt = 0; dt < g.wt; ++dt)
          for (int dy = 0; dy < g.wh; ++dy)
            for (int dx = 0; dx < g.ww; ++dx) {
              const int tok = (dt * g.wh + dy) * g.ww + dx;
              const int t = bt * g.wt + dt, y = by * g.wh + dy, xx = bx * g.ww + dx;
              float* dst = out.ptr() + (static_cast<std::size_t>(win) * g.tokens() + tok) * c;
              const float* src = p.ptr() + static_cast<std::size_t>(t) * c * hw + static_cast<std::size_t>(y) * g.padded_w + xx;
              for (int ch = 0; ch < c; ++ch) dst[ch] = src[ch * hw];
            }
      }
  return out;
}

Tensor window_reverse(const Tensor& tokens, const WindowGeometry& g, int c) {
  require(tokens.rank() == 3 && tokens.dim(0) == g.windows() && tokens.dim(1) == g.tokens() && tokens.dim(2) == c,
          ErrorKind::Shape, "window reverse input " + tokens.shape_string() + " does not match its geometry");
  const int nt = g.frames / g.wt, ny = g.padded_h / g.wh, nx = g.padded_w / g.ww;
  Tensor out({g.frames, c, g.height, g.width});
  const std::size_t hw = static_cast<std::size_t>(g.height) * g.width;
  for (int bt = 0; bt < nt; ++bt)
    for (int by = 0; by < ny; ++by)
      for (int bx = 0; bx < nx; ++bx) {
        const int win = (bt * ny + by) * nx + bx;
        for (int dt = 0; dt < g.wt; ++dt)
          for (int dy = 0; dy < g.wh; ++dy)
            for (int dx = 0; dx < g.ww; ++dx) {
              const int t = bt * g.wt + dt, y = by * g.wh + dy, xx = bx * g.ww + dx;
              if (y >= g.height || xx >= g.width) continue;
              const int tok = (dt * g.wh + dy) * g.ww + dx;
              const float* src = tokens.ptr() + (static_cast<std::size_t>(win) * g.tokens() + tok) * c;
              float* dst = out.ptr() + static_cast<std::size_t>(t) * c * hw + static_cast<std::size_t>(y) * g.width + xx;
              for (int ch = 0; ch < c; ++ch) dst[ch * hw] = src[ch];
            }
      }
  return out;
}

Tensor window_partition_2d(const Tensor& x, int window, WindowGeometry* geometry) {
  require(x.rank() == 3, ErrorKind::Shape, "2-D window partition expects C x H x W");
  const WindowGeometry g = window_geometry(1, x.dim(1), x.dim(2), 1, window, window);
  if (geometry) *geometry = g;
  Tensor x4({1, x.dim(0), x.dim(1), x.dim(2)}, x.data);
  return window_partition(x4, g);
}

Tensor window_reverse_2d(const Tensor& tokens, const WindowGeometry& g) {
  Tensor x4 = window_reverse(tokens, g, tokens.dim(2));
  return Tensor({x4.dim(1), x4.dim(2), x4.dim(3)}, std::move(x4.data));
}

std::vector<int> relative_position_index(const WindowGeometry& g, int table_t, int table_w) {
  require(g.wt <= table_t && g.wh <= table_w && g.ww <= table_w, ErrorKind::Shape,
          "window larger than its bias table");
  const int n = g.tokens();
  const int side = 2 * table_w - 1;
  std::vector<int> idx(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const int ti = i / (g.wh * g.ww), yi = (i / g.ww) % g.wh, xi = i % g.ww;
    for (int j = 0; j < n; ++j) {
      const int tj = j / (g.wh * g.ww), yj = (j / g.ww) % g.wh, xj = j % g.ww;
      const int dt = ti - tj + table_t - 1, dy = yi - yj + table_w - 1, dx = xi - xj + table_w - 1;
      idx[static_cast<std::size_t>(i) * n + j] = (dt * side + dy) * side + dx;
    }
  }
  return idx;
}

namespace {

// One head of one window. q rows have stride ldq etc.; kt is scratch d x nk.
void attend(const float* q, int ldq, const float* k, int ldk, const float* v, int ldv, int nq, int nk, int d,
            int dv, const float* bias, int ldb_bias, const int* rel, const float* table, int table_stride,
            float* out, int ldo, float* probs, std::vector<float>& kt, std::vector<float>& scores) {
  kt.assign(static_cast<std::size_t>(d) * nk, 0.0f);
  for (int j = 0; j < nk; ++j)
    for (int c = 0; c < d; ++c) kt[static_cast<std::size_t>(c) * nk + j] = k[static_cast<std::size_t>(j) * ldk + c];
  scores.assign(static_cast<std::size_t>(nq) * nk, 0.0f);
  simd::gemm(nq, nk, d, q, ldq, kt.data(), nk, scores.data(), nk);
  const float scale = 1.0f / std::sqrt(static_cast<float>(d));
  for (int i = 0; i < nq; ++i) {
    float* row = scores.data() + static_cast<std::size_t>(i) * nk;
    float mx = -INFINITY;
    for (int j = 0; j < nk; ++j) {
      float s = row[j] * scale;
      if (bias) s += bias[static_cast<std::size_t>(i) * ldb_bias + j];
      if (rel) s += table[static_cast<std::size_t>(rel[static_cast<std::size_t>(i) * nk + j]) * table_stride];
      row[j] = s;
      mx = std::max(mx, s);
    }
    double sum = 0.0;
    for (int j = 0; j < nk; ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    const float inv = static_cast<float>(1.0 / sum);
    for (int j = 0; j < nk; ++j) row[j] *= inv;
    if (probs) std::copy_n(row, nk, probs + static_cast<std::size_t>(i) * nk);
  }
  for (int i = 0; i < nq; ++i) std::fill_n(out + static_cast<std::size_t>(i) * ldo, dv, 0.0f);
  simd::gemm(nq, dv, nk, scores.data(), nk, v, ldv, out, ldo);
}

}  // namespace

Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v, const Tensor* bias,
                            std::vector<float>* probs) {
  require(q.rank() == 2 && k.rank() == 2 && v.rank() == 2, ErrorKind::Shape, "attention expects matrices");
  require(q.dim(1) == k.dim(1), ErrorKind::Shape, "attention head dimension mismatch between Q and K");
  require(k.dim(0) == v.dim(0), ErrorKind::Shape, "attention K and V token counts differ");
  const int nq = q.dim(0), nk = k.dim(0), d = q.dim(1), dv = v.dim(1);
  if (bias) require(bias->rank() == 2 && bias->dim(0) == nq && bias->dim(1) == nk, ErrorKind::Shape,
                    "attention bias must be N x M");
  Tensor out({nq, dv});
  std::vector<float> kt, scores;
  if (probs) probs->assign(static_cast<std::size_t>(nq) * nk, 0.0f);
  attend(q.ptr(), d, k.ptr(), d, v.ptr(), dv, nq, nk, d, dv, bias ? bias->ptr() : nullptr, nk, nullptr, nullptr, 0,
         out.ptr(), dv, probs ? probs->data() : nullptr, kt, scores);
  return out;
}

Tensor multi_head_attention(const Tensor& q, const Tensor& k, const Tensor& v, int heads, const Tensor* rpb,
                            const std::vector<int>* rel_index, AttentionTrace* trace) {
  require(q.rank() == 3 && k.rank() == 3 && v.rank() == 3, ErrorKind::Shape, "attention expects token tensors");
  require(q.dim(0) == k.dim(0) && k.dim(0) == v.dim(0) && k.dim(1) == v.dim(1), ErrorKind::Shape,
          "attention window/token counts differ");
  require(q.dim(2) == k.dim(2) && k.dim(2) == v.dim(2), ErrorKind::Shape, "attention channel mismatch");
  const int nw = q.dim(0), nq = q.dim(1), nk = k.dim(1), c = q.dim(2);
  require(heads >= 1 && c % heads == 0, ErrorKind::Shape, "channels not divisible by heads");
  const int d = c / heads;
  if (rpb) {
    require(rel_index && rel_index->size() == static_cast<std::size_t>(nq) * nk, ErrorKind::Shape,
            "relative position index does not match the window");
    require(rpb->rank() == 2 && rpb->dim(1) == heads, ErrorKind::Shape, "bias table head count mismatch");
    for (int r : *rel_index) require(r >= 0 && r < rpb->dim(0), ErrorKind::Shape, "relative index out of table");
  }
  if (trace) {
    trace->windows = nw;
    trace->heads = heads;
    trace->queries = nq;
    trace->keys = nk;
    trace->probs.assign(static_cast<std::size_t>(nw) * heads * nq * nk, 0.0f);
  }
  Tensor out({nw, nq, c});
  parallel_for(static_cast<std::size_t>(nw), [&](std::size_t wi) {
    std::vector<float> kt, scores;
    const std::size_t w = wi;
    for (int h = 0; h < heads; ++h) {
      float* probs = trace ? trace->probs.data() + ((w * heads + h) * nq) * nk : nullptr;
      attend(q.ptr() + w * nq * c + h * d, c, k.ptr() + w * nk * c + h * d, c, v.ptr() + w * nk * c + h * d, c, nq,
             nk, d, d, nullptr, 0, rpb ? rel_index->data() : nullptr, rpb ? rpb->ptr() + h : nullptr, heads,
             out.ptr() + w * nq * c + h * d, c, probs, kt, scores);
    }
  });
  return out;
}

}  // namespace rawvid::rvdt
