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

#include "rawvid/rvdt/blocks.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/rvdt/ops.hpp"
#include "rawvid/simd/kernels.hpp"

namespace rawvid::rvdt {

namespace {

const Tensor& W(const WeightSet& ws, const std::string& name) { return ws.get(name); }

// 3x3 zero-padded convolution of `in` planes (each h*w) into one output
// plane, weight laid out [in][3][3].
void conv3_plane(const float* const* planes, int in, int h, int w, const float* wk, float bias, float* out) {
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      float s = bias;
      for (int c = 0; c < in; ++c)
        for (int ky = -1; ky <= 1; ++ky) {
          const int iy = y + ky;
          if (iy < 0 || iy >= h) continue;
          for (int kx = -1; kx <= 1; ++kx) {
            const int ix = x + kx;
            if (ix < 0 || ix >= w) continue;
            s += wk[c * 9 + (ky + 1) * 3 + kx + 1] * planes[c][iy * w + ix];
          }
        }
      out[y * w + x] = s;
    }
}

// Gates one C' x (h*w) map in place: m <- SCA(Conv([SA(m), CA(m)]) + m) + m.
void gate_map(float* m, int ch, int h, int w, const WeightSet& ws, const std::string& p, int reduction) {
  const int hw = h * w;
  // Spatial attention map 1 x h x w from channel mean and max.
  std::vector<float> avg(hw, 0.0f), mx(hw, -INFINITY), sa(hw);
  for (int c = 0; c < ch; ++c)
    for (int i = 0; i < hw; ++i) {
      const float v = m[static_cast<std::size_t>(c) * hw + i];
      avg[i] += v;
      mx[i] = std::max(mx[i], v);
    }
  for (float& v : avg) v /= static_cast<float>(ch);
  const float* sa_in[2] = {avg.data(), mx.data()};
  conv3_plane(sa_in, 2, h, w, W(ws, p + ".sa.w").ptr(), W(ws, p + ".sa.b").data[0], sa.data());
  for (float& v : sa) v = sigmoid(v);

  // Channel attention map C' x 1 x 1.
  const int r = ch / reduction;
  std::vector<float> pooled(ch), hidden(r), ca(ch);
  for (int c = 0; c < ch; ++c) {
    double s = 0.0;
    for (int i = 0; i < hw; ++i) s += m[static_cast<std::size_t>(c) * hw + i];
    pooled[c] = static_cast<float>(s / hw);
  }
  const Tensor& w1 = W(ws, p + ".ca1.w");
  const Tensor& b1 = W(ws, p + ".ca1.b");
  const Tensor& w2 = W(ws, p + ".ca2.w");
  const Tensor& b2 = W(ws, p + ".ca2.b");
  for (int j = 0; j < r; ++j) {
    float s = b1.data[j];
    for (int c = 0; c < ch; ++c) s += pooled[c] * w1.data[static_cast<std::size_t>(c) * r + j];
    hidden[j] = std::max(0.0f, s);
  }
  for (int c = 0; c < ch; ++c) {
    float s = b2.data[c];
    for (int j = 0; j < r; ++j) s += hidden[j] * w2.data[static_cast<std::size_t>(j) * ch + c];
    ca[c] = sigmoid(s);
  }

  // Grouped fusion: output channel c sees (SA(m)_c, CA(m)_c); then + m.
  const Tensor& fw = W(ws, p + ".fuse.w");
  const Tensor& fb = W(ws, p + ".fuse.b");
  std::vector<float> u(static_cast<std::size_t>(ch) * hw), sa_c(hw), ca_c(hw);
  for (int c = 0; c < ch; ++c) {
    const float* mc = m + static_cast<std::size_t>(c) * hw;
    for (int i = 0; i < hw; ++i) {
      sa_c[i] = sa[i] * mc[i];
      ca_c[i] = ca[c] * mc[i];
    }
    const float* in[2] = {sa_c.data(), ca_c.data()};
    float* uc = u.data() + static_cast<std::size_t>(c) * hw;
    conv3_plane(in, 2, h, w, fw.ptr() + static_cast<std::size_t>(c) * 18, fb.data[c], uc);
    for (int i = 0; i < hw; ++i) uc[i] += mc[i];
  }

  // Joint spatial-channel gate C' x h x w (depthwise conv + sigmoid).
  const Tensor& gw = W(ws, p + ".sca.w");
  const Tensor& gb = W(ws, p + ".sca.b");
  std::vector<float> gate(hw);
  for (int c = 0; c < ch; ++c) {
    const float* uc = u.data() + static_cast<std::size_t>(c) * hw;
    const float* in[1] = {uc};
    conv3_plane(in, 1, h, w, gw.ptr() + static_cast<std::size_t>(c) * 9, gb.data[c], gate.data());
    float* mc = m + static_cast<std::size_t>(c) * hw;
    for (int i = 0; i < hw; ++i) mc[i] += sigmoid(gate[i]) * uc[i];
  }
}

}  // namespace

Tensor csa_mlp(const Tensor& z, const MapGeometry& geo, const WeightSet& ws, const std::string& p,
               const ModelConfig& cfg, CsaTrace* trace) {
  require(z.rank() == 3 && z.dim(2) == cfg.channels, ErrorKind::Shape, "CSA-MLP expects [windows, tokens, C]");
  require(z.dim(1) == geo.frames * geo.h * geo.w, ErrorKind::Shape,
          "CSA-MLP geometry does not match the token count");
  Tensor zbar = linear(layer_norm(z, W(ws, p + ".norm.g"), W(ws, p + ".norm.b")), W(ws, p + ".fc1.w"),
                       &W(ws, p + ".fc1.b"));
  gelu_inplace(zbar);
  if (cfg.csa_mlp) {
    const int hidden = zbar.dim(2), hw = geo.h * geo.w;
    const int maps = z.dim(0) * geo.frames;
    parallel_for(static_cast<std::size_t>(maps), [&](std::size_t mi) {
      float* tok = zbar.ptr() + mi * hw * hidden;  // hw tokens x hidden
      std::vector<float> map(static_cast<std::size_t>(hidden) * hw);
      for (int i = 0; i < hw; ++i)
        for (int c = 0; c < hidden; ++c) map[static_cast<std::size_t>(c) * hw + i] = tok[static_cast<std::size_t>(i) * hidden + c];
      gate_map(map.data(), hidden, geo.h, geo.w, ws, p, cfg.ca_reduction);
      for (int i = 0; i < hw; ++i)
        for (int c = 0; c < hidden; ++c) tok[static_cast<std::size_t>(i) * hidden + c] = map[static_cast<std::size_t>(c) * hw + i];
    });
    if (trace) {
      trace->sa_shape = {1, geo.h, geo.w};
      trace->ca_shape = {hidden, 1, 1};
      trace->sca_shape = {hidden, geo.h, geo.w};
      trace->maps = maps;
    }
  }
  Tensor out = linear(zbar, W(ws, p + ".fc2.w"), &W(ws, p + ".fc2.b"));
  add_inplace(out, z);
  return out;
}

namespace {

// tokens + proj(attention(LN(tokens))) with a fused qkv projection.
Tensor self_attention(const Tensor& x, const WeightSet& ws, const std::string& p, const ModelConfig& cfg,
                      const std::vector<int>& rel, AttentionTrace* trace) {
  const int c = cfg.channels;
  const Tensor qkv = linear(layer_norm(x, W(ws, p + ".norm1.g"), W(ws, p + ".norm1.b")), W(ws, p + ".attn.qkv.w"),
                            &W(ws, p + ".attn.qkv.b"));
  const int nw = x.dim(0), n = x.dim(1);
  Tensor q({nw, n, c}), k({nw, n, c}), v({nw, n, c});
  for (std::size_t r = 0; r < static_cast<std::size_t>(nw) * n; ++r) {
    const float* src = qkv.ptr() + r * 3 * c;
    std::copy_n(src, c, q.ptr() + r * c);
    std::copy_n(src + c, c, k.ptr() + r * c);
    std::copy_n(src + 2 * c, c, v.ptr() + r * c);
  }
  const Tensor a = multi_head_attention(q, k, v, cfg.heads, &W(ws, p + ".attn.rpb"), &rel, trace);
  Tensor out = linear(a, W(ws, p + ".attn.proj.w"), &W(ws, p + ".attn.proj.b"));
  add_inplace(out, x);
  return out;
}

void check_feature(const Tensor& x, const ModelConfig& cfg) {
  require(x.rank() == 3 && x.dim(0) == cfg.channels, ErrorKind::Shape,
          "expected a " + std::to_string(cfg.channels) + " x H x W feature, got " + x.shape_string());
}

}  // namespace

Tensor spatial_block(const Tensor& x, const WeightSet& ws, const std::string& p, const ModelConfig& cfg,
                     BlockTrace* trace) {
  check_feature(x, cfg);
  WindowGeometry g;
  const Tensor tokens = window_partition_2d(x, cfg.window, &g);
  const auto rel = relative_position_index(g, 1, cfg.window);
  Tensor h = self_attention(tokens, ws, p, cfg, rel, trace ? &trace->attention : nullptr);
  h = csa_mlp(h, {1, g.wh, g.ww}, ws, p + ".mlp", cfg, trace ? &trace->csa : nullptr);
  return window_reverse_2d(h, g);
}

std::pair<Tensor, Tensor> transmission_layer(const Tensor& current, const Tensor& propagated, const WeightSet& ws,
                                             const std::string& p, const ModelConfig& cfg, BlockTrace* trace) {
  check_feature(current, cfg);
  require(current.shape == propagated.shape, ErrorKind::Shape, "transmission layer inputs differ in shape");
  const int c = cfg.channels, h = current.dim(1), w = current.dim(2);
  Tensor pair({2, c, h, w});
  std::copy(current.data.begin(), current.data.end(), pair.data.begin());
  std::copy(propagated.data.begin(), propagated.data.end(), pair.data.begin() + static_cast<std::ptrdiff_t>(current.size()));
  const WindowGeometry g = window_geometry(2, h, w, cfg.temporal_window, cfg.window, cfg.window);
  const auto rel = relative_position_index(g, cfg.temporal_window, cfg.window);
  Tensor t = self_attention(window_partition(pair, g), ws, p, cfg, rel, trace ? &trace->attention : nullptr);
  t = csa_mlp(t, {g.wt, g.wh, g.ww}, ws, p + ".mlp", cfg, trace ? &trace->csa : nullptr);
  Tensor back = window_reverse(t, g, c);
  const std::size_t half = current.size();
  Tensor a({c, h, w}, std::vector<float>(back.data.begin(), back.data.begin() + static_cast<std::ptrdiff_t>(half)));
  Tensor b({c, h, w}, std::vector<float>(back.data.begin() + static_cast<std::ptrdiff_t>(half), back.data.end()));
  return {std::move(a), std::move(b)};
}

Tensor merging_layer(const Tensor& current, const Tensor& propagated, const WeightSet& ws, const std::string& p,
                     const ModelConfig& cfg, BlockTrace* trace) {
  check_feature(current, cfg);
  require(current.shape == propagated.shape, ErrorKind::Shape, "merging layer inputs differ in shape");
  const int c = cfg.channels;
  WindowGeometry g;
  const Tensor m = window_partition_2d(current, cfg.window, &g);
  const Tensor n = window_partition_2d(propagated, cfg.window);
  const Tensor q = linear(layer_norm(m, W(ws, p + ".norm_q.g"), W(ws, p + ".norm_q.b")), W(ws, p + ".attn.q.w"),
                          &W(ws, p + ".attn.q.b"));
  const Tensor kv = linear(layer_norm(n, W(ws, p + ".norm_kv.g"), W(ws, p + ".norm_kv.b")), W(ws, p + ".attn.kv.w"),
                           &W(ws, p + ".attn.kv.b"));
  Tensor k(q.shape), v(q.shape);
  for (std::size_t r = 0; r < static_cast<std::size_t>(q.dim(0)) * q.dim(1); ++r) {
    std::copy_n(kv.ptr() + r * 2 * c, c, k.ptr() + r * c);
    std::copy_n(kv.ptr() + r * 2 * c + c, c, v.ptr() + r * c);
  }
  const auto rel = relative_position_index(g, 1, cfg.window);
  const Tensor a = multi_head_attention(q, k, v, cfg.heads, &W(ws, p + ".attn.rpb"), &rel,
                                        trace ? &trace->attention : nullptr);
  Tensor mm = linear(a, W(ws, p + ".attn.proj.w"), &W(ws, p + ".attn.proj.b"));
  add_inplace(mm, m);
  mm = csa_mlp(mm, {1, g.wh, g.ww}, ws, p + ".mlp", cfg, trace ? &trace->csa : nullptr);
  return window_reverse_2d(mm, g);
}

}  // namespace rawvid::rvdt
