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

#include <vector>

#include "rawvid/rvdt/tensor.hpp"

namespace rawvid::rvdt {

// Window tiling of a T x C x H x W tensor. Extents are reflect-padded up to a
// multiple of the window; windows larger than an extent shrink to it.
struct WindowGeometry {
  int frames = 1, height = 0, width = 0;     // source extents
  int wt = 1, wh = 1, ww = 1;                // effective window
  int padded_h = 0, padded_w = 0;

  int windows() const { return (frames / wt) * (padded_h / wh) * (padded_w / ww); }
  int tokens() const { return wt * wh * ww; }
};

WindowGeometry window_geometry(int frames, int height, int width, int wt, int wh, int ww);

// [T, C, H, W] -> [windows, tokens, C]; windows ordered (t, y, x), tokens
// within a window ordered (dt, dy, dx).
Tensor window_partition(const Tensor& x, const WindowGeometry& g);
// Exact inverse of window_partition, cropping any padding.
Tensor window_reverse(const Tensor& tokens, const WindowGeometry& g, int channels);

// 2-D conveniences on C x H x W maps.
Tensor window_partition_2d(const Tensor& x, int window, WindowGeometry* geometry = nullptr);
Tensor window_reverse_2d(const Tensor& tokens, const WindowGeometry& g);

// Row of a (2t-1)(2w-1)(2w-1) bias table for each query/key token pair of
// the given effective window, against a table built for window `table_w`
// and `table_t` frames.
std::vector<int> relative_position_index(const WindowGeometry& g, int table_t, int table_w);

struct AttentionTrace {
  int windows = 0, heads = 0, queries = 0, keys = 0;
  std::vector<float> probs;  // [windows][heads][queries][keys]

  float prob(int win, int head, int q, int k) const {
    return probs[((static_cast<std::size_t>(win) * heads + head) * queries + q) * keys + k];
  }
};

// Single head: softmax(Q K^T / sqrt(d) + B) V. q [N, d], k [M, d], v [M, dv],
// bias [N, M] or null. probs, when given, receives the N x M softmax.
Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v, const Tensor* bias,
                            std::vector<float>* probs = nullptr);

// Per-window multi-head attention on already projected tokens: q [W, N, C],
// k and v [W, M, C]. rpb is a [entries, heads] table indexed by rel_index
// (N*M entries), or null.
Tensor multi_head_attention(const Tensor& q, const Tensor& k, const Tensor& v, int heads, const Tensor* rpb,
                            const std::vector<int>* rel_index, AttentionTrace* trace = nullptr);

}  // namespace rawvid::rvdt
