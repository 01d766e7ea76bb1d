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

#include <cmath>

#include "rawvid/rvdt/tensor.hpp"

// Feature maps are C x H x W. Token tensors end in the channel axis.
namespace rawvid::rvdt {

// Dense 2-D convolution, zero padding, weight [Cout, Cin, k, k], bias [Cout]
// or null.
Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor* bias, int stride = 1, int pad = -1);
// Grouped convolution, weight [Cout, Cin/groups, k, k]; groups == Cin is
// depthwise.
Tensor conv2d_grouped(const Tensor& x, const Tensor& w, const Tensor* bias, int groups);

// y = x W + b over the last axis; W is [in, out].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor* bias);
// Normalizes the last axis to zero mean and unit variance, then g * x + b.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps = 1e-5f);

void add_inplace(Tensor& a, const Tensor& b);
void leaky_relu_inplace(Tensor& x, float slope = 0.2f);
float gelu(float x);
void gelu_inplace(Tensor& x);
inline float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

// [r^2 C, H, W] -> [C, rH, rW] with out[c, rh+i, rw+j] = in[c r^2 + i r + j, h, w].
Tensor pixel_shuffle(const Tensor& x, int r);
Tensor upsample_nearest2(const Tensor& x);
Tensor concat_channels(const Tensor& a, const Tensor& b);

// Reflect padding on the bottom/right of the last two axes (any leading
// axes); pads may exceed the extent, indices fold back and forth.
Tensor reflect_pad_end(const Tensor& x, int pad_h, int pad_w);
// Keeps the top-left h x w of the last two axes.
Tensor crop_end(const Tensor& x, int h, int w);

}  // namespace rawvid::rvdt
