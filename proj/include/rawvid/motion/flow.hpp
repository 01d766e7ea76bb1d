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

#include "rawvid/raw/bayer.hpp"

namespace rawvid {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Rec.709 luma of an 8-bit RGB image, scaled to [0,1].
GrayImage to_gray(const Rgb8Image& img);
GrayImage to_gray(const RgbImage& img);

struct FlowConfig {
  int levels = 4;
  double scale = 0.5;
  int window = 15;
  int iterations = 3;
  int poly_n = 5;
  double poly_sigma = 1.1;
  bool gaussian_window = false;  // box averaging of the normal equations otherwise
  // Tikhonov term of the 2x2 solve, relative to the squared trace of the
  // averaged structure tensor; keeps edges and flat areas well posed.
  double regularization = 1e-3;
};

// Per-pixel displacement such that f1(p + flow(p)) ~ f0(p), pixels/frame.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<float> u;
  std::vector<float> v;
};

// Two-frame polynomial-expansion flow, coarse to fine.
FlowField dense_flow(const GrayImage& f0, const GrayImage& f1, const FlowConfig& cfg = {});

// Quadratic model f(p + x) ~ x^T A x + b^T x + c fitted with a Gaussian
// applicability over a (2n+1)^2 neighbourhood. Exposed for tests.
struct PolyExpansion {
  int width = 0;
  int height = 0;
  std::vector<float> a11, a12, a22, b1, b2;
};
PolyExpansion polynomial_expansion(const GrayImage& img, int n, double sigma);

}  // namespace rawvid
