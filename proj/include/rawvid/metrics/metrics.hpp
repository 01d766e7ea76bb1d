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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rawvid/metrics/histogram.hpp"

namespace rawvid {

// Planar float image; channels are stored one after another.
struct ImageView {
  std::span<const float> data;
  int width = 0;
  int height = 0;
  int channels = 1;

  std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
  std::span<const float> plane(int c) const { return data.subspan(c * plane_size(), plane_size()); }
};

// Sentinel for PSNR/SNR of identical inputs.
inline constexpr double kInfiniteDb = std::numeric_limits<double>::infinity();
inline bool is_infinite_db(double v) { return std::isinf(v) && v > 0; }

double psnr(std::span<const float> a, std::span<const float> b, double peak = 1.0);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double peak = 1.0;
};

// Mean local SSIM over valid (fully inside) Gaussian windows, averaged over
// channels.
double ssim(const ImageView& a, const ImageView& b, const SsimParams& params = {});

// 10 log10(mean(signal^2) / mean((noisy - signal)^2)).
double snr(std::span<const float> signal, std::span<const float> noisy);

// Per-pixel mean of the first n frames.
std::vector<float> temporal_average(std::span<const std::vector<float>> frames, std::size_t n);

inline constexpr double kKlFloor = 1e-10;

// sum p_i ln(p_i / max(q_i, eps)) over normalized counts, 0 ln 0 = 0.
double kl_divergence(const Histogram& p, const Histogram& q);

enum class KlMode { Pooled, PerPixel };

// KL between the distributions of two residual sets. Pooled compares one
// histogram of all values per set; PerPixel builds a histogram per pixel
// across frames and averages the per-pixel divergences. Each inner vector is
// one frame's residual.
double residual_kl(std::span<const std::vector<float>> reference, std::span<const std::vector<float>> candidate,
                   const Histogram& binning, KlMode mode = KlMode::Pooled);

// Residual binning used throughout: 256 bins over [-1, 1].
Histogram default_residual_binning();

struct FrameMetrics {
  double psnr = 0.0;
  double ssim = 0.0;
};

// Per-frame values plus clip means. Frames with infinite PSNR are left out of
// the PSNR mean and counted in excluded_infinite.
class MetricReport {
 public:
  void add(const FrameMetrics& m) { frames_.push_back(m); }
  const std::vector<FrameMetrics>& frames() const { return frames_; }
  double mean_psnr() const;
  double mean_ssim() const;
  std::size_t excluded_infinite() const;

 private:
  std::vector<FrameMetrics> frames_;
};

}  // namespace rawvid
