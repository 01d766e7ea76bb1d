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

#include <array>
#include <span>
#include <vector>

#include "rawvid/metrics/histogram.hpp"
#include "rawvid/noise/rng.hpp"
#include "rawvid/raw/bayer.hpp"

namespace rawvid {

// Poisson-Gaussian sensor noise at one ISO, in normalized signal units:
//   X = sigma_s^2 * Poisson(Y / sigma_s^2) + N(0, sigma_r^2), clamped to [0,1]
// so that E[X] = Y and Var[X] = sigma_s^2 Y + sigma_r^2 away from the clamps.
struct NoiseParams {
  double iso = 0.0;
  std::array<double, 3> sigma_r{};  // read noise std, indexed by Channel
  std::array<double, 3> sigma_s{};  // shot noise scale

  static NoiseParams uniform(double iso, double sigma_r, double sigma_s) {
    return {iso, {sigma_r, sigma_r, sigma_r}, {sigma_s, sigma_s, sigma_s}};
  }
  static NoiseParams zero() { return {}; }

  double read_std(Channel c) const { return sigma_r[static_cast<int>(c)]; }
  double shot_scale(Channel c) const { return sigma_s[static_cast<int>(c)]; }
  double variance(Channel c, double y) const {
    const double s = shot_scale(c), r = read_std(c);
    return s * s * y + r * r;
  }

  void validate() const;
  bool operator==(const NoiseParams&) const = default;
};

// Samples one plane of channel `channel`. Pixel i uses counters 8i..8i+7 of
// seed.with_channel(channel).
std::vector<float> sample_noisy(std::span<const float> clean, const NoiseParams& params,
                                Channel channel, const SeedSpec& seed);

// Samples a whole GBRG mosaic: each site uses the parameters and the noise
// stream of its CFA colour. seed.channel is ignored.
Mosaic sample_noisy(const Mosaic& clean, const NoiseParams& params, const SeedSpec& seed);

std::vector<float> noise_residual(std::span<const float> noisy, std::span<const float> clean);

// Per-pixel statistics of a flat field for one CFA colour.
struct FlatStack {
  Channel channel = Channel::G;
  std::vector<double> mean;
  std::vector<double> variance;
};

// Least squares of var = slope * mean + intercept.
struct MeanVarianceFit {
  double slope = 0.0;      // sigma_s^2
  double intercept = 0.0;  // sigma_r^2, floored at 0
};

MeanVarianceFit fit_mean_variance(std::span<const double> mean, std::span<const double> variance);

// Fits each of R, G, B independently. Every channel needs samples at two or
// more distinct mean levels.
NoiseParams estimate_params(std::span<const FlatStack> stacks, double iso = 0.0);

// Per-site mean and (unbiased) variance across a stack of registered frames,
// split by CFA colour.
std::vector<FlatStack> flat_stacks_from_frames(std::span<const Mosaic> frames);

// Bin probabilities of the residual X - Y for a flat clean level Y, including
// the point masses created by clamping X to [0,1].
Histogram model_residual_histogram(double clean_level, double sigma_s, double sigma_r,
                                   const Histogram& binning);

}  // namespace rawvid
