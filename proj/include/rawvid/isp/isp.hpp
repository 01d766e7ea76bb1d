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
#include <optional>

#include "rawvid/isp/color.hpp"
#include "rawvid/isp/isp_config.hpp"
#include "rawvid/noise/noise_model.hpp"
#include "rawvid/raw/bayer.hpp"

namespace rawvid {

struct WhiteBalance {
  std::array<double, 3> gains{1.0, 1.0, 1.0};
  std::array<double, 3> neutral{1.0, 1.0, 1.0};  // per-channel camera means
};

// Gray-world: g_c = mean(G) / mean(c).
WhiteBalance auto_white_balance(const RgbImage& img);
WhiteBalance gray_world(const std::array<double, 3>& channel_means);

// CCT (kelvin) of a neutral given in XYZ.
double estimate_cct(const std::array<double, 3>& neutral_xyz);

// Weight of ccm_low when interpolating in mired space, clamped to [0,1].
double mired_weight(const IspConfig& cfg, double cct);
ColorMatrix interpolate_ccm(const IspConfig& cfg, double cct);
// Temperature whose reciprocal is the mean of the two reciprocals.
double mired_midpoint(const IspConfig& cfg);

RgbImage camera_to_xyz(RgbImage img, const ColorMatrix& ccm);
RgbImage xyz_to_prophoto(RgbImage img);
RgbImage prophoto_to_xyz(RgbImage img);
RgbImage prophoto_to_srgb_linear(RgbImage img);

enum class NegativePolicy { Reject, ClampToZero };

double tonemap_value(double x, TonemapCurve curve);
RgbImage tonemap(RgbImage img, TonemapCurve curve, NegativePolicy negatives = NegativePolicy::Reject);
RgbImage srgb_gamma_encode(RgbImage img);
// Round half away from zero of v * 255.
Rgb8Image quantize(const RgbImage& img);

// Per-clip quantities the ISP derives from the data itself.
struct ResolvedIsp {
  WhiteBalance wb;
  double cct = 0.0;
  ColorMatrix ccm;
};

// Estimates white balance (unless fixed in cfg), the scene CCT and the
// interpolated matrix from a normalized mosaic.
ResolvedIsp resolve_isp(const Mosaic& mosaic, const IspConfig& cfg);

// White balance -> demosaic -> camera->XYZ -> ProPhoto -> tonemap -> sRGB
// linear -> gamma. Returns the encoded float image before quantization.
RgbImage render_encoded(const Mosaic& mosaic, const IspConfig& cfg, const ResolvedIsp& state);
Rgb8Image render_mosaic(const Mosaic& mosaic, const IspConfig& cfg, const ResolvedIsp& state);

// Full pipeline from a RAW frame. When noise is given it is injected after
// normalization with the given seed; the ISP state is resolved on the
// (possibly noisy) mosaic.
Rgb8Image render(const BayerFrame& raw, const std::optional<NoiseParams>& noise, const IspConfig& cfg,
                 const SeedSpec& seed);

}  // namespace rawvid
