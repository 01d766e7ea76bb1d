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

#include "rawvid/isp/isp.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/simd/kernels.hpp"

namespace rawvid {

namespace {

void require_space(const RgbImage& img, ColorSpace expected, const char* op) {
  require(img.space == expected, ErrorKind::SpaceMismatch,
          std::string(op) + " expects " + to_string(expected) + " input, got " + to_string(img.space));
}

void apply_matrix(RgbImage& img, const ColorMatrix& m) {
  const auto f = m.as_float();
  simd::color_matrix(img.pixels(), f.data(), img.plane(0).data(), img.plane(1).data(), img.plane(2).data());
}

}  // namespace

WhiteBalance gray_world(const std::array<double, 3>& means) {
  for (double m : means)
    require(std::isfinite(m) && m > 0.0, ErrorKind::DegenerateImage,
            "gray-world needs strictly positive channel means");
  WhiteBalance wb;
  wb.neutral = means;
  for (int c = 0; c < 3; ++c) wb.gains[c] = means[1] / means[c];
  return wb;
}

WhiteBalance auto_white_balance(const RgbImage& img) {
  require_space(img, ColorSpace::CameraRgb, "auto_white_balance");
  require(img.pixels() > 0, ErrorKind::DegenerateImage, "empty image");
  std::array<double, 3> means{};
  for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (float v : img.plane(c)) s += v;
    means[c] = s / static_cast<double>(img.pixels());
  }
  return gray_world(means);
}

double estimate_cct(const std::array<double, 3>& neutral_xyz) {
  require(neutral_xyz[1] > 0.0, ErrorKind::OutOfGamut, "neutral must have positive luminance");
  const auto xy = color::xy_from_xyz(neutral_xyz);
  return color::mccamy_cct(xy[0], xy[1]);
}

double mired_weight(const IspConfig& cfg, double cct) {
  require(cct > 0.0, ErrorKind::Parameter, "temperature must be positive");
  const double lo = 1.0 / cfg.ccm_low.temperature;
  const double hi = 1.0 / cfg.ccm_high.temperature;
  return std::clamp((1.0 / cct - hi) / (lo - hi), 0.0, 1.0);
}

ColorMatrix interpolate_ccm(const IspConfig& cfg, double cct) {
  cfg.validate();
  const double w = mired_weight(cfg, cct);
  if (w == 1.0) return cfg.ccm_low.matrix;
  if (w == 0.0) return cfg.ccm_high.matrix;
  ColorMatrix out;
  for (int i = 0; i < 9; ++i) out.m[i] = w * cfg.ccm_low.matrix.m[i] + (1.0 - w) * cfg.ccm_high.matrix.m[i];
  return out;
}

double mired_midpoint(const IspConfig& cfg) {
  return 2.0 / (1.0 / cfg.ccm_low.temperature + 1.0 / cfg.ccm_high.temperature);
}

RgbImage camera_to_xyz(RgbImage img, const ColorMatrix& ccm) {
  require_space(img, ColorSpace::CameraRgb, "camera_to_xyz");
  apply_matrix(img, ccm);
  img.space = ColorSpace::Xyz;
  return img;
}

RgbImage xyz_to_prophoto(RgbImage img) {
  require_space(img, ColorSpace::Xyz, "xyz_to_prophoto");
  apply_matrix(img, color::xyz_to_prophoto());
  img.space = ColorSpace::ProPhoto;
  return img;
}

RgbImage prophoto_to_xyz(RgbImage img) {
  require_space(img, ColorSpace::ProPhoto, "prophoto_to_xyz");
  apply_matrix(img, color::prophoto_to_xyz());
  img.space = ColorSpace::Xyz;
  return img;
}

RgbImage prophoto_to_srgb_linear(RgbImage img) {
  require(img.space == ColorSpace::ProPhoto || img.space == ColorSpace::ProPhotoTonemapped,
          ErrorKind::SpaceMismatch, "prophoto_to_srgb_linear expects ProPhoto input, got " + to_string(img.space));
  apply_matrix(img, color::prophoto_to_srgb());
  img.space = ColorSpace::SrgbLinear;
  return img;
}

double tonemap_value(double x, TonemapCurve curve) {
  switch (curve) {
    case TonemapCurve::AcesFit:
      return std::clamp((x * (2.51 * x + 0.03)) / (x * (2.43 * x + 0.59) + 0.14), 0.0, 1.0);
    case TonemapCurve::Reinhard:
      return std::clamp(x / (1.0 + x), 0.0, 1.0);
    case TonemapCurve::None:
      return std::clamp(x, 0.0, 1.0);
  }
  return x;
}

RgbImage tonemap(RgbImage img, TonemapCurve curve, NegativePolicy negatives) {
  require_space(img, ColorSpace::ProPhoto, "tonemap");
  for (float& v : img.data) {
    if (v < 0.0f || std::isnan(v)) {
      require(negatives == NegativePolicy::ClampToZero && !std::isnan(v), ErrorKind::Domain,
              "tonemap input must be non-negative");
      v = 0.0f;
    }
  }
  switch (curve) {
    case TonemapCurve::AcesFit:
      simd::aces_fit(img.data.size(), img.data.data());
      break;
    case TonemapCurve::Reinhard:
      for (float& v : img.data) v = std::min(1.0f, v / (1.0f + v));
      break;
    case TonemapCurve::None:
      for (float& v : img.data) v = std::min(1.0f, v);
      break;
  }
  img.space = ColorSpace::ProPhotoTonemapped;
  return img;
}

RgbImage srgb_gamma_encode(RgbImage img) {
  require_space(img, ColorSpace::SrgbLinear, "srgb_gamma_encode");
  for (float& v : img.data)
    v = static_cast<float>(color::srgb_encode(std::clamp(static_cast<double>(v), 0.0, 1.0)));
  img.space = ColorSpace::SrgbEncoded;
  return img;
}

Rgb8Image quantize(const RgbImage& img) {
  Rgb8Image out{img.width, img.height, std::vector<std::uint8_t>(img.pixels() * 3)};
  for (int c = 0; c < 3; ++c) {
    auto p = img.plane(c);
    for (std::size_t i = 0; i < img.pixels(); ++i) {
      const double v = std::clamp(static_cast<double>(p[i]), 0.0, 1.0) * 255.0;
      out.data[i * 3 + c] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return out;
}

ResolvedIsp resolve_isp(const Mosaic& mosaic, const IspConfig& cfg) {
  cfg.validate();
  const auto means = channel_means(mosaic);
  ResolvedIsp state;
  if (cfg.wb_gains) {
    state.wb.gains = *cfg.wb_gains;
    state.wb.neutral = means;
  } else {
    state.wb = gray_world(means);
  }
  if (!cfg.color_temp_module) {
    state.cct = mired_midpoint(cfg);
    state.ccm = interpolate_ccm(cfg, state.cct);
    return state;
  }
  // The neutral's chromaticity depends on the matrix, which depends on the
  // temperature: iterate to a fixed point starting from the midpoint.
  double cct = mired_midpoint(cfg);
  for (int iter = 0; iter < 32; ++iter) {
    const ColorMatrix m = interpolate_ccm(cfg, cct);
    const double next = estimate_cct(m.apply(state.wb.neutral));
    const bool done = std::abs(next - cct) < 0.01;
    cct = next;
    if (done) break;
  }
  state.cct = cct;
  state.ccm = interpolate_ccm(cfg, cct);
  return state;
}

RgbImage render_encoded(const Mosaic& mosaic, const IspConfig& cfg, const ResolvedIsp& state) {
  Mosaic balanced = mosaic;
  for (int y = 0; y < balanced.height; ++y)
    for (int x = 0; x < balanced.width; ++x)
      balanced.at(x, y) = static_cast<float>(balanced.at(x, y) * state.wb.gains[static_cast<int>(gbrg_channel(x, y))]);

  RgbImage img = demosaic_bilinear(balanced);
  img = camera_to_xyz(std::move(img), state.ccm);
  img = xyz_to_prophoto(std::move(img));
  const TonemapCurve curve = cfg.tonemap_stage ? cfg.tonemap : TonemapCurve::None;
  img = tonemap(std::move(img), curve, NegativePolicy::ClampToZero);
  img = prophoto_to_srgb_linear(std::move(img));
  return srgb_gamma_encode(std::move(img));
}

Rgb8Image render_mosaic(const Mosaic& mosaic, const IspConfig& cfg, const ResolvedIsp& state) {
  return quantize(render_encoded(mosaic, cfg, state));
}

Rgb8Image render(const BayerFrame& raw, const std::optional<NoiseParams>& noise, const IspConfig& cfg,
                 const SeedSpec& seed) {
  cfg.validate();
  Mosaic m = normalize(raw);
  if (noise) m = sample_noisy(m, *noise, seed);
  return render_mosaic(m, cfg, resolve_isp(m, cfg));
}

}  // namespace rawvid
