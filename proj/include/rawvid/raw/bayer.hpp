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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rawvid {

enum class Channel : int { R = 0, G = 1, B = 2 };

// 2x2 tile order, read row-major. Only GBRG is first-class; the other tags
// exist so foreign metadata can be parsed and rejected explicitly.
enum class CfaPattern { GBRG, RGGB, GRBG, BGGR };

CfaPattern parse_cfa(std::string_view text);
std::string to_string(CfaPattern cfa);

// Colour sampled at mosaic site (x, y) for a GBRG tile.
inline Channel gbrg_channel(int x, int y) {
  if ((y & 1) == 0) return (x & 1) == 0 ? Channel::G : Channel::B;
  return (x & 1) == 0 ? Channel::R : Channel::G;
}

struct BayerFrame {
  int width = 0;
  int height = 0;
  CfaPattern cfa = CfaPattern::GBRG;
  std::vector<std::uint16_t> samples;  // row-major
  std::uint16_t black_level = 0;
  std::uint16_t white_level = 65535;
  double iso = 100.0;

  // Throws Shape / Config errors when the invariants do not hold.
  void validate() const;
};

// Normalized single-channel CFA mosaic, values in [0,1].
struct Mosaic {
  int width = 0;
  int height = 0;
  CfaPattern cfa = CfaPattern::GBRG;
  std::vector<float> data;

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Half-resolution four-plane packing of a GBRG mosaic.
// Plane order: 0 = G (even row), 1 = B, 2 = R, 3 = G (odd row).
struct PackedRaw {
  static constexpr int kPlanes = 4;
  int width = 0;   // mosaic width / 2
  int height = 0;  // mosaic height / 2
  std::vector<float> data;  // planar, kPlanes * height * width

  std::span<float> plane(int p) {
    return {data.data() + static_cast<std::size_t>(p) * width * height,
            static_cast<std::size_t>(width) * height};
  }
  std::span<const float> plane(int p) const {
    return {data.data() + static_cast<std::size_t>(p) * width * height,
            static_cast<std::size_t>(width) * height};
  }
};

enum class ColorSpace { CameraRgb, Xyz, ProPhoto, ProPhotoTonemapped, SrgbLinear, SrgbEncoded };

std::string to_string(ColorSpace space);

// Planar three-channel float image.
struct RgbImage {
  int width = 0;
  int height = 0;
  ColorSpace space = ColorSpace::CameraRgb;
  std::vector<float> data;  // planar: R plane, G plane, B plane

  RgbImage() = default;
  RgbImage(int w, int h, ColorSpace s)
      : width(w), height(h), space(s), data(static_cast<std::size_t>(w) * h * 3, 0.0f) {}

  std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
  std::span<float> plane(int c) { return {data.data() + c * pixels(), pixels()}; }
  std::span<const float> plane(int c) const { return {data.data() + c * pixels(), pixels()}; }
};

// 8-bit interleaved RGB, the final output of the ISP.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // interleaved RGB
};

Mosaic normalize(const BayerFrame& frame);

// Inverse of normalize up to quantization: rounds to the nearest sensor count.
BayerFrame denormalize(const Mosaic& mosaic, std::uint16_t black_level, std::uint16_t white_level,
                       double iso);

PackedRaw pack_gbrg(const Mosaic& mosaic);
Mosaic unpack_gbrg(const PackedRaw& packed);

// Bilinear demosaic with 1-pixel reflect padding. Native samples are passed
// through unchanged.
RgbImage demosaic_bilinear(const Mosaic& mosaic);

// Per-CFA-channel means of a mosaic (R, G, B).
std::array<double, 3> channel_means(const Mosaic& mosaic);

}  // namespace rawvid
