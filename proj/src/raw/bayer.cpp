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

#include "rawvid/raw/bayer.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"

namespace rawvid {

CfaPattern parse_cfa(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "GBRG") return CfaPattern::GBRG;
  if (up == "RGGB") return CfaPattern::RGGB;
  if (up == "GRBG") return CfaPattern::GRBG;
  if (up == "BGGR") return CfaPattern::BGGR;
  fail(ErrorKind::UnsupportedPattern, "unknown CFA pattern '" + std::string(text) + "'");
}

std::string to_string(CfaPattern cfa) {
  switch (cfa) {
    case CfaPattern::GBRG: return "GBRG";
    case CfaPattern::RGGB: return "RGGB";
    case CfaPattern::GRBG: return "GRBG";
    case CfaPattern::BGGR: return "BGGR";
  }
  return "?";
}

std::string to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::CameraRgb: return "cameraRGB";
    case ColorSpace::Xyz: return "XYZ";
    case ColorSpace::ProPhoto: return "ProPhoto";
    case ColorSpace::ProPhotoTonemapped: return "ProPhoto-tonemapped";
    case ColorSpace::SrgbLinear: return "sRGB-linear";
    case ColorSpace::SrgbEncoded: return "sRGB-encoded";
  }
  return "?";
}

namespace {

void require_gbrg(CfaPattern cfa) {
  require(cfa == CfaPattern::GBRG, ErrorKind::UnsupportedPattern,
          "only GBRG mosaics are supported, got " + to_string(cfa));
}

void require_even(int w, int h) {
  require(w > 0 && h > 0 && w % 2 == 0 && h % 2 == 0, ErrorKind::Shape,
          "mosaic dimensions must be positive and even, got " + std::to_string(w) + "x" +
              std::to_string(h));
}

// Mirror without edge repeat: -1 -> 1, n -> n-2. Keeps CFA parity.
inline int reflect(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

}  // namespace

void BayerFrame::validate() const {
  require_even(width, height);
  require(samples.size() == static_cast<std::size_t>(width) * height, ErrorKind::Shape,
          "sample count does not match dimensions");
  require(black_level < white_level, ErrorKind::Config,
          "black level " + std::to_string(black_level) + " must be below white level " +
              std::to_string(white_level));
}

Mosaic normalize(const BayerFrame& frame) {
  require(frame.black_level < frame.white_level, ErrorKind::Config,
          "degenerate levels: black " + std::to_string(frame.black_level) + " >= white " +
              std::to_string(frame.white_level));
  require(frame.samples.size() == static_cast<std::size_t>(frame.width) * frame.height,
          ErrorKind::Shape, "sample count does not match dimensions");
  Mosaic out{frame.width, frame.height, frame.cfa, std::vector<float>(frame.samples.size())};
  const double black = frame.black_level;
  const double range = static_cast<double>(frame.white_level) - black;
  for (std::size_t i = 0; i < frame.samples.size(); ++i) {
    const double v = (static_cast<double>(frame.samples[i]) - black) / range;
    out.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return out;
}

BayerFrame denormalize(const Mosaic& mosaic, std::uint16_t black_level, std::uint16_t white_level,
                       double iso) {
  require(black_level < white_level, ErrorKind::Config, "degenerate levels");
  BayerFrame f;
  f.width = mosaic.width;
  f.height = mosaic.height;
  f.cfa = mosaic.cfa;
  f.black_level = black_level;
  f.white_level = white_level;
  f.iso = iso;
  f.samples.resize(mosaic.data.size());
  const double range = static_cast<double>(white_level) - black_level;
  for (std::size_t i = 0; i < mosaic.data.size(); ++i) {
    const double v = std::clamp(static_cast<double>(mosaic.data[i]), 0.0, 1.0);
    f.samples[i] = static_cast<std::uint16_t>(std::lround(black_level + v * range));
  }
  return f;
}

PackedRaw pack_gbrg(const Mosaic& mosaic) {
  require_gbrg(mosaic.cfa);
  require_even(mosaic.width, mosaic.height);
  PackedRaw p;
  p.width = mosaic.width / 2;
  p.height = mosaic.height / 2;
  p.data.resize(static_cast<std::size_t>(PackedRaw::kPlanes) * p.width * p.height);
  auto g0 = p.plane(0), b = p.plane(1), r = p.plane(2), g1 = p.plane(3);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      const std::size_t o = static_cast<std::size_t>(y) * p.width + x;
      g0[o] = mosaic.at(2 * x, 2 * y);
      b[o] = mosaic.at(2 * x + 1, 2 * y);
      r[o] = mosaic.at(2 * x, 2 * y + 1);
      g1[o] = mosaic.at(2 * x + 1, 2 * y + 1);
    }
  }
  return p;
}

Mosaic unpack_gbrg(const PackedRaw& packed) {
  require(packed.width > 0 && packed.height > 0 &&
              packed.data.size() ==
                  static_cast<std::size_t>(PackedRaw::kPlanes) * packed.width * packed.height,
          ErrorKind::Shape, "packed planes do not match declared dimensions");
  Mosaic m{packed.width * 2, packed.height * 2, CfaPattern::GBRG,
           std::vector<float>(static_cast<std::size_t>(packed.width) * packed.height * 4)};
  auto g0 = packed.plane(0), b = packed.plane(1), r = packed.plane(2), g1 = packed.plane(3);
  for (int y = 0; y < packed.height; ++y) {
    for (int x = 0; x < packed.width; ++x) {
      const std::size_t o = static_cast<std::size_t>(y) * packed.width + x;
      m.at(2 * x, 2 * y) = g0[o];
      m.at(2 * x + 1, 2 * y) = b[o];
      m.at(2 * x, 2 * y + 1) = r[o];
      m.at(2 * x + 1, 2 * y + 1) = g1[o];
    }
  }
  return m;
}

RgbImage demosaic_bilinear(const Mosaic& mosaic) {
  require_gbrg(mosaic.cfa);
  require_even(mosaic.width, mosaic.height);
  const int w = mosaic.width, h = mosaic.height;
  RgbImage out(w, h, ColorSpace::CameraRgb);
  auto R = out.plane(0), G = out.plane(1), B = out.plane(2);
  auto px = [&](int x, int y) { return mosaic.at(reflect(x, w), reflect(y, h)); };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      const float c = mosaic.at(x, y);
      const float cross = 0.25f * (px(x - 1, y) + px(x + 1, y) + px(x, y - 1) + px(x, y + 1));
      const float diag =
          0.25f * (px(x - 1, y - 1) + px(x + 1, y - 1) + px(x - 1, y + 1) + px(x + 1, y + 1));
      const float horiz = 0.5f * (px(x - 1, y) + px(x + 1, y));
      const float vert = 0.5f * (px(x, y - 1) + px(x, y + 1));
      switch (gbrg_channel(x, y)) {
        case Channel::G:
          G[o] = c;
          if ((y & 1) == 0) {  // G on a G/B row: B left/right, R above/below
            B[o] = horiz;
            R[o] = vert;
          } else {  // G on an R/G row
            R[o] = horiz;
            B[o] = vert;
          }
          break;
        case Channel::B:
          B[o] = c;
          G[o] = cross;
          R[o] = diag;
          break;
        case Channel::R:
          R[o] = c;
          G[o] = cross;
          B[o] = diag;
          break;
      }
    }
  }
  return out;
}

std::array<double, 3> channel_means(const Mosaic& mosaic) {
  require_gbrg(mosaic.cfa);
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> count{};
  for (int y = 0; y < mosaic.height; ++y) {
    for (int x = 0; x < mosaic.width; ++x) {
      const int c = static_cast<int>(gbrg_channel(x, y));
      sum[c] += mosaic.at(x, y);
      ++count[c];
    }
  }
  for (int c = 0; c < 3; ++c) sum[c] = count[c] ? sum[c] / static_cast<double>(count[c]) : 0.0;
  return sum;
}

}  // namespace rawvid
