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

#include "rawvid/isp/color.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"

namespace rawvid {

std::array<double, 3> ColorMatrix::apply(const std::array<double, 3>& v) const {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

ColorMatrix ColorMatrix::operator*(const ColorMatrix& o) const {
  ColorMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

double ColorMatrix::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

ColorMatrix ColorMatrix::inverse() const {
  const double d = determinant();
  require(std::abs(d) > 1e-6, ErrorKind::Parameter, "colour matrix is singular");
  ColorMatrix r;
  r.m = {(m[4] * m[8] - m[5] * m[7]) / d, (m[2] * m[7] - m[1] * m[8]) / d, (m[1] * m[5] - m[2] * m[4]) / d,
         (m[5] * m[6] - m[3] * m[8]) / d, (m[0] * m[8] - m[2] * m[6]) / d, (m[2] * m[3] - m[0] * m[5]) / d,
         (m[3] * m[7] - m[4] * m[6]) / d, (m[1] * m[6] - m[0] * m[7]) / d, (m[0] * m[4] - m[1] * m[3]) / d};
  return r;
}

bool ColorMatrix::finite() const {
  return std::all_of(m.begin(), m.end(), [](double v) { return std::isfinite(v); });
}

std::array<float, 9> ColorMatrix::as_float() const {
  std::array<float, 9> f{};
  for (int i = 0; i < 9; ++i) f[i] = static_cast<float>(m[i]);
  return f;
}

namespace color {

ColorMatrix prophoto_to_xyz() {
  return {{0.7976749, 0.1351917, 0.0313534,  //
           0.2880402, 0.7118741, 0.0000857,  //
           0.0000000, 0.0000000, 0.8252100}};
}

ColorMatrix xyz_to_prophoto() {
  static const ColorMatrix inv = prophoto_to_xyz().inverse();
  return inv;
}

ColorMatrix srgb_to_xyz() {
  return {{0.4124564, 0.3575761, 0.1804375,  //
           0.2126729, 0.7151522, 0.0721750,  //
           0.0193339, 0.1191920, 0.9503041}};
}

ColorMatrix xyz_to_srgb() {
  static const ColorMatrix inv = srgb_to_xyz().inverse();
  return inv;
}

ColorMatrix bradford(const std::array<double, 3>& src_white, const std::array<double, 3>& dst_white) {
  const ColorMatrix ma{{0.8951, 0.2664, -0.1614, -0.7502, 1.7135, 0.0367, 0.0389, -0.0685, 1.0296}};
  const auto s = ma.apply(src_white);
  const auto d = ma.apply(dst_white);
  return ma.inverse() * ColorMatrix::diagonal(d[0] / s[0], d[1] / s[1], d[2] / s[2]) * ma;
}

ColorMatrix prophoto_to_srgb() {
  static const ColorMatrix m = xyz_to_srgb() * bradford(kD50, kD65) * prophoto_to_xyz();
  return m;
}

std::array<double, 2> xy_from_xyz(const std::array<double, 3>& xyz) {
  const double s = xyz[0] + xyz[1] + xyz[2];
  require(s > 0.0 && xyz[1] > 0.0, ErrorKind::OutOfGamut, "neutral has non-positive luminance");
  return {xyz[0] / s, xyz[1] / s};
}

double mccamy_cct(double x, double y) {
  require(std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0 && x + y < 1.0,
          ErrorKind::OutOfGamut, "chromaticity is not physical");
  require(y > 0.1858 + 1e-6, ErrorKind::OutOfGamut,
          "chromaticity lies outside the approximation domain");
  const double n = (x - 0.3320) / (0.1858 - y);
  const double cct = ((449.0 * n + 3525.0) * n + 6823.3) * n + 5520.33;
  require(std::isfinite(cct) && cct > 0.0, ErrorKind::OutOfGamut,
          "chromaticity lies outside the approximation domain");
  return std::clamp(cct, kMinCct, kMaxCct);
}

double srgb_encode(double v) {
  if (v <= 0.0031308) return 12.92 * v;
  return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double v) {
  if (v <= 0.04045) return v / 12.92;
  return std::pow((v + 0.055) / 1.055, 2.4);
}

}  // namespace color
}  // namespace rawvid
