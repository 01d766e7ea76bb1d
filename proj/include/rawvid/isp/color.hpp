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

namespace rawvid {

// Row-major 3x3 matrix in double precision.
struct ColorMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static ColorMatrix identity() { return {}; }
  static ColorMatrix diagonal(double a, double b, double c) { return {{a, 0, 0, 0, b, 0, 0, 0, c}}; }

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }

  std::array<double, 3> apply(const std::array<double, 3>& v) const;
  ColorMatrix operator*(const ColorMatrix& o) const;
  double determinant() const;
  // Throws a Parameter error when |det| <= 1e-6.
  ColorMatrix inverse() const;
  bool finite() const;
  std::array<float, 9> as_float() const;

  bool operator==(const ColorMatrix&) const = default;
};

namespace color {

// CIE xy and XYZ (Y = 1) of the reference whites.
inline constexpr std::array<double, 3> kD50{0.96422, 1.0, 0.82521};
inline constexpr std::array<double, 3> kD65{0.95047, 1.0, 1.08883};

// ProPhoto (ROMM) RGB -> XYZ, D50 white.
ColorMatrix prophoto_to_xyz();
ColorMatrix xyz_to_prophoto();
// Linear sRGB -> XYZ, D65 white.
ColorMatrix srgb_to_xyz();
ColorMatrix xyz_to_srgb();
// Bradford chromatic adaptation between two XYZ whites.
ColorMatrix bradford(const std::array<double, 3>& src_white, const std::array<double, 3>& dst_white);
// ProPhoto (D50) -> linear sRGB (D65), adaptation included.
ColorMatrix prophoto_to_srgb();

std::array<double, 2> xy_from_xyz(const std::array<double, 3>& xyz);

// McCamy's cubic in xy: n = (x - 0.3320)/(0.1858 - y),
// CCT = 449 n^3 + 3525 n^2 + 6823.3 n + 5520.33, clamped to [kMinCct, kMaxCct].
// Throws OutOfGamut when y is at or below the epicentre's y or the
// chromaticity is not physical.
double mccamy_cct(double x, double y);

inline constexpr double kMinCct = 1667.0;
inline constexpr double kMaxCct = 25000.0;

// sRGB transfer function.
double srgb_encode(double linear);
double srgb_decode(double encoded);

}  // namespace color
}  // namespace rawvid
