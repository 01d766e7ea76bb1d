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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rawvid/isp/color.hpp"

namespace rawvid {

enum class TonemapCurve { AcesFit, Reinhard, None };

TonemapCurve parse_tonemap(const std::string& name);
std::string to_string(TonemapCurve curve);

// A factory matrix mapping white-balanced cameraRGB to XYZ (D50), calibrated
// under an illuminant of the given temperature.
struct CalibratedMatrix {
  double temperature = 0.0;  // kelvin
  ColorMatrix matrix;

  bool operator==(const CalibratedMatrix&) const = default;
};

struct IspConfig {
  // nullopt selects gray-world estimation.
  std::optional<std::array<double, 3>> wb_gains;
  CalibratedMatrix ccm_low;
  CalibratedMatrix ccm_high;
  TonemapCurve tonemap = TonemapCurve::AcesFit;
  // Stage toggles for ablations. Disabling the colour temperature module
  // uses the mired-midpoint matrix; disabling the tonemapper clamps.
  bool color_temp_module = true;
  bool tonemap_stage = true;

  void validate() const;

  static IspConfig defaults();
  static IspConfig parse(const std::string& text);
  static IspConfig load(const std::filesystem::path& path);
  std::string serialize() const;
  // FNV-1a of the serialized form.
  std::uint64_t digest() const;

  bool operator==(const IspConfig&) const = default;
};

// Stage names accepted by disable_stage().
inline constexpr const char* kStageColorTemp = "color_temp";
inline constexpr const char* kStageTonemap = "tonemap";
void disable_stage(IspConfig& cfg, const std::string& stage);

const std::vector<std::string>& render_stage_order();

}  // namespace rawvid
