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

#include <filesystem>
#include <string>

namespace rawvid::rvdt {

struct ModelConfig {
  int image_channels = 3;  // 3 for sRGB frames, 4 for packed RAW
  int channels = 48;       // feature width at 1/4 resolution
  int temporal_layers = 4;  // per direction: temporal_layers - 1 transmission + 1 merging
  int window = 8;           // spatial window side
  int temporal_window = 2;  // frames per 3-D window in transmission layers
  int heads = 4;
  double mlp_ratio = 2.0;
  int spatial_blocks = 14;
  int unet_channels = 128;
  bool blind = true;  // non-blind adds one noise-level channel per frame
  bool csa_mlp = true;  // false selects the plain two-layer MLP
  bool tie_directions = false;  // share forward/backward temporal and decoder weights
  int ca_reduction = 4;
  bool shifted_windows = false;  // reserved, must stay false

  int input_channels() const { return image_channels + (blind ? 0 : 1); }
  int hidden() const;  // MLP width
  int head_dim() const { return channels / heads; }

  void validate() const;
  std::string serialize() const;
  static ModelConfig parse(const std::string& text);
  static ModelConfig load(const std::filesystem::path& path);
  bool operator==(const ModelConfig&) const = default;
};

}  // namespace rawvid::rvdt
