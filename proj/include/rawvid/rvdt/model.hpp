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

#include <vector>

#include "rawvid/rvdt/blocks.hpp"

namespace rawvid::rvdt {

enum class Direction { Forward, Backward };

// Shallow two-scale UNet then two stride-2 convolutions: [Cx, H, W] ->
// [C, H/4, W/4]. H and W must be multiples of 4.
Tensor encode_spatial(const Tensor& frame, const ModelConfig& cfg, const WeightSet& ws);

Tensor spatial_blocks(const Tensor& feature, const ModelConfig& cfg, const WeightSet& ws);

// Recurrent temporal blocks of one direction. The state entering the first
// step (frame 1 forward, frame T backward) is zero.
std::vector<Tensor> temporal_pass(const std::vector<Tensor>& features, Direction dir, const ModelConfig& cfg,
                                  const WeightSet& ws);

// [C, h, w] x 2 -> [image_channels, 4h, 4w].
Tensor decode(const Tensor& forward, const Tensor& backward, const ModelConfig& cfg, const WeightSet& ws);

// Frames are [image_channels, H, W]. Non-blind models take one noise-level
// map per frame, either [1, 1, 1] (broadcast) or [1, H, W]. Frames are
// reflect-padded to a multiple of 4 and outputs cropped back.
std::vector<Tensor> denoise_clip(const std::vector<Tensor>& frames, const ModelConfig& cfg, const WeightSet& ws,
                                 const std::vector<Tensor>* noise_levels = nullptr);

// Weight-name prefix of a temporal direction.
std::string temporal_prefix(Direction dir, const ModelConfig& cfg);

}  // namespace rawvid::rvdt
