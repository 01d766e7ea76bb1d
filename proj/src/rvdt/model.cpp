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

#include "rawvid/rvdt/model.hpp"

#include <algorithm>
#include <tuple>

#include "rawvid/error.hpp"
#include "rawvid/rvdt/ops.hpp"

namespace rawvid::rvdt {

namespace {

Tensor conv(const Tensor& x, const WeightSet& ws, const std::string& name, int stride = 1) {
  return conv2d(x, ws.get(name + ".w"), &ws.get(name + ".b"), stride);
}

Tensor conv_act(const Tensor& x, const WeightSet& ws, const std::string& name, int stride = 1) {
  Tensor y = conv(x, ws, name, stride);
  leaky_relu_inplace(y);
  return y;
}

}  // namespace

Tensor encode_spatial(const Tensor& frame, const ModelConfig& cfg, const WeightSet& ws) {
  require(frame.rank() == 3 && frame.dim(0) == cfg.input_channels(), ErrorKind::Shape,
          "encoder expects " + std::to_string(cfg.input_channels()) + " x H x W, got " + frame.shape_string());
  require(frame.dim(1) % 4 == 0 && frame.dim(2) % 4 == 0, ErrorKind::Shape,
          "encoder input extents must be multiples of 4");
  const Tensor x0 = conv_act(frame, ws, "enc.in");
  const Tensor l0 = conv_act(x0, ws, "enc.l0");
  const Tensor mid = conv_act(conv_act(l0, ws, "enc.down", 2), ws, "enc.mid");
  const Tensor up = upsample_nearest2(conv_act(mid, ws, "enc.up"));
  const Tensor fused = conv_act(concat_channels(up, l0), ws, "enc.fuse");
  return conv(conv_act(fused, ws, "enc.ds1", 2), ws, "enc.ds2", 2);
}

Tensor spatial_blocks(const Tensor& feature, const ModelConfig& cfg, const WeightSet& ws) {
  Tensor x = feature;
  for (int i = 0; i < cfg.spatial_blocks; ++i) x = spatial_block(x, ws, "spatial." + std::to_string(i), cfg);
  return x;
}

std::string temporal_prefix(Direction dir, const ModelConfig& cfg) {
  if (cfg.tie_directions) return "temporal.shared";
  return dir == Direction::Forward ? "temporal.fwd" : "temporal.bwd";
}

std::vector<Tensor> temporal_pass(const std::vector<Tensor>& features, Direction dir, const ModelConfig& cfg,
                                  const WeightSet& ws) {
  require(!features.empty(), ErrorKind::Shape, "temporal pass on an empty clip");
  const std::string prefix = temporal_prefix(dir, cfg);
  const std::size_t t = features.size();
  std::vector<Tensor> out(t);
  Tensor state(features.front().shape);
  for (std::size_t step = 0; step < t; ++step) {
    const std::size_t i = dir == Direction::Forward ? step : t - 1 - step;
    require(features[i].shape == state.shape, ErrorKind::Shape, "clip features differ in shape");
    Tensor cur = features[i], prop = state;
    for (int s = 0; s < cfg.temporal_layers - 1; ++s)
      std::tie(cur, prop) = transmission_layer(cur, prop, ws, prefix + ".t" + std::to_string(s), cfg);
    state = merging_layer(cur, prop, ws, prefix + ".merge", cfg);
    out[i] = state;
  }
  return out;
}

Tensor decode(const Tensor& forward, const Tensor& backward, const ModelConfig& cfg, const WeightSet& ws) {
  require(forward.shape == backward.shape && forward.rank() == 3 && forward.dim(0) == cfg.channels,
          ErrorKind::Shape, "decoder inputs must both be C x h x w");
  // Concatenation followed by one convolution, evaluated as the sum of the
  // two per-direction halves so that tied directions commute exactly.
  const Tensor& wf = ws.get(cfg.tie_directions ? "dec.fuse_dir.w" : "dec.fuse_f.w");
  const Tensor& wb = ws.get(cfg.tie_directions ? "dec.fuse_dir.w" : "dec.fuse_b.w");
  Tensor x = conv2d(forward, wf, nullptr);
  add_inplace(x, conv2d(backward, wb, nullptr));
  const Tensor& fb = ws.get("dec.fuse.b");
  const std::size_t hw = x.size() / static_cast<std::size_t>(cfg.channels);
  for (int c = 0; c < cfg.channels; ++c)
    for (std::size_t i = 0; i < hw; ++i) x.data[c * hw + i] += fb.data[c];
  leaky_relu_inplace(x);
  x = pixel_shuffle(conv(x, ws, "dec.up1"), 2);
  leaky_relu_inplace(x);
  x = pixel_shuffle(conv(x, ws, "dec.up2"), 2);
  leaky_relu_inplace(x);
  return conv(x, ws, "dec.out");
}

std::vector<Tensor> denoise_clip(const std::vector<Tensor>& frames, const ModelConfig& cfg, const WeightSet& ws,
                                 const std::vector<Tensor>* noise_levels) {
  cfg.validate();
  ws.validate(cfg);
  require(!frames.empty(), ErrorKind::Shape, "empty clip");
  const auto& shape = frames.front().shape;
  require(shape.size() == 3 && shape[0] == cfg.image_channels, ErrorKind::Shape,
          "frames must be " + std::to_string(cfg.image_channels) + " x H x W");
  for (const auto& f : frames) require(f.shape == shape, ErrorKind::Shape, "clip frames differ in shape");
  if (!cfg.blind) {
    require(noise_levels && noise_levels->size() == frames.size(), ErrorKind::Shape,
            "non-blind model needs one noise-level map per frame");
  }
  const int h = shape[1], w = shape[2];
  const int ph = (4 - h % 4) % 4, pw = (4 - w % 4) % 4;

  const std::size_t t = frames.size();
  std::vector<Tensor> features(t);
  for (std::size_t i = 0; i < t; ++i) {
    Tensor x = frames[i];
    if (!cfg.blind) {
      const Tensor& nl = (*noise_levels)[i];
      Tensor map({1, h, w});
      if (nl.size() == 1) std::fill(map.data.begin(), map.data.end(), nl.data[0]);
      else {
        require(nl.shape == std::vector<int>{1, h, w}, ErrorKind::Shape, "noise-level map must be 1x1x1 or 1xHxW");
        map = nl;
      }
      x = concat_channels(x, map);
    }
    features[i] = spatial_blocks(encode_spatial(reflect_pad_end(x, ph, pw), cfg, ws), cfg, ws);
  }
  const auto fwd = temporal_pass(features, Direction::Forward, cfg, ws);
  const auto bwd = temporal_pass(features, Direction::Backward, cfg, ws);
  std::vector<Tensor> out(t);
  for (std::size_t i = 0; i < t; ++i) out[i] = crop_end(decode(fwd[i], bwd[i], cfg, ws), h, w);
  return out;
}

}  // namespace rawvid::rvdt
