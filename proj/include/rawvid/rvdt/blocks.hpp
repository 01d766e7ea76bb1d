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

#include <string>
#include <utility>
#include <vector>

#include "rawvid/rvdt/attention.hpp"
#include "rawvid/rvdt/config.hpp"
#include "rawvid/rvdt/weights.hpp"

namespace rawvid::rvdt {

// Window-local map geometry of a token tensor: each window holds `frames`
// maps of h x w tokens.
struct MapGeometry {
  int frames = 1;
  int h = 1;
  int w = 1;
};

struct CsaTrace {
  std::vector<int> sa_shape, ca_shape, sca_shape;  // per (window, frame) map
  int maps = 0;                                    // window-frame maps gated
};

// Feed-forward with residual: LN -> M1 (linear + GELU) -> per-map SA / CA
// gates -> grouped conv -> + map -> SCA gate -> + map -> M2 -> + z. With
// cfg.csa_mlp off, the plain MLP M2(M1(LN(z))) + z.
Tensor csa_mlp(const Tensor& z, const MapGeometry& geo, const WeightSet& ws, const std::string& prefix,
               const ModelConfig& cfg, CsaTrace* trace = nullptr);

struct BlockTrace {
  AttentionTrace attention;
  CsaTrace csa;
};

// Window self-attention block on a C x H x W map.
Tensor spatial_block(const Tensor& x, const WeightSet& ws, const std::string& prefix, const ModelConfig& cfg,
                     BlockTrace* trace = nullptr);

// Joint 3-D window attention over the (current, propagated) pair.
std::pair<Tensor, Tensor> transmission_layer(const Tensor& current, const Tensor& propagated, const WeightSet& ws,
                                             const std::string& prefix, const ModelConfig& cfg,
                                             BlockTrace* trace = nullptr);

// Cross-attention: queries from current, keys/values from propagated.
Tensor merging_layer(const Tensor& current, const Tensor& propagated, const WeightSet& ws, const std::string& prefix,
                     const ModelConfig& cfg, BlockTrace* trace = nullptr);

}  // namespace rawvid::rvdt
