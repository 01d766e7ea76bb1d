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

#include "rawvid/rvdt/checks.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "rawvid/error.hpp"
#include "rawvid/noise/rng.hpp"
#include "rawvid/rvdt/model.hpp"
#include "rawvid/rvdt/ops.hpp"

namespace rawvid::rvdt {

namespace {

Tensor random_tensor(std::vector<int> shape, std::uint64_t key, float scale = 1.0f, float offset = 0.0f) {
  Tensor t(std::move(shape));
  const CounterRng rng(splitmix64(key));
  for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = offset + scale * static_cast<float>(rng.normal(2 * i));
  return t;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r{name, false, "", 0.0};
  try {
    auto [ok, detail] = body();
    r.pass = ok;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CheckResult> run_structural_checks(const ModelConfig& cfg_in, std::uint64_t seed) {
  cfg_in.validate();
  const ModelConfig cfg = cfg_in;
  const int c = cfg.channels;
  std::vector<CheckResult> out;

  out.push_back(timed("window_partition_inverse", [&] {
    const Tensor x = random_tensor({2, c, 16, 16}, seed + 1);
    const WindowGeometry g = window_geometry(2, 16, 16, cfg.temporal_window, cfg.window, cfg.window);
    const Tensor tok = window_partition(x, g);
    bool ok = window_reverse(tok, g, c) == x && window_partition(window_reverse(tok, g, c), g) == tok;
    const Tensor y = random_tensor({c, 13, 11}, seed + 2);
    WindowGeometry g2;
    const Tensor tok2 = window_partition_2d(y, cfg.window, &g2);
    ok = ok && window_reverse_2d(tok2, g2) == y;
    return std::pair{ok, "3-D and padded 2-D round trips " + std::string(ok ? "bit-exact" : "differ")};
  }));

  out.push_back(timed("softmax_rows", [&] {
    const Tensor q = random_tensor({4, 64, c}, seed + 3, 3.0f);
    const Tensor k = random_tensor({4, 64, c}, seed + 4, 3.0f);
    const Tensor v = random_tensor({4, 64, c}, seed + 5);
    const WindowGeometry g = window_geometry(1, 8, 8, 1, 8, 8);
    const auto rel = relative_position_index(g, 1, 8);
    const Tensor rpb = random_tensor({15 * 15, cfg.heads}, seed + 6, 0.5f);
    AttentionTrace tr;
    const Tensor o = multi_head_attention(q, k, v, cfg.heads, &rpb, &rel, &tr);
    double worst = 0.0;
    for (int w = 0; w < tr.windows; ++w)
      for (int h = 0; h < tr.heads; ++h)
        for (int i = 0; i < tr.queries; ++i) {
          double s = 0.0;
          for (int j = 0; j < tr.keys; ++j) s += tr.prob(w, h, i, j);
          worst = std::max(worst, std::abs(s - 1.0));
        }
    // Each output component lies within the per-head range of V.
    bool hull = true;
    for (int w = 0; w < 4; ++w)
      for (int ch = 0; ch < c; ++ch) {
        float lo = INFINITY, hi = -INFINITY;
        for (int j = 0; j < 64; ++j) {
          lo = std::min(lo, v.data[(static_cast<std::size_t>(w) * 64 + j) * c + ch]);
          hi = std::max(hi, v.data[(static_cast<std::size_t>(w) * 64 + j) * c + ch]);
        }
        for (int i = 0; i < 64; ++i) {
          const float val = o.data[(static_cast<std::size_t>(w) * 64 + i) * c + ch];
          if (val < lo - 1e-5f || val > hi + 1e-5f) hull = false;
        }
      }
    return std::pair{worst <= 1e-6 && hull, "max |row sum - 1| = " + fmt(worst) + (hull ? ", convex" : ", outside hull")};
  }));

  out.push_back(timed("zero_weight_identity", [&] {
    const WeightSet zw = zero_weights(cfg);
    const Tensor a = random_tensor({c, 16, 16}, seed + 7);
    const Tensor b = random_tensor({c, 16, 16}, seed + 8);
    std::vector<std::string> failed;
    const std::string dir = temporal_prefix(Direction::Forward, cfg);
    if (cfg.spatial_blocks > 0 && !(spatial_block(a, zw, "spatial.0", cfg) == a)) failed.push_back("spatial");
    const auto [ta, tb] = transmission_layer(a, b, zw, dir + ".t0", cfg);
    if (!(ta == a && tb == b)) failed.push_back("transmission");
    if (!(merging_layer(a, b, zw, dir + ".merge", cfg) == a)) failed.push_back("merging");
    WindowGeometry g;
    const Tensor tok = window_partition_2d(a, cfg.window, &g);
    if (!(csa_mlp(tok, {1, g.wh, g.ww}, zw, "spatial.0.mlp", cfg) == tok) && cfg.spatial_blocks > 0)
      failed.push_back("csa_mlp");
    const std::vector<Tensor> feats{a, b, a};
    const auto fwd = temporal_pass(feats, Direction::Forward, cfg, zw);
    const auto bwd = temporal_pass(feats, Direction::Backward, cfg, zw);
    for (std::size_t i = 0; i < feats.size(); ++i)
      if (!(fwd[i] == feats[i] && bwd[i] == feats[i])) failed.push_back("temporal_pass");
    const Tensor frame = random_tensor({cfg.input_channels(), 32, 32}, seed + 9);
    if (encode_spatial(frame, cfg, zw).max_abs() != 0.0f) failed.push_back("encoder");
    if (decode(a, b, cfg, zw).max_abs() != 0.0f) failed.push_back("decoder");
    std::string detail = failed.empty() ? "every block is the identity on its residual path" : "not identity:";
    for (const auto& f : failed) detail += " " + f;
    return std::pair{failed.empty(), detail};
  }));

  out.push_back(timed("layer_norm_moments", [&] {
    const Tensor x = random_tensor({256, c}, seed + 10, 5.0f, 3.0f);
    const Tensor y = layer_norm(x, Tensor({c}, 1.0f), Tensor({c}, 0.0f));
    double worst_mean = 0.0, worst_var = 0.0;
    for (int r = 0; r < 256; ++r) {
      double m = 0.0, v = 0.0;
      for (int i = 0; i < c; ++i) m += y.data[static_cast<std::size_t>(r) * c + i];
      m /= c;
      for (int i = 0; i < c; ++i) v += std::pow(y.data[static_cast<std::size_t>(r) * c + i] - m, 2);
      v /= c;
      worst_mean = std::max(worst_mean, std::abs(m));
      worst_var = std::max(worst_var, std::abs(v - 1.0));
    }
    return std::pair{worst_mean <= 1e-4 && worst_var <= 1e-4,
                     "max |mean| = " + fmt(worst_mean) + ", max |var - 1| = " + fmt(worst_var)};
  }));

  out.push_back(timed("finite_forward_T5_64x64", [&] {
    const WeightSet ws = init_weights(cfg, seed);
    std::vector<Tensor> clip, levels;
    for (int i = 0; i < 5; ++i) {
      Tensor f = random_tensor({cfg.image_channels, 64, 64}, seed + 20 + i, 0.25f, 0.5f);
      clip.push_back(std::move(f));
      levels.push_back(Tensor({1, 1, 1}, 0.05f));
    }
    const auto y = denoise_clip(clip, cfg, ws, cfg.blind ? nullptr : &levels);
    bool ok = y.size() == 5;
    float mx = 0.0f;
    for (const auto& t : y) {
      ok = ok && t.all_finite() && t.shape == clip.front().shape;
      mx = std::max(mx, t.max_abs());
    }
    return std::pair{ok, "5 frames, max |y| = " + fmt(mx)};
  }));

  out.push_back(timed("time_reversal_tied", [&] {
    ModelConfig tied = cfg;
    tied.tie_directions = true;
    const WeightSet ws = init_weights(tied, seed + 1);
    std::vector<Tensor> clip, levels;
    for (int i = 0; i < 4; ++i) {
      clip.push_back(random_tensor({tied.image_channels, 32, 32}, seed + 40 + i, 0.25f, 0.5f));
      levels.push_back(Tensor({1, 1, 1}, 0.02f * (i + 1)));
    }
    std::vector<Tensor> rev(clip.rbegin(), clip.rend()), rev_levels(levels.rbegin(), levels.rend());
    const auto y = denoise_clip(clip, tied, ws, tied.blind ? nullptr : &levels);
    const auto yr = denoise_clip(rev, tied, ws, tied.blind ? nullptr : &rev_levels);
    bool ok = true;
    for (std::size_t i = 0; i < y.size(); ++i) ok = ok && y[i] == yr[y.size() - 1 - i];
    return std::pair{ok, ok ? "reversed input gives reversed output bit-exactly" : "outputs differ"};
  }));

  out.push_back(timed("gate_map_shapes", [&] {
    ModelConfig probe = cfg;
    probe.csa_mlp = true;
    probe.mlp_ratio = 1.0;
    probe.spatial_blocks = std::max(1, probe.spatial_blocks);
    const WeightSet ws = init_weights(probe, seed + 2);
    const Tensor z = random_tensor({2, 64, c}, seed + 50);
    CsaTrace tr;
    csa_mlp(z, {1, 8, 8}, ws, "spatial.0.mlp", probe, &tr);
    const std::vector<int> sa{1, 8, 8}, ca{c, 1, 1}, sca{c, 8, 8};
    bool ok = tr.sa_shape == sa && tr.ca_shape == ca && tr.sca_shape == sca;
    std::string detail = "SA " + shape_string(tr.sa_shape) + ", CA " + shape_string(tr.ca_shape) + ", SCA " +
                         shape_string(tr.sca_shape);
    // The configured MLP width gates a map of hidden() channels.
    if (cfg.csa_mlp && cfg.mlp_ratio != 1.0) {
      ModelConfig full = probe;
      full.mlp_ratio = cfg.mlp_ratio;
      CsaTrace tf;
      csa_mlp(z, {1, 8, 8}, init_weights(full, seed + 3), "spatial.0.mlp", full, &tf);
      const int h = full.hidden();
      ok = ok && tf.sa_shape == sa && tf.ca_shape == std::vector<int>{h, 1, 1} &&
           tf.sca_shape == std::vector<int>{h, 8, 8};
      detail += "; at mlp_ratio " + std::to_string(cfg.mlp_ratio).substr(0, 4) + ": SA " + shape_string(tf.sa_shape) +
                ", CA " + shape_string(tf.ca_shape) + ", SCA " + shape_string(tf.sca_shape);
    }
    return std::pair{ok, detail};
  }));

  return out;
}

}  // namespace rawvid::rvdt
