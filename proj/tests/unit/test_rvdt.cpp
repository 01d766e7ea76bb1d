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

#include <doctest.h>

#include <cmath>
#include <random>

#include "rawvid/error.hpp"
#include "rawvid/rvdt/attention.hpp"
#include "rawvid/rvdt/blocks.hpp"
#include "rawvid/rvdt/config.hpp"
#include "rawvid/rvdt/model.hpp"
#include "rawvid/rvdt/ops.hpp"
#include "rawvid/rvdt/weights.hpp"
#include "synthetic.hpp"

using namespace rawvid::rvdt;
using rawvid::Error;

namespace {

Tensor random_tensor(std::vector<int> shape, unsigned seed, float scale = 1.0f) {
  std::mt19937 gen(seed);
  std::normal_distribution<float> d(0.0f, scale);
  Tensor t(std::move(shape));
  for (float& v : t.data) v = d(gen);
  return t;
}

ModelConfig small_config() {
  ModelConfig cfg;
  cfg.channels = 16;
  cfg.heads = 2;
  cfg.window = 4;
  cfg.spatial_blocks = 2;
  cfg.unet_channels = 16;
  cfg.temporal_layers = 3;
  return cfg;
}

void check_close(const Tensor& a, const Tensor& b, float tol) {
  REQUIRE(a.shape == b.shape);
  float worst = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
  CHECK(worst <= tol);
}

}  // namespace

TEST_CASE("convolution matches a direct loop") {
  const Tensor x = random_tensor({3, 9, 7}, 1);
  const Tensor w = random_tensor({5, 3, 3, 3}, 2);
  const Tensor b = random_tensor({5}, 3);
  for (int stride : {1, 2}) {
    const Tensor y = conv2d(x, w, &b, stride);
    const int oh = (9 + 2 - 3) / stride + 1, ow = (7 + 2 - 3) / stride + 1;
    REQUIRE(y.shape == std::vector<int>{5, oh, ow});
    for (int o = 0; o < 5; ++o)
      for (int yy = 0; yy < oh; ++yy)
        for (int xx = 0; xx < ow; ++xx) {
          double s = b.data[o];
          for (int c = 0; c < 3; ++c)
            for (int ky = 0; ky < 3; ++ky)
              for (int kx = 0; kx < 3; ++kx) {
                const int iy = yy * stride + ky - 1, ix = xx * stride + kx - 1;
                if (iy < 0 || iy >= 9 || ix < 0 || ix >= 7) continue;
                s += w.data[((o * 3 + c) * 3 + ky) * 3 + kx] * x.data[(c * 9 + iy) * 7 + ix];
              }
          CHECK(y.data[(o * oh + yy) * ow + xx] == doctest::Approx(s).epsilon(1e-4));
        }
  }
}

TEST_CASE("depthwise convolution equals per-channel dense convolution") {
  const Tensor x = random_tensor({4, 6, 6}, 4);
  const Tensor w = random_tensor({4, 1, 3, 3}, 5);
  const Tensor y = conv2d_grouped(x, w, nullptr, 4);
  for (int c = 0; c < 4; ++c) {
    Tensor xc({1, 6, 6}, std::vector<float>(x.data.begin() + c * 36, x.data.begin() + (c + 1) * 36));
    Tensor wc({1, 1, 3, 3}, std::vector<float>(w.data.begin() + c * 9, w.data.begin() + (c + 1) * 9));
    const Tensor yc = conv2d(xc, wc, nullptr);
    for (int i = 0; i < 36; ++i) CHECK(y.data[c * 36 + i] == doctest::Approx(yc.data[i]).epsilon(1e-5));
  }
}

TEST_CASE("layer norm moments") {
  const Tensor x = random_tensor({7, 48}, 6, 3.0f);
  const Tensor y = layer_norm(x, Tensor({48}, 1.0f), Tensor({48}, 0.0f));
  for (int r = 0; r < 7; ++r) {
    double m = 0, v = 0;
    for (int c = 0; c < 48; ++c) m += y.data[r * 48 + c];
    m /= 48;
    for (int c = 0; c < 48; ++c) v += (y.data[r * 48 + c] - m) * (y.data[r * 48 + c] - m);
    v /= 48;
    CHECK(std::abs(m) < 1e-4);
    CHECK(std::abs(v - 1.0) < 1e-4);
  }
}

TEST_CASE("pixel shuffle follows its index formula") {
  const int c = 3, h = 4, w = 5, r = 2;
  const Tensor x = random_tensor({c * r * r, h, w}, 7);
  const Tensor y = pixel_shuffle(x, r);
  REQUIRE(y.shape == std::vector<int>{c, r * h, r * w});
  for (int ch = 0; ch < c; ++ch)
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx)
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j)
            CHECK(y.data[(static_cast<std::size_t>(ch) * r * h + (r * yy + i)) * r * w + r * xx + j] ==
                  x.data[((static_cast<std::size_t>(ch) * r * r + i * r + j) * h + yy) * w + xx]);
}

TEST_CASE("reflect padding and cropping") {
  Tensor x({1, 1, 3}, std::vector<float>{1, 2, 3});
  const Tensor p = reflect_pad_end(x, 0, 4);
  CHECK(p.data == std::vector<float>{1, 2, 3, 2, 1, 2, 3});
  CHECK(crop_end(p, 1, 3).data == x.data);
}

TEST_CASE("window partition counts and exact inverse") {
  const Tensor x = random_tensor({2, 16, 8, 8}, 8);
  const WindowGeometry g = window_geometry(2, 8, 8, 2, 4, 4);
  const Tensor t = window_partition(x, g);
  CHECK(t.shape == std::vector<int>{4, 32, 16});
  CHECK(window_reverse(t, g, 16) == x);

  const WindowGeometry whole = window_geometry(2, 8, 8, 2, 8, 8);
  CHECK(window_partition(x, whole).shape == std::vector<int>{1, 128, 16});

  // Non-divisible extents pad by reflection and crop back.
  const Tensor y = random_tensor({1, 5, 10, 7}, 9);
  const WindowGeometry gy = window_geometry(1, 10, 7, 1, 4, 4);
  CHECK(gy.padded_h == 12);
  CHECK(gy.padded_w == 8);
  CHECK(window_reverse(window_partition(y, gy), gy, 5) == y);

  const Tensor z = random_tensor({6, 12, 12}, 10);
  WindowGeometry g2;
  const Tensor tz = window_partition_2d(z, 4, &g2);
  CHECK(tz.shape == std::vector<int>{9, 16, 6});
  CHECK(window_reverse_2d(tz, g2) == z);
  // A window larger than the map shrinks to it.
  WindowGeometry g3;
  CHECK(window_partition_2d(random_tensor({2, 3, 3}, 11), 8, &g3).shape == std::vector<int>{1, 9, 2});
}

TEST_CASE("uniform attention averages the values") {
  const Tensor q({4, 3}, 0.0f), k = random_tensor({5, 3}, 12), v = random_tensor({5, 2}, 13);
  std::vector<float> probs;
  const Tensor o = scaled_dot_attention(q, k, v, nullptr, &probs);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 2; ++c) {
      double m = 0;
      for (int j = 0; j < 5; ++j) m += v.data[j * 2 + c];
      CHECK(o.data[r * 2 + c] == doctest::Approx(m / 5).epsilon(1e-5));
    }
  for (float p : probs) CHECK(p == doctest::Approx(0.2f));
}

TEST_CASE("saturated softmax selects the aligned value row") {
  Tensor q({1, 4}, std::vector<float>{100, 0, 0, 0});
  Tensor k({4, 4}, 0.0f);
  for (int i = 0; i < 4; ++i) k.data[i * 4 + i] = 1.0f;
  const Tensor v = random_tensor({4, 3}, 14);
  const Tensor o = scaled_dot_attention(q, k, v, nullptr);
  for (int c = 0; c < 3; ++c) CHECK(o.data[c] == doctest::Approx(v.data[c]).epsilon(1e-5));
}

TEST_CASE("multi-head rows are normalized and inside the value hull") {
  const Tensor q = random_tensor({3, 16, 8}, 15, 2.0f), k = random_tensor({3, 16, 8}, 16, 2.0f),
               v = random_tensor({3, 16, 8}, 17);
  AttentionTrace tr;
  const Tensor o = multi_head_attention(q, k, v, 2, nullptr, nullptr, &tr);
  for (int w = 0; w < 3; ++w)
    for (int h = 0; h < 2; ++h)
      for (int i = 0; i < 16; ++i) {
        double s = 0;
        for (int j = 0; j < 16; ++j) s += tr.prob(w, h, i, j);
        CHECK(std::abs(s - 1.0) <= 1e-6);
      }
  for (int w = 0; w < 3; ++w)
    for (int c = 0; c < 8; ++c) {
      float lo = 1e30f, hi = -1e30f;
      for (int j = 0; j < 16; ++j) {
        lo = std::min(lo, v.data[(w * 16 + j) * 8 + c]);
        hi = std::max(hi, v.data[(w * 16 + j) * 8 + c]);
      }
      for (int i = 0; i < 16; ++i) {
        CHECK(o.data[(w * 16 + i) * 8 + c] >= lo - 1e-5f);
        CHECK(o.data[(w * 16 + i) * 8 + c] <= hi + 1e-5f);
      }
    }
}

TEST_CASE("zero weights make every block an identity") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = zero_weights(cfg);
  const Tensor x = random_tensor({16, 8, 12}, 18), y = random_tensor({16, 8, 12}, 19);
  CHECK(spatial_block(x, ws, "spatial.0", cfg) == x);
  const auto [a, b] = transmission_layer(x, y, ws, "temporal.fwd.t0", cfg);
  CHECK(a == x);
  CHECK(b == y);
  CHECK(merging_layer(x, y, ws, "temporal.fwd.merge", cfg) == x);
  const std::vector<Tensor> feats = {x, y, x};
  CHECK(temporal_pass(feats, Direction::Forward, cfg, ws) == feats);
  CHECK(temporal_pass(feats, Direction::Backward, cfg, ws) == feats);
  for (float v : decode(x, y, cfg, ws).data) CHECK(v == 0.0f);
  for (float v : encode_spatial(random_tensor({3, 16, 16}, 20), cfg, ws).data) CHECK(v == 0.0f);
}

TEST_CASE("all-zero weights give all-zero clip outputs of the input shape") {
  const ModelConfig cfg = small_config();
  const std::vector<Tensor> clip = {random_tensor({3, 18, 22}, 21), random_tensor({3, 18, 22}, 22)};
  const auto out = denoise_clip(clip, cfg, zero_weights(cfg));
  REQUIRE(out.size() == 2);
  for (const Tensor& t : out) {
    CHECK(t.shape == std::vector<int>{3, 18, 22});
    for (float v : t.data) CHECK(v == 0.0f);
  }
}

TEST_CASE("block shapes and finiteness with random weights") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = init_weights(cfg, 3);
  const Tensor x = random_tensor({16, 10, 6}, 23), y = random_tensor({16, 10, 6}, 24);
  const Tensor s = spatial_block(x, ws, "spatial.1", cfg);
  CHECK(s.shape == x.shape);
  CHECK(s.all_finite());
  const auto [a, b] = transmission_layer(x, y, ws, "temporal.bwd.t1", cfg);
  CHECK(a.shape == x.shape);
  CHECK(b.shape == y.shape);
  CHECK(merging_layer(x, y, ws, "temporal.bwd.merge", cfg).shape == x.shape);
}

TEST_CASE("transmission attention crosses frames") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = init_weights(cfg, 4);
  BlockTrace tr;
  transmission_layer(random_tensor({16, 4, 4}, 25), random_tensor({16, 4, 4}, 26), ws, "temporal.fwd.t0", cfg, &tr);
  REQUIRE(tr.attention.queries == 32);
  double cross = 0;
  for (int h = 0; h < tr.attention.heads; ++h)
    for (int q = 0; q < 16; ++q)
      for (int k = 16; k < 32; ++k) cross += tr.attention.prob(0, h, q, k);
  CHECK(cross > 0.0);
}

TEST_CASE("merging a feature with itself is self-attention with tied projections") {
  const ModelConfig cfg = small_config();
  WeightSet ws = init_weights(cfg, 5);
  const int c = cfg.channels;
  const std::string s = "spatial.0", m = "temporal.fwd.merge";
  ws.get(s + ".attn.qkv.b") = random_tensor({3 * c}, 40, 0.1f);
  const Tensor& qkv_w = ws.get(s + ".attn.qkv.w");
  const Tensor& qkv_b = ws.get(s + ".attn.qkv.b");
  Tensor qw({c, c}), kvw({c, 2 * c}), qb({c}), kvb({2 * c});
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) qw.data[i * c + j] = qkv_w.data[i * 3 * c + j];
    for (int j = 0; j < 2 * c; ++j) kvw.data[i * 2 * c + j] = qkv_w.data[i * 3 * c + c + j];
  }
  for (int j = 0; j < c; ++j) qb.data[j] = qkv_b.data[j];
  for (int j = 0; j < 2 * c; ++j) kvb.data[j] = qkv_b.data[c + j];
  ws.get(m + ".attn.q.w") = qw;
  ws.get(m + ".attn.q.b") = qb;
  ws.get(m + ".attn.kv.w") = kvw;
  ws.get(m + ".attn.kv.b") = kvb;
  for (const char* n : {".g", ".b"}) {
    ws.get(m + ".norm_q" + n) = ws.get(s + ".norm1" + n);
    ws.get(m + ".norm_kv" + n) = ws.get(s + ".norm1" + n);
  }
  for (const std::string& n : ws.names()) {
    if (n.rfind(s + ".attn.proj", 0) == 0 || n == s + ".attn.rpb" || n.rfind(s + ".mlp", 0) == 0)
      ws.get(m + n.substr(s.size())) = ws.get(n);
  }
  const Tensor x = random_tensor({c, 8, 8}, 27);
  check_close(merging_layer(x, x, ws, m, cfg), spatial_block(x, ws, s, cfg), 1e-5f);
}

TEST_CASE("saturated gates reduce the CSA-MLP to the plain MLP") {
  ModelConfig cfg = small_config();
  WeightSet ws = init_weights(cfg, 6);
  for (float& b : ws.get("spatial.0.mlp.sca.b").data) b = -1e4f;
  const Tensor z = random_tensor({3, 16, 16}, 28);
  const Tensor gated = csa_mlp(z, {1, 4, 4}, ws, "spatial.0.mlp", cfg);
  ModelConfig plain = cfg;
  plain.csa_mlp = false;
  check_close(gated, csa_mlp(z, {1, 4, 4}, ws, "spatial.0.mlp", plain), 1e-5f);
}

TEST_CASE("gate map shapes") {
  const ModelConfig cfg = small_config();
  CsaTrace tr;
  csa_mlp(random_tensor({2, 32, 16}, 29), {2, 4, 4}, init_weights(cfg, 7), "temporal.fwd.t0.mlp", cfg, &tr);
  CHECK(tr.sa_shape == std::vector<int>{1, 4, 4});
  CHECK(tr.ca_shape == std::vector<int>{cfg.hidden(), 1, 1});
  CHECK(tr.sca_shape == std::vector<int>{cfg.hidden(), 4, 4});
  CHECK(tr.maps == 4);
}

TEST_CASE("directions are causal") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = init_weights(cfg, 8);
  std::vector<Tensor> f = {random_tensor({16, 4, 4}, 30), random_tensor({16, 4, 4}, 31), random_tensor({16, 4, 4}, 32)};
  const auto fwd = temporal_pass(f, Direction::Forward, cfg, ws);
  const auto bwd = temporal_pass(f, Direction::Backward, cfg, ws);
  f[2] = random_tensor({16, 4, 4}, 33);
  CHECK(temporal_pass(f, Direction::Forward, cfg, ws)[0] == fwd[0]);
  CHECK(temporal_pass(f, Direction::Backward, cfg, ws)[0] != bwd[0]);
  CHECK(temporal_pass({f[0]}, Direction::Forward, cfg, ws).size() == 1);
}

TEST_CASE("a static clip is reflection symmetric under tied directions") {
  ModelConfig cfg = small_config();
  cfg.tie_directions = true;
  const WeightSet ws = init_weights(cfg, 9);
  const Tensor frame = random_tensor({3, 16, 16}, 34, 0.2f);
  const auto out = denoise_clip(std::vector<Tensor>(5, frame), cfg, ws);
  CHECK(out[1] == out[3]);
  CHECK(out[0] == out[4]);
  CHECK(out[1] != out[2]);
}

TEST_CASE("encoder downsamples by four") {
  const ModelConfig cfg;  // defaults: C = 48
  const WeightSet ws = init_weights(cfg, 10);
  CHECK(encode_spatial(random_tensor({3, 64, 64}, 35), cfg, ws).shape == std::vector<int>{48, 16, 16});
  CHECK_THROWS_AS(encode_spatial(random_tensor({3, 66, 64}, 36), cfg, ws), Error);
}

TEST_CASE("non-multiple-of-four frames are padded and cropped") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = init_weights(cfg, 11);
  const auto out = denoise_clip({random_tensor({3, 66, 66}, 37, 0.2f)}, cfg, ws);
  CHECK(out[0].shape == std::vector<int>{3, 66, 66});
  CHECK(out[0].all_finite());
}

TEST_CASE("non-blind noise maps: broadcast scalar equals a constant map") {
  ModelConfig cfg = small_config();
  cfg.blind = false;
  const WeightSet ws = init_weights(cfg, 12);
  const std::vector<Tensor> clip = {random_tensor({3, 16, 16}, 38), random_tensor({3, 16, 16}, 39)};
  const std::vector<Tensor> scalar(2, Tensor({1, 1, 1}, 0.05f));
  const std::vector<Tensor> map(2, Tensor({1, 16, 16}, 0.05f));
  const auto a = denoise_clip(clip, cfg, ws, &scalar), b = denoise_clip(clip, cfg, ws, &map);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
  CHECK_THROWS_AS(denoise_clip(clip, cfg, ws), Error);
}

TEST_CASE("parameter count grows with width") {
  ModelConfig a;
  ModelConfig b = a;
  b.channels *= 2;
  b.unet_channels *= 2;
  const double ratio = static_cast<double>(param_count(b)) / static_cast<double>(param_count(a));
  CHECK(ratio > 3.5);
  CHECK(ratio <= 4.0);
  ModelConfig c = a;
  c.spatial_blocks += 1;
  CHECK(param_count(c) > param_count(a));
}

TEST_CASE("saved weights hold exactly param_count floats") {
  const ModelConfig cfg = small_config();
  const WeightSet ws = init_weights(cfg, 13);
  CHECK(ws.element_count() == param_count(cfg));
  rawvid::testing::TempDir dir("weights");
  ws.save(dir.path() / "w.txt", dir.path() / "w.bin");
  CHECK(std::filesystem::file_size(dir.path() / "w.bin") == 4 * param_count(cfg));
  const WeightSet back = WeightSet::load(dir.path() / "w.txt");
  CHECK(back.names() == ws.names());
  for (const auto& n : ws.names()) CHECK(back.get(n) == ws.get(n));
  CHECK_NOTHROW(back.validate(cfg));
  ModelConfig other = cfg;
  other.spatial_blocks = 3;
  CHECK_THROWS_AS(back.validate(other), Error);
}

TEST_CASE("initialization is deterministic per seed") {
  const ModelConfig cfg = small_config();
  const WeightSet a = init_weights(cfg, 1), b = init_weights(cfg, 1), c = init_weights(cfg, 2);
  CHECK(a.get("spatial.0.attn.qkv.w") == b.get("spatial.0.attn.qkv.w"));
  CHECK_FALSE(a.get("spatial.0.attn.qkv.w") == c.get("spatial.0.attn.qkv.w"));
}

TEST_CASE("model config parsing") {
  const ModelConfig cfg;
  CHECK(ModelConfig::parse(cfg.serialize()) == cfg);
  CHECK_THROWS_AS(ModelConfig::parse(R"({"chanels": 32})"), Error);
  CHECK_THROWS_AS(ModelConfig::parse(R"({"shifted_windows": true})"), Error);
  CHECK_THROWS_AS(ModelConfig::parse(R"({"channels": 50, "heads": 4})"), Error);
}
