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

#include <random>

#include "rawvid/error.hpp"
#include "rawvid/raw/bayer.hpp"
#include "rawvid/raw/raw_io.hpp"
#include "synthetic.hpp"

using namespace rawvid;

namespace {

BayerFrame frame_of(int w, int h, std::uint16_t black, std::uint16_t white, std::uint64_t seed) {
  BayerFrame f;
  f.width = w;
  f.height = h;
  f.black_level = black;
  f.white_level = white;
  std::mt19937 gen(static_cast<unsigned>(seed));
  std::uniform_int_distribution<int> d(black, white);
  for (int i = 0; i < w * h; ++i) f.samples.push_back(static_cast<std::uint16_t>(d(gen)));
  return f;
}

}  // namespace

TEST_CASE("normalize maps black and white levels to the unit interval") {
  BayerFrame f = frame_of(2, 2, 256, 4095, 1);
  f.samples = {256, 4095, 2175, 256};
  const Mosaic m = normalize(f);
  CHECK(m.data[0] == 0.0f);
  CHECK(m.data[1] == 1.0f);
  CHECK(m.data[2] == doctest::Approx((2175.0 - 256.0) / 3839.0).epsilon(1e-7));
  CHECK(m.data[2] == doctest::Approx(0.49987).epsilon(1e-4));
}

TEST_CASE("normalize is monotone in the sample value") {
  BayerFrame f;
  f.width = 64;
  f.height = 64;
  f.black_level = 100;
  f.white_level = 4000;
  for (int i = 0; i < 64 * 64; ++i) f.samples.push_back(static_cast<std::uint16_t>(i));
  const Mosaic m = normalize(f);
  for (std::size_t i = 1; i < m.data.size(); ++i) CHECK(m.data[i] >= m.data[i - 1]);
}

TEST_CASE("frame validation rejects bad geometry and levels") {
  BayerFrame f = frame_of(4, 4, 0, 1023, 2);
  CHECK_NOTHROW(f.validate());
  BayerFrame odd = frame_of(3, 4, 0, 1023, 2);
  CHECK_THROWS_AS(odd.validate(), Error);
  BayerFrame lv = f;
  lv.black_level = 2000;
  lv.white_level = 1000;
  CHECK_THROWS_AS(lv.validate(), Error);
  BayerFrame cfa = f;
  cfa.cfa = CfaPattern::RGGB;
  try {
    pack_gbrg(normalize(cfa));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedPattern);
  }
}

TEST_CASE("pack places one GBRG tile into four planes") {
  Mosaic m{2, 2, CfaPattern::GBRG, {0.1f, 0.2f, 0.3f, 0.4f}};
  const PackedRaw p = pack_gbrg(m);
  REQUIRE(p.width == 1);
  REQUIRE(p.height == 1);
  CHECK(p.plane(0)[0] == 0.1f);  // G even row
  CHECK(p.plane(1)[0] == 0.2f);  // B
  CHECK(p.plane(2)[0] == 0.3f);  // R
  CHECK(p.plane(3)[0] == 0.4f);  // G odd row
}

TEST_CASE("pack and unpack are exact inverses") {
  Mosaic m = normalize(frame_of(38, 22, 0, 65535, 3));
  const Mosaic back = unpack_gbrg(pack_gbrg(m));
  CHECK(back.width == m.width);
  CHECK(back.height == m.height);
  CHECK(back.data == m.data);

  PackedRaw p;
  p.width = 7;
  p.height = 5;
  std::mt19937 gen(9);
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  for (int i = 0; i < 4 * 35; ++i) p.data.push_back(d(gen));
  CHECK(pack_gbrg(unpack_gbrg(p)).data == p.data);
}

TEST_CASE("full HD frame packs to 960x540x4 and back") {
  Mosaic m{1920, 1080, CfaPattern::GBRG, std::vector<float>(1920 * 1080, 0.25f)};
  const PackedRaw p = pack_gbrg(m);
  CHECK(p.width == 960);
  CHECK(p.height == 540);
  CHECK(p.data.size() == 960u * 540u * 4u);
  const Mosaic back = unpack_gbrg(p);
  CHECK(back.width == 1920);
  CHECK(back.height == 1080);
}

TEST_CASE("constant planes unpack to a constant mosaic") {
  PackedRaw p;
  p.width = 4;
  p.height = 3;
  p.data.assign(4 * 12, 0.625f);
  for (float v : unpack_gbrg(p).data) CHECK(v == 0.625f);
}

TEST_CASE("demosaic of a constant mosaic is constant") {
  Mosaic m{10, 8, CfaPattern::GBRG, std::vector<float>(80, 0.375f)};
  const RgbImage rgb = demosaic_bilinear(m);
  CHECK(rgb.width == 10);
  CHECK(rgb.height == 8);
  for (float v : rgb.data) CHECK(v == doctest::Approx(0.375f).epsilon(1e-6));
}

TEST_CASE("demosaic passes native samples through") {
  const Mosaic m = normalize(frame_of(12, 10, 0, 4095, 4));
  const RgbImage rgb = demosaic_bilinear(m);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      const int c = static_cast<int>(gbrg_channel(x, y));
      CHECK(rgb.plane(c)[static_cast<std::size_t>(y) * m.width + x] == m.at(x, y));
    }
}

TEST_CASE("demosaic reproduces a horizontal ramp in the interior") {
  // Brute-force oracle: bilinear interpolation of an affine signal returns
  // the signal itself at every site, for every colour.
  const int n = 8;
  Mosaic m{n, n, CfaPattern::GBRG, std::vector<float>(n * n)};
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) m.at(x, y) = 0.05f + 0.1f * static_cast<float>(x);
  const RgbImage rgb = demosaic_bilinear(m);
  for (int c = 0; c < 3; ++c)
    for (int y = 1; y < n - 1; ++y)
      for (int x = 1; x < n - 1; ++x)
        CHECK(rgb.plane(c)[static_cast<std::size_t>(y) * n + x] ==
              doctest::Approx(0.05 + 0.1 * x).epsilon(1e-6));
}

TEST_CASE("raw frames round-trip through files") {
  testing::TempDir dir("raw_io");
  BayerFrame f = frame_of(16, 12, 64, 1023, 5);
  f.iso = 3200;
  raw_io::write_frame(dir.path() / "000000.raw", f);
  const BayerFrame g = raw_io::read_frame(dir.path() / "000000.raw");
  CHECK(g.width == 16);
  CHECK(g.height == 12);
  CHECK(g.black_level == 64);
  CHECK(g.white_level == 1023);
  CHECK(g.iso == 3200);
  CHECK(g.samples == f.samples);

  std::vector<BayerFrame> clip = {f, frame_of(16, 12, 64, 1023, 6)};
  raw_io::write_clip(dir.path() / "clip", clip);
  const auto back = raw_io::read_clip(dir.path() / "clip");
  REQUIRE(back.size() == 2);
  CHECK(back[1].samples == clip[1].samples);
}

TEST_CASE("denormalize inverts normalize on sensor counts") {
  const BayerFrame f = frame_of(8, 8, 256, 4095, 8);
  const BayerFrame g = denormalize(normalize(f), f.black_level, f.white_level, f.iso);
  CHECK(g.samples == f.samples);
}
