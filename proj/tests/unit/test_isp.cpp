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

#include "rawvid/error.hpp"
#include "rawvid/isp/color.hpp"
#include "rawvid/isp/isp.hpp"
#include "rawvid/isp/isp_config.hpp"
#include "synthetic.hpp"

using namespace rawvid;

namespace {

void check_identity(const ColorMatrix& m, double tol) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(std::abs(m(r, c) - (r == c ? 1.0 : 0.0)) <= tol);
}

}  // namespace

TEST_CASE("gray-world gains") {
  const WhiteBalance wb = gray_world({0.2, 0.4, 0.1});
  CHECK(wb.gains[0] == doctest::Approx(2.0));
  CHECK(wb.gains[1] == doctest::Approx(1.0));
  CHECK(wb.gains[2] == doctest::Approx(4.0));
  RgbImage gray(4, 4, ColorSpace::CameraRgb);
  for (float& v : gray.data) v = 0.3f;
  for (double g : auto_white_balance(gray).gains) CHECK(g == doctest::Approx(1.0));
  CHECK_THROWS_AS(gray_world({0.0, 0.1, 0.1}), Error);
}

TEST_CASE("McCamy CCT of the standard illuminants") {
  CHECK(std::abs(color::mccamy_cct(0.3127, 0.3290) - 6504) <= 50);
  CHECK(std::abs(color::mccamy_cct(0.4476, 0.4074) - 2856) <= 60);
  CHECK(color::mccamy_cct(0.3127, 0.3290) == color::mccamy_cct(0.3127, 0.3290));
  CHECK_THROWS_AS(color::mccamy_cct(0.3, 0.1), Error);
  // XYZ form of D65 gives the same answer.
  CHECK(std::abs(estimate_cct(color::kD65) - 6504) <= 50);
}

TEST_CASE("CCM interpolation endpoints and mired midpoint") {
  const IspConfig cfg = IspConfig::defaults();
  CHECK(interpolate_ccm(cfg, cfg.ccm_low.temperature) == cfg.ccm_low.matrix);
  CHECK(interpolate_ccm(cfg, cfg.ccm_high.temperature) == cfg.ccm_high.matrix);
  const double mid = 1.0 / ((1.0 / 2856.0 + 1.0 / 6504.0) / 2.0);
  CHECK(mired_midpoint(cfg) == doctest::Approx(mid));
  const ColorMatrix m = interpolate_ccm(cfg, mid);
  for (int i = 0; i < 9; ++i)
    CHECK(m.m[i] == doctest::Approx((cfg.ccm_low.matrix.m[i] + cfg.ccm_high.matrix.m[i]) / 2).epsilon(1e-12));
  // Convex combination for any temperature, including outside the range.
  for (double t = 1500; t < 30000; t *= 1.1) {
    const ColorMatrix x = interpolate_ccm(cfg, t);
    for (int i = 0; i < 9; ++i) {
      const double lo = std::min(cfg.ccm_low.matrix.m[i], cfg.ccm_high.matrix.m[i]);
      const double hi = std::max(cfg.ccm_low.matrix.m[i], cfg.ccm_high.matrix.m[i]);
      CHECK(x.m[i] >= lo - 1e-15);
      CHECK(x.m[i] <= hi + 1e-15);
    }
  }
}

TEST_CASE("colour space matrices compose to identity") {
  check_identity(color::xyz_to_prophoto() * color::prophoto_to_xyz(), 1e-5);
  check_identity(color::xyz_to_srgb() * color::srgb_to_xyz(), 1e-5);
  check_identity(color::bradford(color::kD50, color::kD65) * color::bradford(color::kD65, color::kD50), 1e-5);
  check_identity(color::prophoto_to_srgb() * color::prophoto_to_srgb().inverse(), 1e-5);
  const IspConfig cfg = IspConfig::defaults();
  check_identity(cfg.ccm_low.matrix * cfg.ccm_low.matrix.inverse(), 1e-5);
}

TEST_CASE("D50 white maps to ProPhoto (1,1,1)") {
  for (double v : color::xyz_to_prophoto().apply(color::kD50)) CHECK(std::abs(v - 1.0) < 1e-3);
  for (double v : color::xyz_to_srgb().apply(color::kD65)) CHECK(std::abs(v - 1.0) < 1e-3);
}

TEST_CASE("black stays black through every matrix stage") {
  RgbImage img(2, 2, ColorSpace::CameraRgb);
  img = camera_to_xyz(std::move(img), IspConfig::defaults().ccm_low.matrix);
  img = xyz_to_prophoto(std::move(img));
  img = prophoto_to_srgb_linear(std::move(img));
  for (float v : img.data) CHECK(v == 0.0f);
}

TEST_CASE("space tags are enforced") {
  RgbImage img(2, 2, ColorSpace::CameraRgb);
  try {
    xyz_to_prophoto(img);
    FAIL("expected a space mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpaceMismatch);
  }
}

TEST_CASE("ACES fit tonemap") {
  CHECK(tonemap_value(0.0, TonemapCurve::AcesFit) == 0.0);
  CHECK(tonemap_value(1.0, TonemapCurve::AcesFit) == doctest::Approx(2.54 / 3.16).epsilon(1e-12));
  CHECK(std::abs(tonemap_value(1.0, TonemapCurve::AcesFit) - 0.80380) <= 1e-4);
  double prev = -1;
  for (int i = 0; i <= 10000; ++i) {
    const double v = tonemap_value(i * 1e-3, TonemapCurve::AcesFit);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(tonemap_value(1e9, TonemapCurve::AcesFit) <= 1.0);
  RgbImage neg(1, 1, ColorSpace::ProPhoto);
  neg.data = {-0.1f, 0.2f, 0.3f};
  CHECK_THROWS_AS(tonemap(neg, TonemapCurve::AcesFit), Error);
  CHECK(tonemap(neg, TonemapCurve::AcesFit, NegativePolicy::ClampToZero).data[0] == 0.0f);
}

TEST_CASE("sRGB transfer function") {
  CHECK(color::srgb_encode(0.0) == 0.0);
  CHECK(color::srgb_encode(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double t = 0.0031308;
  const double lin = 12.92 * t, pow_branch = 1.055 * std::pow(t, 1 / 2.4) - 0.055;
  CHECK(std::abs(lin - pow_branch) < 1e-6);
  CHECK(std::abs(color::srgb_encode(t) - 0.04045) < 1e-6);
  CHECK(color::srgb_encode(0.18) == doctest::Approx(1.055 * std::pow(0.18, 1 / 2.4) - 0.055));
  CHECK(color::srgb_encode(0.18) == doctest::Approx(0.4613).epsilon(1e-3));
  for (double v = 0; v <= 1.0; v += 0.01) CHECK(color::srgb_decode(color::srgb_encode(v)) == doctest::Approx(v));
}

TEST_CASE("quantize rounds half away from zero") {
  RgbImage img(2, 1, ColorSpace::SrgbEncoded);
  img.data = {0.5f / 255.0f, 1.0f, 0.0f, 0.0f, 2.0f, -1.0f};
  const Rgb8Image q = quantize(img);
  CHECK(q.data[0] == 1);
  CHECK(q.data[3] == 255);
  CHECK(q.data[1] == 0);
  CHECK(q.data[5] == 0);
}

TEST_CASE("noiseless render of a gray ramp is monotone per channel") {
  BayerFrame f;
  f.width = 64;
  f.height = 8;
  f.black_level = 0;
  f.white_level = 4095;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 64; ++x) f.samples.push_back(static_cast<std::uint16_t>(100 + 50 * (x / 2)));
  IspConfig cfg = IspConfig::defaults();
  cfg.wb_gains = std::array<double, 3>{1.0, 1.0, 1.0};
  const Rgb8Image out = render(f, std::nullopt, cfg, {});
  for (int y = 1; y < 7; ++y)
    for (int x = 2; x < 62; ++x)
      for (int c = 0; c < 3; ++c)
        CHECK(out.data[(static_cast<std::size_t>(y) * 64 + x + 1) * 3 + c] >=
              out.data[(static_cast<std::size_t>(y) * 64 + x) * 3 + c]);
}

TEST_CASE("render is deterministic and zero noise equals the clean render") {
  const BayerFrame f = testing::scene_frame(64, 48, 0, 0);
  const IspConfig cfg = IspConfig::defaults();
  const SeedSpec s{3, 4, 0, 0};
  CHECK(render(f, std::nullopt, cfg, s).data == render(f, std::nullopt, cfg, s).data);
  CHECK(render(f, NoiseParams::zero(), cfg, s).data == render(f, std::nullopt, cfg, s).data);
  const NoiseParams p = NoiseParams::uniform(3200, 0.01, 0.05);
  CHECK(render(f, p, cfg, s).data == render(f, p, cfg, s).data);
  CHECK(render(f, p, cfg, s).data != render(f, std::nullopt, cfg, s).data);
}

TEST_CASE("disabling colour temperature or tonemapping changes the render") {
  const BayerFrame f = testing::scene_frame(64, 48, 0, 0);
  const IspConfig full = IspConfig::defaults();
  const auto base = render(f, std::nullopt, full, {}).data;
  IspConfig no_ct = full;
  disable_stage(no_ct, kStageColorTemp);
  IspConfig no_tm = full;
  disable_stage(no_tm, kStageTonemap);
  CHECK(render(f, std::nullopt, no_ct, {}).data != base);
  CHECK(render(f, std::nullopt, no_tm, {}).data != base);
  CHECK_THROWS_AS(disable_stage(no_tm, "demosaic"), Error);
}

TEST_CASE("ISP config round trips and validates") {
  const IspConfig cfg = IspConfig::defaults();
  CHECK(IspConfig::parse(cfg.serialize()) == cfg);
  CHECK(IspConfig::parse(cfg.serialize()).digest() == cfg.digest());
  CHECK_THROWS_AS(IspConfig::parse(R"({"tonemap": "filmic"})"), Error);
  CHECK_THROWS_AS(IspConfig::parse("{not json"), Error);
  const auto& order = render_stage_order();
  CHECK(order.front() == "normalize");
  CHECK(order.back() == "quantize");
}
