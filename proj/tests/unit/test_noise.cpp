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
#include "rawvid/metrics/metrics.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/noise/noise_model.hpp"
#include "rawvid/noise/rng.hpp"

using namespace rawvid;

namespace {

struct Moments {
  double mean = 0, var = 0;
};

Moments moments(const std::vector<float>& v) {
  double s = 0, s2 = 0;
  for (float x : v) s += x;
  const double m = s / static_cast<double>(v.size());
  for (float x : v) s2 += (x - m) * (x - m);
  return {m, s2 / static_cast<double>(v.size() - 1)};
}

}  // namespace

TEST_CASE("zero signal with zero read noise stays zero") {
  const std::vector<float> clean(10000, 0.0f);
  const auto x = sample_noisy(clean, NoiseParams::uniform(100, 0.0, 0.1), Channel::G, {1, 2, 3, 0});
  for (float v : x) CHECK(v == 0.0f);
}

TEST_CASE("both sigmas zero is the identity") {
  std::vector<float> clean;
  for (int i = 0; i < 1000; ++i) clean.push_back(static_cast<float>(i) / 999.0f);
  CHECK(sample_noisy(clean, NoiseParams::zero(), Channel::R, {5, 0, 0, 0}) == clean);
}

TEST_CASE("Poisson-Gaussian moments at Y=0.25") {
  // Oracle: E[X] = Y and Var[X] = sigma_s^2 Y + sigma_r^2.
  const std::vector<float> clean(1000000, 0.25f);
  const auto x = sample_noisy(clean, NoiseParams::uniform(100, 0.02, 0.1), Channel::G, {11, 0, 0, 0});
  const Moments m = moments(x);
  CHECK(std::abs(m.mean - 0.25) / 0.25 < 0.005);
  CHECK(std::abs(m.var - 0.0029) / 0.0029 < 0.02);
}

TEST_CASE("noise mean within three standard errors") {
  for (double y : {0.2, 0.5, 0.7}) {
    const std::vector<float> clean(1000000, static_cast<float>(y));
    const NoiseParams p = NoiseParams::uniform(100, 0.01, std::sqrt(0.004));
    const auto x = sample_noisy(clean, p, Channel::B, {3, 1, 4, 0});
    const Moments m = moments(x);
    const double se = std::sqrt(p.variance(Channel::B, y) / 1e6);
    CHECK(std::abs(m.mean - y) < 3 * se);
    CHECK(std::abs(m.var - p.variance(Channel::B, y)) / p.variance(Channel::B, y) < 0.02);
  }
}

TEST_CASE("sampling is deterministic per SeedSpec and independent across streams") {
  const std::vector<float> clean(4096, 0.4f);
  const NoiseParams p = NoiseParams::uniform(100, 0.02, 0.05);
  const SeedSpec s{42, 7, 3, 0};
  CHECK(sample_noisy(clean, p, Channel::G, s) == sample_noisy(clean, p, Channel::G, s));
  CHECK(sample_noisy(clean, p, Channel::G, s) != sample_noisy(clean, p, Channel::G, s.with_frame(4)));
  CHECK(sample_noisy(clean, p, Channel::G, s) != sample_noisy(clean, p, Channel::R, s));
  CHECK(clip_key("a", 2500) != clip_key("a", 8000));
  CHECK(clip_key("a", 2500) == clip_key("a", 2500));
}

TEST_CASE("mosaic sampling uses each site's colour") {
  Mosaic m{64, 64, CfaPattern::GBRG, std::vector<float>(64 * 64, 0.5f)};
  NoiseParams p = NoiseParams::zero();
  p.sigma_r = {0.0, 0.0, 0.05};  // only blue is noisy
  const Mosaic x = sample_noisy(m, p, SeedSpec{1, 1, 0, 0});
  for (int y = 0; y < 64; ++y)
    for (int xx = 0; xx < 64; ++xx)
      if (gbrg_channel(xx, y) != Channel::B) CHECK(x.at(xx, y) == 0.5f);
}

TEST_CASE("calibration lookup: exact key, midpoint and clamping") {
  CalibrationTable t({NoiseParams::uniform(1000, 0.01, 0.02), NoiseParams::uniform(3000, 0.03, 0.04)});
  CHECK(params_for_iso(t, 1000) == t.entries()[0]);
  const NoiseParams mid = params_for_iso(t, 2000);
  CHECK(mid.sigma_r[0] == doctest::Approx(std::sqrt((0.01 * 0.01 + 0.03 * 0.03) / 2)));
  CHECK(mid.sigma_s[1] == doctest::Approx(std::sqrt((0.02 * 0.02 + 0.04 * 0.04) / 2)));
  CHECK(params_for_iso(t, 9000).sigma_s == t.entries()[1].sigma_s);
  CHECK(params_for_iso(t, 10).sigma_r == t.entries()[0].sigma_r);
  CHECK_THROWS_AS(params_for_iso(CalibrationTable{}, 100), Error);
}

TEST_CASE("calibration table serializes and parses") {
  const CalibrationTable t = CalibrationTable::builtin_default();
  const CalibrationTable u = CalibrationTable::parse(t.serialize());
  REQUIRE(u.entries().size() == t.entries().size());
  for (std::size_t i = 0; i < t.entries().size(); ++i) CHECK(u.entries()[i] == t.entries()[i]);
  CHECK_THROWS_AS(CalibrationTable::parse(R"({"entries": [{"iso": 200, "sigma_r": 0.1, "sigma_s": 0.1},
                                                          {"iso": 100, "sigma_r": 0.1, "sigma_s": 0.1}]})"),
                  Error);
  CHECK_THROWS_AS(CalibrationTable::parse(R"({"entries": [{"iso": 100, "sigma_r": -0.1, "sigma_s": 0.1}]})"),
                  Error);
}

TEST_CASE("least squares recovers exact linear mean-variance data") {
  std::vector<double> mean, var;
  for (double m : {0.1, 0.2, 0.35, 0.6, 0.8}) {
    mean.push_back(m);
    var.push_back(0.002 * m + 0.0001);
  }
  const MeanVarianceFit fit = fit_mean_variance(mean, var);
  CHECK(fit.slope == doctest::Approx(0.002).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.0001).epsilon(1e-10));
  const std::vector<double> flat(5, 0.0004);
  CHECK(fit_mean_variance(mean, flat).slope == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("regenerate-and-fit round trip recovers the parameters") {
  const NoiseParams truth = NoiseParams::uniform(800, 0.01, std::sqrt(0.004));
  std::vector<Mosaic> frames;
  // 5 flat levels across the width, 128 frames deep.
  const int w = 320, h = 64;
  for (int f = 0; f < 128; ++f) {
    Mosaic m{w, h, CfaPattern::GBRG, std::vector<float>(static_cast<std::size_t>(w) * h)};
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) m.at(x, y) = 0.1f + 0.15f * static_cast<float>(x / 64);
    frames.push_back(sample_noisy(m, truth, SeedSpec{9, 1, static_cast<std::uint64_t>(f), 0}));
  }
  const auto stacks = flat_stacks_from_frames(frames);
  const NoiseParams est = estimate_params(stacks, 800);
  for (int c = 0; c < 3; ++c) {
    CHECK(std::abs(est.sigma_s[c] * est.sigma_s[c] - 0.004) / 0.004 < 0.05);
    CHECK(std::abs(est.sigma_r[c] - 0.01) / 0.01 < 0.05);
  }
}

TEST_CASE("residual helpers") {
  const std::vector<float> y = {0.1f, 0.2f, 0.3f};
  for (float r : noise_residual(y, y)) CHECK(r == 0.0f);
  const std::vector<float> x = {0.2f, 0.3f, 0.4f};
  for (float r : noise_residual(x, y)) CHECK(r == doctest::Approx(0.1f).epsilon(1e-6));
}

TEST_CASE("pure read noise residual matches the analytic Gaussian histogram") {
  const std::vector<float> clean(500000, 0.5f);
  const auto x = sample_noisy(clean, NoiseParams::uniform(100, 0.03, 0.0), Channel::G, {77, 0, 0, 0});
  Histogram h = default_residual_binning();
  h.add_all(noise_residual(x, clean));
  const Histogram model = model_residual_histogram(0.5, 0.0, 0.03, default_residual_binning());
  CHECK(kl_divergence(h, model) < 0.05);
}

TEST_CASE("counter rng draws") {
  const CounterRng r(123);
  CHECK(r.bits(5) == r.bits(5));
  CHECK(r.bits(5) != r.bits(6));
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const double u = r.uniform(c);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    CHECK(r.below(10, c) < 10u);
  }
  CHECK(r.poisson(0.0, 3) == 0.0);
}
