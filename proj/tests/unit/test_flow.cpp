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
#include "rawvid/motion/flow.hpp"
#include "rawvid/motion/motion_hist.hpp"
#include "synthetic.hpp"

using namespace rawvid;
using rawvid::testing::median;

namespace {

// Median flow over the interior, away from the reflect-padded borders.
std::pair<double, double> median_flow(const FlowField& f, int margin) {
  std::vector<double> u, v;
  for (int y = margin; y < f.height - margin; ++y)
    for (int x = margin; x < f.width - margin; ++x) {
      u.push_back(f.u[static_cast<std::size_t>(y) * f.width + x]);
      v.push_back(f.v[static_cast<std::size_t>(y) * f.width + x]);
    }
  return {median(u), median(v)};
}

FlowField uniform_flow(int w, int h, float u, float v) {
  return {w, h, std::vector<float>(static_cast<std::size_t>(w) * h, u), std::vector<float>(static_cast<std::size_t>(w) * h, v)};
}

}  // namespace

TEST_CASE("identical frames give zero flow") {
  const GrayImage f0 = testing::textured_gray(128, 128);
  const FlowField f = dense_flow(f0, f0);
  std::vector<double> mag;
  for (std::size_t i = 0; i < f.u.size(); ++i) mag.push_back(std::hypot(f.u[i], f.v[i]));
  CHECK(median(mag) < 0.05);
}

TEST_CASE("global translations are recovered") {
  const GrayImage f0 = testing::textured_gray(192, 160);
  for (auto [dx, dy] : {std::pair{3, 0}, {0, -2}, {-4, 6}, {8, 0}}) {
    CAPTURE(dx);
    CAPTURE(dy);
    const FlowField f = dense_flow(f0, testing::shift_reflect(f0, dx, dy));
    const auto [mu, mv] = median_flow(f, 16);
    CHECK(std::abs(mu - dx) < 0.5);
    CHECK(std::abs(mv - dy) < 0.5);
  }
}

TEST_CASE("polynomial expansion of a quadratic surface") {
  // f(x, y) = 0.001 x^2 + 0.002 y^2 + 0.0005 x y + 0.01 x - 0.02 y + 0.3:
  // at every interior pixel A = [[0.001, 0.00025], [0.00025, 0.002]] and
  // b = grad at that pixel (the surface is stored divided by 10).
  GrayImage g{48, 48, std::vector<float>(48 * 48)};
  auto f = [](double x, double y) { return 0.001 * x * x + 0.002 * y * y + 0.0005 * x * y + 0.01 * x - 0.02 * y + 0.3; };
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 48; ++x) g.data[static_cast<std::size_t>(y) * 48 + x] = static_cast<float>(f(x, y) / 10.0);
  const PolyExpansion p = polynomial_expansion(g, 5, 1.1);
  const std::size_t i = 24 * 48 + 20;
  const double s = 1.0 / 10.0;
  CHECK(p.a11[i] == doctest::Approx(0.001 * s).epsilon(1e-3));
  CHECK(p.a22[i] == doctest::Approx(0.002 * s).epsilon(1e-3));
  CHECK(p.a12[i] == doctest::Approx(0.00025 * s).epsilon(1e-3));
  CHECK(p.b1[i] == doctest::Approx((0.002 * 20 + 0.0005 * 24 + 0.01) * s).epsilon(1e-3));
  CHECK(p.b2[i] == doctest::Approx((0.004 * 24 + 0.0005 * 20 - 0.02) * s).epsilon(1e-3));
}

TEST_CASE("flow rejects mismatched or too small inputs") {
  const GrayImage a = testing::textured_gray(64, 64), b = testing::textured_gray(32, 64);
  CHECK_THROWS_AS(dense_flow(a, b), Error);
  const GrayImage tiny = testing::textured_gray(8, 8);
  CHECK_THROWS_AS(dense_flow(tiny, tiny), Error);
}

TEST_CASE("zero flow histogram") {
  const FlowField f = uniform_flow(16, 16, 0, 0);
  const MotionHistogram h = motion_histograms(std::span(&f, 1));
  CHECK(h.pixels == 256);
  CHECK(h.magnitude.counts()[0] == 256.0);
  CHECK(h.phase.total() == 0.0);
}

TEST_CASE("uniform (3,0) flow lands in one magnitude and one phase bin") {
  const FlowField f = uniform_flow(8, 8, 3, 0);
  const MotionHistogram h = motion_histograms(std::span(&f, 1));
  const int mb = h.magnitude.bin_of(3.0);
  CHECK(h.magnitude.edges()[mb] <= 3.0);
  CHECK(h.magnitude.edges()[mb + 1] > 3.0);
  CHECK(h.magnitude.counts()[mb] == 64.0);
  const int pb = h.phase.bin_of(0.0);
  CHECK(h.phase.counts()[pb] == 64.0);
  CHECK(h.phase.total() == 64.0);
}

TEST_CASE("phase mass splits between 0 and pi/2") {
  const std::vector<FlowField> flows = {uniform_flow(8, 8, 1, 0), uniform_flow(8, 8, 0, 1)};
  const MotionHistogram h = motion_histograms(flows);
  const auto p = h.phase.normalized();
  CHECK(p[h.phase.bin_of(0.0)] == doctest::Approx(0.5));
  CHECK(p[h.phase.bin_of(1.5707963267948966)] == doctest::Approx(0.5));
}

TEST_CASE("histograms do not depend on frame order") {
  const GrayImage f0 = testing::textured_gray(96, 96);
  std::vector<FlowField> flows = {dense_flow(f0, testing::shift_reflect(f0, 2, 1)), uniform_flow(96, 96, 0.5f, -4),
                                  uniform_flow(96, 96, 40, 0)};
  const MotionHistogram a = motion_histograms(flows);
  std::reverse(flows.begin(), flows.end());
  const MotionHistogram b = motion_histograms(flows);
  CHECK(a.magnitude.counts() == b.magnitude.counts());
  CHECK(a.phase.counts() == b.phase.counts());
  // 40 px lands in the overflow bin.
  CHECK(a.magnitude.counts().back() == 96.0 * 96.0);
  CHECK(format_motion_table(a) == format_motion_table(b));
}
