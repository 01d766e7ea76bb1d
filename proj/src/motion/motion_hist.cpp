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

#include "rawvid/motion/motion_hist.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rawvid/error.hpp"

namespace rawvid {

MotionHistogram make_motion_histogram(const MotionHistogramConfig& cfg) {
  require(cfg.magnitude_bins > 0 && cfg.magnitude_max > 0 && cfg.phase_bins > 0, ErrorKind::Parameter,
          "invalid motion histogram configuration");
  std::vector<double> edges(static_cast<std::size_t>(cfg.magnitude_bins) + 2);
  for (int i = 0; i <= cfg.magnitude_bins; ++i) edges[i] = cfg.magnitude_max * i / cfg.magnitude_bins;
  edges.back() = 1e30;  // overflow
  MotionHistogram h;
  h.config = cfg;
  h.magnitude = Histogram(std::move(edges));
  h.phase = Histogram::uniform(-std::numbers::pi, std::numbers::pi, cfg.phase_bins);
  return h;
}

void MotionHistogram::merge(const MotionHistogram& other) {
  magnitude.merge(other.magnitude);
  phase.merge(other.phase);
  pixels += other.pixels;
}

MotionHistogram motion_histograms(std::span<const FlowField> flows, const MotionHistogramConfig& cfg) {
  require(!flows.empty(), ErrorKind::Parameter, "no flow fields to aggregate");
  MotionHistogram h = make_motion_histogram(cfg);
  for (const auto& f : flows) {
    require(f.u.size() == f.v.size() && f.u.size() == static_cast<std::size_t>(f.width) * f.height,
            ErrorKind::Shape, "flow field buffers do not match their size");
    for (std::size_t i = 0; i < f.u.size(); ++i) {
      const double u = f.u[i], v = f.v[i];
      const double mag = std::sqrt(u * u + v * v);
      h.magnitude.add(mag);
      if (mag >= cfg.phase_min_magnitude) h.phase.add(std::atan2(v, u));
    }
    h.pixels += f.u.size();
  }
  return h;
}

std::string format_motion_table(const MotionHistogram& h) {
  std::ostringstream out;
  out << "# motion statistics\n";
  out << "# pixels " << h.pixels << "\n";
  out << "# magnitude_bins " << h.config.magnitude_bins << " range_px 0 " << h.config.magnitude_max
      << " overflow_bin 1\n";
  out << "# phase_bins " << h.config.phase_bins << " range_rad -pi pi min_magnitude_px "
      << h.config.phase_min_magnitude << "\n";
  out << "# kind lo hi count fraction\n";
  const auto write = [&](const char* kind, const Histogram& hist) {
    const auto norm = hist.normalized();
    for (int i = 0; i < hist.bins(); ++i) {
      out << kind << ' ' << hist.edges()[i] << ' ';
      if (hist.edges()[i + 1] >= 1e29) out << "inf";
      else out << hist.edges()[i + 1];
      out << ' ' << static_cast<long long>(std::llround(hist.counts()[i])) << ' ' << norm[i] << '\n';
    }
  };
  write("magnitude", h.magnitude);
  write("phase", h.phase);
  return out.str();
}

}  // namespace rawvid
