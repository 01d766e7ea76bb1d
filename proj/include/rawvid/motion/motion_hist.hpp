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

#include <span>
#include <string>

#include "rawvid/metrics/histogram.hpp"
#include "rawvid/motion/flow.hpp"

namespace rawvid {

struct MotionHistogramConfig {
  int magnitude_bins = 64;
  double magnitude_max = 32.0;  // px; one extra overflow bin above this
  int phase_bins = 72;          // over [-pi, pi]
  double phase_min_magnitude = 0.1;
};

struct MotionHistogram {
  MotionHistogramConfig config;
  Histogram magnitude;
  Histogram phase;
  std::size_t pixels = 0;  // total pixels aggregated

  void merge(const MotionHistogram& other);
};

MotionHistogram make_motion_histogram(const MotionHistogramConfig& cfg = {});
MotionHistogram motion_histograms(std::span<const FlowField> flows, const MotionHistogramConfig& cfg = {});

// Plain-text table: a '#' header with the binning, then one line per bin.
std::string format_motion_table(const MotionHistogram& h);

}  // namespace rawvid
