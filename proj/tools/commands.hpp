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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rawvid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// Line-delimited JSON records, flushed at exit to stdout or a file.
class Report {
 public:
  void record(const json& j) { text_ += j.dump() + "\n"; }
  void line(const std::string& s) { text_ += s; }
  const std::string& text() const { return text_; }
  void flush(const std::string& path) const;

 private:
  std::string text_;
};

struct Context {
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  bool dry_run = false;
  std::string report_path;
  Report report;
  std::vector<std::string> warnings;
};

struct CalibrateArgs {
  std::string frames, table, out;
  std::optional<double> iso;
};
struct NoiseArgs {
  std::optional<double> iso;
  std::string preset;
  std::string calibration;
};
struct SynthArgs {
  std::string in, out, clip_id;
  NoiseArgs noise;
};
struct RenderArgs {
  std::string in, out, isp;
  std::vector<std::string> disable;
  NoiseArgs noise;
};
struct DatasetArgs {
  std::string in, out, isp;
  NoiseArgs noise;
  std::size_t patches = 0;
  int patch_size = 256;
  bool no_augment = false;
  double split_ratio = 0.9;
};
struct MetricsArgs {
  std::string a, b;
  double peak = 1.0;
};
struct FlowArgs {
  std::string in, out, dump;
  int levels = 4, window = 15, iterations = 3;
  int magnitude_bins = 64, phase_bins = 72;
  double magnitude_max = 32.0, min_magnitude = 0.1;
};
struct RvdtArgs {
  std::string config, weights, clip, out;
  std::optional<double> noise_level;
  bool zero = false;
};

void run_calibrate(Context& ctx, const CalibrateArgs& a);
void run_synth(Context& ctx, const SynthArgs& a);
void run_render(Context& ctx, const RenderArgs& a);
void run_dataset(Context& ctx, const DatasetArgs& a);
void run_metrics(Context& ctx, const MetricsArgs& a);
void run_flow(Context& ctx, const FlowArgs& a);
void run_rvdt_run(Context& ctx, const RvdtArgs& a);
// Returns false when any invariant fails.
bool run_rvdt_check(Context& ctx, const RvdtArgs& a);
void run_rvdt_params(Context& ctx, const RvdtArgs& a);
void run_rvdt_init(Context& ctx, const RvdtArgs& a);

}  // namespace rawvid::cli
