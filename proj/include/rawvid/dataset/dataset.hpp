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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rawvid/isp/isp.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/raw/bayer.hpp"

namespace rawvid {

enum class NoisePreset { Heavy, Medium, Light };

// Heavy = ISO 20000, Medium = 8000, Light = 2500.
double preset_iso(NoisePreset preset);
NoisePreset parse_preset(std::string_view name);  // case-insensitive
std::string to_string(NoisePreset preset);

inline constexpr int kManifestVersion = 1;

// Everything needed to regenerate a clip's noisy streams.
struct ClipManifest {
  std::string clip_id;
  std::optional<NoisePreset> preset;
  double iso_requested = 0.0;
  double iso = 0.0;  // after clamping to the calibration range
  bool iso_clamped = false;
  NoiseParams params;
  std::uint64_t seed = 0;
  std::uint64_t clip_key = 0;
  IspConfig isp;
  std::uint64_t isp_digest = 0;
  std::array<double, 3> wb_gains{1.0, 1.0, 1.0};
  double cct = 0.0;
  std::size_t frames = 0;
  int width = 0;
  int height = 0;

  SeedSpec seed_spec() const { return {seed, clip_key, 0, 0}; }
  std::string serialize() const;
  static ClipManifest parse(const std::string& text);
};

struct ClipPair {
  std::vector<BayerFrame> clean_raw;
  std::vector<BayerFrame> noisy_raw;
  std::vector<Rgb8Image> clean_srgb;
  std::vector<Rgb8Image> noisy_srgb;
  ClipManifest manifest;
  std::vector<std::string> warnings;
};

// Resolves ISO clamping, noise parameters, seeds and the per-clip ISP state
// (from the first clean frame). Clamping is reported through warnings.
ClipManifest make_manifest(const std::string& clip_id, const std::vector<BayerFrame>& clean, double iso,
                           const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed,
                           std::vector<std::string>* warnings = nullptr);

// Synthesizes the noisy RAW stream and renders both streams through the same
// ISP state, resolved once per clip from the first clean frame.
ClipPair build_pair(const std::string& clip_id, const std::vector<BayerFrame>& clean, double iso,
                    const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed);
ClipPair build_pair(const std::string& clip_id, const std::vector<BayerFrame>& clean, NoisePreset preset,
                    const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed);

// Noisy RAW frames reproduced from a manifest; bit-identical to build_pair.
std::vector<BayerFrame> regenerate_noisy(const std::vector<BayerFrame>& clean, const ClipManifest& manifest);

// A spatio-temporal training patch: one crop applied to every frame of a pair.
// Origin is in packed (half-resolution) coordinates; size is in mosaic pixels.
struct PatchSpec {
  int packed_x = 0;
  int packed_y = 0;
  int size = 256;
  int rotation = 0;  // counter-clockwise quarter turns
  bool flip_h = false;
  bool flip_v = false;

  int mosaic_x() const { return 2 * packed_x; }
  int mosaic_y() const { return 2 * packed_y; }
};

struct Patch {
  PatchSpec spec;
  std::vector<PackedRaw> clean_raw;  // per frame, size/2 square
  std::vector<PackedRaw> noisy_raw;
  std::vector<Rgb8Image> clean_srgb;  // per frame, size square
  std::vector<Rgb8Image> noisy_srgb;
};

std::vector<PatchSpec> sample_patch_specs(int mosaic_width, int mosaic_height, int size, std::size_t count,
                                          std::uint64_t seed, bool augment);
std::vector<Patch> extract_patches(const ClipPair& pair, int size, std::size_t count, std::uint64_t seed,
                                   bool augment);
// Exposed for tests: the augmentation applied to one square planar buffer.
std::vector<float> augment_planar(std::span<const float> src, int planes, int side, const PatchSpec& spec);

struct SplitManifest {
  std::vector<std::string> train;
  std::vector<std::string> test;
  double ratio = 0.9;
  std::uint64_t seed = 0;

  std::string serialize() const;
  static SplitManifest parse(const std::string& text);
};

// Seeded shuffle of the sorted ids, then |train| = round(ratio * n).
SplitManifest split_dataset(std::vector<std::string> clip_ids, double ratio, std::uint64_t seed);

struct ClipWindow {
  std::size_t start = 0;
  std::size_t length = 0;
};

// Non-overlapping windows drawn uniformly among all placements, in
// increasing start order. Emits fewer (with a warning) when the video cannot
// hold clips_per_video disjoint windows.
std::vector<ClipWindow> select_training_clips(std::size_t video_length, int clips_per_video,
                                              std::size_t clip_len, std::uint64_t seed,
                                              std::vector<std::string>* warnings = nullptr);

struct DatasetOptions {
  std::filesystem::path input;   // one sub-directory of RAW frames per clip
  std::filesystem::path output;
  std::optional<double> iso;
  std::optional<NoisePreset> preset;
  std::size_t patches = 0;  // per clip
  int patch_size = 256;
  bool augment = true;
  double split_ratio = 0.9;
  std::uint64_t seed = 0;
  IspConfig isp = IspConfig::defaults();
  CalibrationTable table = CalibrationTable::builtin_default();
  bool dry_run = false;
};

struct DatasetSummary {
  std::vector<std::string> clips;
  std::size_t frames = 0;
  std::size_t patches = 0;
  SplitManifest split;
  std::vector<std::string> warnings;
};

// Writes <output>/<clip>/{clean_raw,noisy_raw,clean_srgb,noisy_srgb}/NNNNNN.*,
// <output>/<clip>/manifest.json, optional <output>/<clip>/patches/ and
// <output>/split.json. With dry_run nothing is written.
DatasetSummary run_dataset(const DatasetOptions& options);

}  // namespace rawvid
