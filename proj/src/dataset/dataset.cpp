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

#include "rawvid/dataset/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <json.hpp>
#include <sstream>

#include "rawvid/error.hpp"
#include "rawvid/io/png_io.hpp"
#include "rawvid/io/text_io.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/raw/raw_io.hpp"

namespace rawvid {

using nlohmann::json;
namespace fs = std::filesystem;

double preset_iso(NoisePreset preset) {
  switch (preset) {
    case NoisePreset::Heavy: return 20000.0;
    case NoisePreset::Medium: return 8000.0;
    case NoisePreset::Light: return 2500.0;
  }
  return 0.0;
}

NoisePreset parse_preset(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "heavy") return NoisePreset::Heavy;
  if (lower == "medium") return NoisePreset::Medium;
  if (lower == "light") return NoisePreset::Light;
  fail(ErrorKind::Usage, "unknown noise preset '" + std::string(name) + "' (heavy, medium, light)");
}

std::string to_string(NoisePreset preset) {
  switch (preset) {
    case NoisePreset::Heavy: return "heavy";
    case NoisePreset::Medium: return "medium";
    case NoisePreset::Light: return "light";
  }
  return "?";
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  require(s.size() == 16, ErrorKind::Config, "expected a 16 digit hex value, got '" + s + "'");
  return std::stoull(s, nullptr, 16);
}

}  // namespace

std::string ClipManifest::serialize() const {
  json j;
  j["format_version"] = kManifestVersion;
  j["clip_id"] = clip_id;
  j["preset"] = preset ? json(to_string(*preset)) : json(nullptr);
  j["iso_requested"] = iso_requested;
  j["iso"] = iso;
  j["iso_clamped"] = iso_clamped;
  j["sigma_r"] = params.sigma_r;
  j["sigma_s"] = params.sigma_s;
  j["seed"] = seed;
  j["clip_key"] = hex64(clip_key);
  j["isp"] = json::parse(isp.serialize());
  j["isp_digest"] = hex64(isp_digest);
  j["wb_gains"] = wb_gains;
  j["cct"] = cct;
  j["frames"] = frames;
  j["width"] = width;
  j["height"] = height;
  return j.dump(2) + "\n";
}

ClipManifest ClipManifest::parse(const std::string& text) {
  try {
    const json j = json::parse(text);
    require(j.at("format_version").get<int>() == kManifestVersion, ErrorKind::Config,
            "unsupported manifest version");
    ClipManifest m;
    m.clip_id = j.at("clip_id").get<std::string>();
    if (!j.at("preset").is_null()) m.preset = parse_preset(j.at("preset").get<std::string>());
    m.iso_requested = j.at("iso_requested").get<double>();
    m.iso = j.at("iso").get<double>();
    m.iso_clamped = j.at("iso_clamped").get<bool>();
    m.params.iso = m.iso;
    m.params.sigma_r = j.at("sigma_r").get<std::array<double, 3>>();
    m.params.sigma_s = j.at("sigma_s").get<std::array<double, 3>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.clip_key = parse_hex64(j.at("clip_key").get<std::string>());
    m.isp = IspConfig::parse(j.at("isp").dump());
    m.isp_digest = parse_hex64(j.at("isp_digest").get<std::string>());
    require(m.isp_digest == m.isp.digest(), ErrorKind::Config, "manifest ISP digest does not match its config");
    m.wb_gains = j.at("wb_gains").get<std::array<double, 3>>();
    m.cct = j.at("cct").get<double>();
    m.frames = j.at("frames").get<std::size_t>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.params.validate();
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid clip manifest: ") + e.what());
  }
}

namespace {

void check_clip(const std::vector<BayerFrame>& clean) {
  require(!clean.empty(), ErrorKind::Shape, "clip has no frames");
  for (const auto& f : clean) {
    f.validate();
    require(f.width == clean.front().width && f.height == clean.front().height, ErrorKind::Shape,
            "clip frames differ in size");
  }
}

BayerFrame noisy_frame(const BayerFrame& clean, const NoiseParams& params, const SeedSpec& seed) {
  const Mosaic noisy = sample_noisy(normalize(clean), params, seed);
  return denormalize(noisy, clean.black_level, clean.white_level, params.iso);
}

}  // namespace

std::vector<BayerFrame> regenerate_noisy(const std::vector<BayerFrame>& clean, const ClipManifest& manifest) {
  check_clip(clean);
  require(clean.size() == manifest.frames, ErrorKind::Shape, "clip length does not match its manifest");
  std::vector<BayerFrame> out(clean.size());
  const SeedSpec base = manifest.seed_spec();
  parallel_for(clean.size(), [&](std::size_t i) { out[i] = noisy_frame(clean[i], manifest.params, base.with_frame(i)); });
  return out;
}

ClipManifest make_manifest(const std::string& clip_id, const std::vector<BayerFrame>& clean, double iso,
                           const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed,
                           std::vector<std::string>* warnings) {
  check_clip(clean);
  isp.validate();
  require(!table.empty(), ErrorKind::Calibration, "calibration table is empty");
  require(std::isfinite(iso) && iso > 0.0, ErrorKind::Parameter, "ISO must be positive");
  ClipManifest m;
  m.clip_id = clip_id;
  m.iso_requested = iso;
  m.iso = std::clamp(iso, table.min_iso(), table.max_iso());
  m.iso_clamped = m.iso != iso;
  if (m.iso_clamped && warnings) {
    std::ostringstream w;
    w << clip_id << ": ISO " << iso << " outside calibrated range, clamped to " << m.iso;
    warnings->push_back(w.str());
  }
  m.params = params_for_iso(table, m.iso);
  m.params.iso = m.iso;
  m.seed = seed;
  m.clip_key = clip_key(clip_id, m.iso);
  m.isp = isp;
  m.isp_digest = isp.digest();
  m.frames = clean.size();
  m.width = clean.front().width;
  m.height = clean.front().height;
  const ResolvedIsp state = resolve_isp(normalize(clean.front()), isp);
  m.wb_gains = state.wb.gains;
  m.cct = state.cct;
  return m;
}

ClipPair build_pair(const std::string& clip_id, const std::vector<BayerFrame>& clean, double iso,
                    const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed) {
  ClipPair pair;
  pair.manifest = make_manifest(clip_id, clean, iso, isp, table, seed, &pair.warnings);
  const ClipManifest& m = pair.manifest;
  const ResolvedIsp state = resolve_isp(normalize(clean.front()), isp);

  const std::size_t n = clean.size();
  pair.clean_raw = clean;
  pair.noisy_raw.resize(n);
  pair.clean_srgb.resize(n);
  pair.noisy_srgb.resize(n);
  const SeedSpec base = m.seed_spec();
  parallel_for(n, [&](std::size_t i) {
    pair.noisy_raw[i] = noisy_frame(clean[i], m.params, base.with_frame(i));
    pair.clean_srgb[i] = render_mosaic(normalize(clean[i]), isp, state);
    pair.noisy_srgb[i] = render_mosaic(normalize(pair.noisy_raw[i]), isp, state);
  });
  return pair;
}

ClipPair build_pair(const std::string& clip_id, const std::vector<BayerFrame>& clean, NoisePreset preset,
                    const IspConfig& isp, const CalibrationTable& table, std::uint64_t seed) {
  ClipPair pair = build_pair(clip_id, clean, preset_iso(preset), isp, table, seed);
  pair.manifest.preset = preset;
  return pair;
}

std::string SplitManifest::serialize() const {
  json j;
  j["ratio"] = ratio;
  j["seed"] = seed;
  j["train"] = train;
  j["test"] = test;
  return j.dump(2) + "\n";
}

SplitManifest SplitManifest::parse(const std::string& text) {
  try {
    const json j = json::parse(text);
    SplitManifest s;
    s.ratio = j.at("ratio").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.train = j.at("train").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid split manifest: ") + e.what());
  }
}

SplitManifest split_dataset(std::vector<std::string> clip_ids, double ratio, std::uint64_t seed) {
  require(!clip_ids.empty(), ErrorKind::Parameter, "no clips to split");
  require(clip_ids.size() >= 2, ErrorKind::Parameter, "splitting needs at least two clips");
  require(ratio >= 0.0 && ratio <= 1.0, ErrorKind::Parameter, "split ratio must lie in [0,1]");
  std::sort(clip_ids.begin(), clip_ids.end());
  require(std::adjacent_find(clip_ids.begin(), clip_ids.end()) == clip_ids.end(), ErrorKind::Parameter,
          "duplicate clip id");
  const CounterRng rng(splitmix64(seed ^ 0x73706c6974ull));
  for (std::size_t i = clip_ids.size() - 1; i > 0; --i) std::swap(clip_ids[i], clip_ids[rng.below(i + 1, i)]);
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(clip_ids.size())));
  SplitManifest s;
  s.ratio = ratio;
  s.seed = seed;
  s.train.assign(clip_ids.begin(), clip_ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(clip_ids.begin() + static_cast<std::ptrdiff_t>(n_train), clip_ids.end());
  return s;
}

std::vector<ClipWindow> select_training_clips(std::size_t video_length, int clips_per_video,
                                              std::size_t clip_len, std::uint64_t seed,
                                              std::vector<std::string>* warnings) {
  require(clip_len > 0, ErrorKind::Parameter, "clip length must be positive");
  require(clips_per_video >= 1, ErrorKind::Parameter, "clips per video must be positive");
  require(video_length >= clip_len, ErrorKind::Parameter, "video is shorter than one clip");
  std::size_t k = static_cast<std::size_t>(clips_per_video);
  if (k * clip_len > video_length) {
    k = video_length / clip_len;
    if (warnings) {
      std::ostringstream w;
      w << "video of " << video_length << " frames holds only " << k << " disjoint clips of " << clip_len;
      warnings->push_back(w.str());
    }
  }
  // Placements of k disjoint windows correspond to multisets of k offsets in
  // [0, slack]; draw k distinct values from [0, slack + k) (Floyd) and remove
  // the rank.
  const std::size_t slack = video_length - k * clip_len;
  const std::size_t range = slack + k;
  const CounterRng rng(splitmix64(seed ^ 0x636c697073ull));
  std::vector<std::size_t> picked;
  for (std::size_t j = range - k; j < range; ++j) {
    const std::size_t t = rng.below(j + 1, j);
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
    else picked.push_back(j);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<ClipWindow> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = {picked[j] - j + j * clip_len, clip_len};
  return out;
}

namespace {

std::vector<std::uint8_t> patch_bytes(const Patch& p) {
  std::vector<std::uint8_t> out;
  const auto put_floats = [&](const std::vector<float>& v) {
    for (float f : v) {
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
  };
  for (std::size_t t = 0; t < p.clean_raw.size(); ++t) {
    put_floats(p.clean_raw[t].data);
    put_floats(p.noisy_raw[t].data);
    out.insert(out.end(), p.clean_srgb[t].data.begin(), p.clean_srgb[t].data.end());
    out.insert(out.end(), p.noisy_srgb[t].data.begin(), p.noisy_srgb[t].data.end());
  }
  return out;
}

std::vector<std::pair<std::string, fs::path>> list_clips(const fs::path& input) {
  require(fs::is_directory(input), ErrorKind::Io, "input directory not found: " + input.string());
  std::vector<std::pair<std::string, fs::path>> clips;
  for (const auto& e : fs::directory_iterator(input))
    if (e.is_directory()) clips.emplace_back(e.path().filename().string(), e.path());
  std::sort(clips.begin(), clips.end());
  require(!clips.empty(), ErrorKind::Io, "no clip directories under " + input.string());
  return clips;
}

}  // namespace

DatasetSummary run_dataset(const DatasetOptions& opt) {
  require(!(opt.iso && opt.preset), ErrorKind::Usage, "give either an ISO or a preset, not both");
  require(opt.iso || opt.preset, ErrorKind::Usage, "an ISO or a preset is required");
  opt.isp.validate();
  const auto clips = list_clips(opt.input);

  DatasetSummary summary;
  for (const auto& [id, dir] : clips) summary.clips.push_back(id);
  if (clips.size() >= 2) summary.split = split_dataset(summary.clips, opt.split_ratio, opt.seed);
  else {
    summary.split.train = summary.clips;
    summary.split.ratio = opt.split_ratio;
    summary.split.seed = opt.seed;
    summary.warnings.push_back("single clip: assigned to train, no test split");
  }

  for (const auto& [id, dir] : clips) {
    const auto clean = raw_io::read_clip(dir);
    ClipPair pair = opt.preset ? build_pair(id, clean, *opt.preset, opt.isp, opt.table, opt.seed)
                               : build_pair(id, clean, *opt.iso, opt.isp, opt.table, opt.seed);
    summary.frames += clean.size();
    summary.warnings.insert(summary.warnings.end(), pair.warnings.begin(), pair.warnings.end());

    std::vector<Patch> patches;
    const std::uint64_t patch_seed = splitmix64(opt.seed ^ io::fnv1a(id));
    if (opt.patches > 0) patches = extract_patches(pair, opt.patch_size, opt.patches, patch_seed, opt.augment);
    summary.patches += patches.size();
    if (opt.dry_run) continue;

    const fs::path root = opt.output / id;
    raw_io::write_clip(root / "clean_raw", pair.clean_raw);
    raw_io::write_clip(root / "noisy_raw", pair.noisy_raw);
    fs::create_directories(root / "clean_srgb");
    fs::create_directories(root / "noisy_srgb");
    parallel_for(pair.clean_srgb.size(), [&](std::size_t i) {
      io::write_png(root / "clean_srgb" / io::frame_name(i, ".png"), pair.clean_srgb[i]);
      io::write_png(root / "noisy_srgb" / io::frame_name(i, ".png"), pair.noisy_srgb[i]);
    });
    io::write_atomic(root / "manifest.json", pair.manifest.serialize());
    if (!patches.empty()) {
      fs::create_directories(root / "patches");
      std::string index;
      for (std::size_t i = 0; i < patches.size(); ++i) {
        const auto& s = patches[i].spec;
        json j{{"file", io::frame_name(i, ".bin")}, {"packed_x", s.packed_x}, {"packed_y", s.packed_y},
               {"mosaic_x", s.mosaic_x()}, {"mosaic_y", s.mosaic_y()}, {"size", s.size},
               {"rotation", s.rotation}, {"flip_h", s.flip_h}, {"flip_v", s.flip_v},
               {"frames", patches[i].clean_raw.size()},
               {"layout", "per frame: clean packed f32[4][s/2][s/2], noisy packed, clean rgb8[s][s][3], noisy rgb8"}};
        index += j.dump() + "\n";
        io::write_atomic(root / "patches" / io::frame_name(i, ".bin"), patch_bytes(patches[i]));
      }
      io::write_atomic(root / "patches" / "index.jsonl", index);
    }
  }
  if (!opt.dry_run) io::write_atomic(opt.output / "split.json", summary.split.serialize());
  return summary;
}

}  // namespace rawvid
