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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <map>

#include "rawvid/dataset/dataset.hpp"
#include "rawvid/error.hpp"
#include "rawvid/io/png_io.hpp"
#include "rawvid/io/text_io.hpp"
#include "rawvid/isp/isp.hpp"
#include "rawvid/metrics/metrics.hpp"
#include "rawvid/motion/motion_hist.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/raw/raw_io.hpp"
#include "rawvid/rvdt/checks.hpp"
#include "rawvid/rvdt/model.hpp"

namespace rawvid::cli {

void Report::flush(const std::string& path) const {
  if (path.empty()) {
    std::cout << text_;
    std::cout.flush();
  } else {
    io::write_atomic(path, text_);
  }
}

namespace {

// Explicit path, else <RAWVID_CONFIG_DIR>/<name> when present.
std::optional<fs::path> config_file(const std::string& explicit_path, const char* name) {
  if (!explicit_path.empty()) return fs::path(explicit_path);
  if (const char* dir = std::getenv("RAWVID_CONFIG_DIR"); dir && *dir) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

IspConfig load_isp(const std::string& path, json& sources) {
  const auto file = config_file(path, "isp.json");
  sources["isp"] = file ? file->string() : "builtin";
  return file ? IspConfig::load(*file) : IspConfig::defaults();
}

CalibrationTable load_table(const std::string& path, json& sources) {
  const auto file = config_file(path, "noise_calibration.json");
  sources["calibration"] = file ? file->string() : "builtin";
  return file ? CalibrationTable::load(*file) : CalibrationTable::builtin_default();
}

rvdt::ModelConfig load_model(const std::string& path, json& sources) {
  const auto file = config_file(path, "model.json");
  sources["model"] = file ? file->string() : "builtin";
  return file ? rvdt::ModelConfig::load(*file) : rvdt::ModelConfig{};
}

struct NoiseChoice {
  double iso = 0.0;
  std::optional<NoisePreset> preset;
};

std::optional<NoiseChoice> noise_choice(const NoiseArgs& a) {
  require(!(a.iso && !a.preset.empty()), ErrorKind::Usage, "give either --iso or --preset, not both");
  if (a.iso) return NoiseChoice{*a.iso, std::nullopt};
  if (!a.preset.empty()) {
    const NoisePreset p = parse_preset(a.preset);
    return NoiseChoice{preset_iso(p), p};
  }
  return std::nullopt;
}

std::string clip_name(const std::string& path) {
  fs::path p = fs::path(path).lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

std::vector<BayerFrame> read_raw_input(const std::string& path) {
  if (fs::is_regular_file(path)) return {raw_io::read_frame(path)};
  return raw_io::read_clip(path);
}

std::vector<Rgb8Image> read_png_input(const std::string& path) {
  std::vector<Rgb8Image> frames;
  if (fs::is_regular_file(path)) {
    frames.push_back(io::read_png(path));
  } else {
    for (const auto& p : io::list_numbered(path, ".png")) frames.push_back(io::read_png(p));
  }
  require(!frames.empty(), ErrorKind::Io, "no PNG frames in " + path);
  return frames;
}

json noise_json(const NoiseParams& p) {
  return {{"iso", p.iso}, {"sigma_r", p.sigma_r}, {"sigma_s", p.sigma_s}};
}

void flush_warnings(Context& ctx, std::vector<std::string> extra = {}) {
  for (auto& w : extra) ctx.warnings.push_back(std::move(w));
  for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << "\n";
  ctx.warnings.clear();
}

}  // namespace

void run_calibrate(Context& ctx, const CalibrateArgs& a) {
  const fs::path root(a.frames);
  require(fs::is_directory(root), ErrorKind::Io, "flat-field directory not found: " + a.frames);
  std::vector<fs::path> levels;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) levels.push_back(e.path());
  std::sort(levels.begin(), levels.end());
  if (levels.empty()) levels.push_back(root);

  std::vector<FlatStack> combined(3);
  for (int c = 0; c < 3; ++c) combined[c].channel = static_cast<Channel>(c);
  double iso = a.iso.value_or(0.0);
  for (const auto& dir : levels) {
    const auto frames = raw_io::read_clip(dir);
    if (!a.iso && iso == 0.0) iso = frames.front().iso;
    std::vector<Mosaic> mosaics;
    for (const auto& f : frames) mosaics.push_back(normalize(f));
    for (const auto& s : flat_stacks_from_frames(mosaics)) {
      auto& dst = combined[static_cast<int>(s.channel)];
      dst.mean.insert(dst.mean.end(), s.mean.begin(), s.mean.end());
      dst.variance.insert(dst.variance.end(), s.variance.begin(), s.variance.end());
    }
  }
  const NoiseParams p = estimate_params(combined, iso);
  CalibrationTable table = a.table.empty() ? CalibrationTable() : CalibrationTable::load(a.table);
  table.upsert(p);
  if (!ctx.dry_run) {
    require(!a.out.empty(), ErrorKind::Usage, "calibrate needs --out");
    io::write_atomic(a.out, table.serialize());
  }
  json rec = noise_json(p);
  rec["record"] = "calibration";
  rec["levels"] = levels.size();
  rec["entries"] = table.entries().size();
  ctx.report.record(rec);
}

void run_synth(Context& ctx, const SynthArgs& a) {
  json sources;
  const auto choice = noise_choice(a.noise);
  require(choice.has_value(), ErrorKind::Usage, "synth needs --iso or --preset");
  const auto table = load_table(a.noise.calibration, sources);
  const auto isp = load_isp("", sources);
  const auto clean = raw_io::read_clip(a.in);
  const std::string id = a.clip_id.empty() ? clip_name(a.in) : a.clip_id;
  ClipManifest m = make_manifest(id, clean, choice->iso, isp, table, ctx.seed, &ctx.warnings);
  m.preset = choice->preset;
  const auto noisy = regenerate_noisy(clean, m);
  if (!ctx.dry_run) {
    require(!a.out.empty(), ErrorKind::Usage, "synth needs --out");
    raw_io::write_clip(a.out, noisy);
    io::write_atomic(fs::path(a.out) / "manifest.json", m.serialize());
  }
  json rec = noise_json(m.params);
  rec["record"] = "synth";
  rec["clip"] = id;
  rec["frames"] = noisy.size();
  rec["iso_clamped"] = m.iso_clamped;
  rec["sources"] = sources;
  ctx.report.record(rec);
  flush_warnings(ctx);
}

void run_render(Context& ctx, const RenderArgs& a) {
  json sources;
  IspConfig isp = load_isp(a.isp, sources);
  for (const auto& stage : a.disable) disable_stage(isp, stage);
  isp.validate();
  const auto frames = read_raw_input(a.in);
  const auto choice = noise_choice(a.noise);
  std::optional<NoiseParams> noise;
  SeedSpec seed{ctx.seed, 0, 0, 0};
  if (choice) {
    const auto table = load_table(a.noise.calibration, sources);
    const double iso = std::clamp(choice->iso, table.min_iso(), table.max_iso());
    if (iso != choice->iso) ctx.warnings.push_back("ISO clamped to " + std::to_string(iso));
    noise = params_for_iso(table, iso);
    noise->iso = iso;
    seed.clip = clip_key(clip_name(a.in), iso);
  }
  const ResolvedIsp state = resolve_isp(normalize(frames.front()), isp);
  std::vector<Rgb8Image> out(frames.size());
  parallel_for(frames.size(), [&](std::size_t i) {
    Mosaic m = normalize(frames[i]);
    if (noise) m = sample_noisy(m, *noise, seed.with_frame(i));
    out[i] = render_mosaic(m, isp, state);
  });
  if (!ctx.dry_run) {
    require(!a.out.empty(), ErrorKind::Usage, "render needs --out");
    fs::create_directories(a.out);
    parallel_for(out.size(), [&](std::size_t i) { io::write_png(fs::path(a.out) / io::frame_name(i, ".png"), out[i]); });
  }
  json rec{{"record", "render"},           {"frames", out.size()},       {"cct", state.cct},
           {"wb_gains", state.wb.gains},   {"stage_order", render_stage_order()},
           {"color_temp_module", isp.color_temp_module}, {"tonemap_stage", isp.tonemap_stage},
           {"isp_digest", isp.digest()},   {"sources", sources}};
  if (noise) rec["noise"] = noise_json(*noise);
  ctx.report.record(rec);
  flush_warnings(ctx);
}

void run_dataset(Context& ctx, const DatasetArgs& a) {
  json sources;
  DatasetOptions opt;
  opt.input = a.in;
  opt.output = a.out;
  const auto choice = noise_choice(a.noise);
  require(choice.has_value(), ErrorKind::Usage, "dataset needs --iso or --preset");
  if (choice->preset) opt.preset = choice->preset;
  else opt.iso = choice->iso;
  opt.patches = a.patches;
  opt.patch_size = a.patch_size;
  opt.augment = !a.no_augment;
  opt.split_ratio = a.split_ratio;
  opt.seed = ctx.seed;
  opt.isp = load_isp(a.isp, sources);
  opt.table = load_table(a.noise.calibration, sources);
  opt.dry_run = ctx.dry_run;
  require(ctx.dry_run || !a.out.empty(), ErrorKind::Usage, "dataset needs --out");
  const DatasetSummary s = rawvid::run_dataset(opt);
  ctx.report.record({{"record", "dataset"},
                     {"clips", s.clips},
                     {"frames", s.frames},
                     {"patches", s.patches},
                     {"iso", choice->iso},
                     {"preset", choice->preset ? json(to_string(*choice->preset)) : json(nullptr)},
                     {"train", s.split.train.size()},
                     {"test", s.split.test.size()},
                     {"sources", sources}});
  flush_warnings(ctx, s.warnings);
}

void run_metrics(Context& ctx, const MetricsArgs& a) {
  const auto fa = read_png_input(a.a);
  const auto fb = read_png_input(a.b);
  require(fa.size() == fb.size(), ErrorKind::Shape, "inputs have different frame counts");
  MetricReport report;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    require(fa[i].width == fb[i].width && fa[i].height == fb[i].height, ErrorKind::Shape,
            "frame " + std::to_string(i) + " differs in size");
    const RgbImage x = io::to_float(fa[i]), y = io::to_float(fb[i]);
    SsimParams sp;
    sp.peak = a.peak;
    const FrameMetrics m{psnr(x.data, y.data, a.peak),
                         ssim({x.data, x.width, x.height, 3}, {y.data, y.width, y.height, 3}, sp)};
    report.add(m);
    json rec{{"record", "frame"}, {"index", i}, {"ssim", m.ssim}};
    if (is_infinite_db(m.psnr)) {
      rec["psnr"] = nullptr;
      rec["psnr_infinite"] = true;
    } else {
      rec["psnr"] = m.psnr;
    }
    ctx.report.record(rec);
  }
  json summary{{"record", "summary"},
               {"frames", fa.size()},
               {"mean_ssim", report.mean_ssim()},
               {"excluded_infinite", report.excluded_infinite()}};
  if (report.excluded_infinite() == fa.size()) summary["mean_psnr"] = nullptr;
  else summary["mean_psnr"] = report.mean_psnr();
  ctx.report.record(summary);
}

void run_flow(Context& ctx, const FlowArgs& a) {
  const auto frames = read_png_input(a.in);
  require(frames.size() >= 2, ErrorKind::Parameter, "flow needs at least two frames");
  FlowConfig cfg;
  cfg.levels = a.levels;
  cfg.window = a.window;
  cfg.iterations = a.iterations;
  MotionHistogramConfig hcfg;
  hcfg.magnitude_bins = a.magnitude_bins;
  hcfg.magnitude_max = a.magnitude_max;
  hcfg.phase_bins = a.phase_bins;
  hcfg.phase_min_magnitude = a.min_magnitude;
  make_motion_histogram(hcfg);  // validates before the expensive part

  std::vector<GrayImage> gray;
  for (const auto& f : frames) gray.push_back(to_gray(f));
  std::vector<FlowField> flows(frames.size() - 1);
  parallel_for(flows.size(), [&](std::size_t i) { flows[i] = dense_flow(gray[i], gray[i + 1], cfg); });
  const MotionHistogram h = motion_histograms(flows, hcfg);

  if (!ctx.dry_run && !a.dump.empty()) {
    std::vector<std::uint8_t> bytes;
    for (const auto& f : flows)
      for (const auto* plane : {&f.u, &f.v})
        for (float v : *plane) {
          std::uint32_t u;
          std::memcpy(&u, &v, 4);
          for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
        }
    io::write_atomic(a.dump, bytes);
  }
  const std::string table = format_motion_table(h);
  ctx.report.record({{"record", "flow"},
                     {"pairs", flows.size()},
                     {"width", frames.front().width},
                     {"height", frames.front().height},
                     {"pixels", h.pixels},
                     {"dump_layout", "per pair: u plane then v plane, float32 little-endian, row-major"}});
  if (a.out.empty()) ctx.report.line(table);
  else if (!ctx.dry_run) io::write_atomic(a.out, table);
}

void run_rvdt_params(Context& ctx, const RvdtArgs& a) {
  json sources;
  const auto cfg = load_model(a.config, sources);
  std::map<std::string, std::size_t> groups;
  for (const auto& s : rvdt::weight_specs(cfg)) {
    const std::string name = s.name;
    const auto dot = name.find('.');
    std::string group = name.substr(0, dot);
    if (group == "temporal") group = name.substr(0, name.find('.', dot + 1));
    groups[group] += rvdt::Tensor::numel(s.shape);
  }
  ctx.report.record({{"record", "params"}, {"param_count", rvdt::param_count(cfg)}, {"groups", groups},
                     {"config", json::parse(cfg.serialize())}, {"sources", sources}});
}

void run_rvdt_init(Context& ctx, const RvdtArgs& a) {
  json sources;
  const auto cfg = load_model(a.config, sources);
  require(!a.weights.empty(), ErrorKind::Usage, "rvdt init needs --weights <manifest>");
  const auto ws = a.zero ? rvdt::zero_weights(cfg) : rvdt::init_weights(cfg, ctx.seed);
  fs::path blob = a.weights;
  blob.replace_extension(".bin");
  if (!ctx.dry_run) ws.save(a.weights, blob);
  ctx.report.record({{"record", "init"}, {"param_count", rvdt::param_count(cfg)},
                     {"elements", ws.element_count()}, {"blob", blob.string()}, {"sources", sources}});
}

bool run_rvdt_check(Context& ctx, const RvdtArgs& a) {
  json sources;
  const auto cfg = load_model(a.config, sources);
  bool all = true;
  for (const auto& r : rvdt::run_structural_checks(cfg, ctx.seed)) {
    all = all && r.pass;
    ctx.report.record({{"record", "check"}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                       {"seconds", std::round(r.seconds * 1000.0) / 1000.0}});
  }
  ctx.report.record({{"record", "summary"}, {"pass", all}});
  return all;
}

void run_rvdt_run(Context& ctx, const RvdtArgs& a) {
  json sources;
  const auto cfg = load_model(a.config, sources);
  require(!a.weights.empty() && !a.clip.empty(), ErrorKind::Usage, "rvdt run needs --weights and --clip");
  const auto ws = rvdt::WeightSet::load(a.weights);
  ws.validate(cfg);
  require(cfg.blind || a.noise_level, ErrorKind::Usage, "non-blind model needs --noise-level");

  std::vector<rvdt::Tensor> clip;
  std::vector<BayerFrame> raw_frames;
  if (cfg.image_channels == 3) {
    for (const auto& f : read_png_input(a.clip)) {
      const RgbImage x = io::to_float(f);
      clip.emplace_back(std::vector<int>{3, x.height, x.width}, x.data);
    }
  } else {
    raw_frames = read_raw_input(a.clip);
    for (const auto& f : raw_frames) {
      const PackedRaw p = pack_gbrg(normalize(f));
      clip.emplace_back(std::vector<int>{PackedRaw::kPlanes, p.height, p.width}, p.data);
    }
  }
  std::vector<rvdt::Tensor> levels;
  if (a.noise_level) levels.assign(clip.size(), rvdt::Tensor({1, 1, 1}, static_cast<float>(*a.noise_level)));
  const auto y = rvdt::denoise_clip(clip, cfg, ws, cfg.blind ? nullptr : &levels);

  if (!ctx.dry_run) {
    require(!a.out.empty(), ErrorKind::Usage, "rvdt run needs --out");
    fs::create_directories(a.out);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (cfg.image_channels == 3) {
        RgbImage img(y[i].dim(2), y[i].dim(1), ColorSpace::SrgbEncoded);
        for (std::size_t k = 0; k < img.data.size(); ++k) img.data[k] = std::clamp(y[i].data[k], 0.0f, 1.0f);
        io::write_png(fs::path(a.out) / io::frame_name(i, ".png"), quantize(img));
      } else {
        PackedRaw p;
        p.width = y[i].dim(2);
        p.height = y[i].dim(1);
        p.data = y[i].data;
        for (float& v : p.data) v = std::clamp(v, 0.0f, 1.0f);
        const BayerFrame& src = raw_frames[i];
        raw_io::write_frame(fs::path(a.out) / io::frame_name(i, ".raw"),
                            denormalize(unpack_gbrg(p), src.black_level, src.white_level, src.iso));
      }
    }
  }
  ctx.report.record({{"record", "rvdt_run"}, {"frames", y.size()}, {"param_count", ws.element_count()},
                     {"sources", sources}});
}

}  // namespace rawvid::cli
