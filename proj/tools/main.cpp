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

#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "rawvid/dataset/dataset.hpp"
#include "rawvid/error.hpp"
#include "rawvid/parallel.hpp"
#include "rawvid/simd/kernels.hpp"

namespace {

using rawvid::cli::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string version_text() {
  return std::string("rawvid ") + RAWVID_VERSION + " (clip manifest v" + std::to_string(rawvid::kManifestVersion) +
         ", weights manifest v1, report v1)";
}

// Every option of the selected subcommand, given or defaulted.
json config_echo(const CLI::App& app, const CLI::App& sub, const std::string& path) {
  json opts = json::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_name() == "--help") continue;
    std::string key = o->get_name();
    key.erase(0, key.find_first_not_of('-'));
    if (o->count() > 0) {
      const auto& r = o->results();
      opts[key] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (o->get_expected_max() == 0) {
      opts[key] = false;
    } else if (!o->get_default_str().empty()) {
      opts[key] = o->get_default_str();
    }
  }
  json globals = json::object();
  for (const CLI::Option* o : app.get_options()) {
    std::string key = o->get_name();
    if (key == "--help" || key == "--version") continue;
    key.erase(0, key.find_first_not_of('-'));
    if (o->count() > 0) globals[key] = o->results().size() == 1 ? json(o->results().front()) : json(o->results());
    else if (o->get_expected_max() == 0) globals[key] = false;
    else if (!o->get_default_str().empty()) globals[key] = o->get_default_str();
  }
  return {{"record", "config"}, {"version", version_text()}, {"subcommand", path},
          {"simd", rawvid::simd::active().name}, {"global", globals}, {"options", opts}};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rawvid::cli;
  CLI::App app{"rawvid: synthetic noisy/clean RAW video pairs, camera ISP rendering, quality metrics, "
               "motion statistics and a recurrent video denoising transformer reference."};
  app.name("rawvid");
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", version_text());
  app.failure_message(CLI::FailureMessage::help);
  app.require_subcommand(1);

  Context ctx;
  app.add_option("--seed", ctx.seed, "Seed for all randomness")->capture_default_str();
  app.add_option("--jobs", ctx.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--dry-run", ctx.dry_run, "Validate inputs and configs without writing outputs");
  app.add_option("--report", ctx.report_path, "Write the JSONL report here instead of stdout");

  CalibrateArgs cal;
  auto* c_cal = app.add_subcommand("calibrate", "Fit per-ISO noise parameters from flat-field RAW stacks");
  c_cal->add_option("--frames", cal.frames, "Directory of flat-field levels (one sub-directory of frames each)")->required();
  c_cal->add_option("--iso", cal.iso, "ISO of the stacks (default: frame metadata)");
  c_cal->add_option("--table", cal.table, "Existing table to update");
  c_cal->add_option("--out", cal.out, "Output calibration table (JSON)");

  const auto add_noise = [](CLI::App* sub, NoiseArgs& n) {
    sub->add_option("--iso", n.iso, "Target ISO");
    sub->add_option("--preset", n.preset, "Noise preset: heavy, medium or light");
    sub->add_option("--calibration", n.calibration, "Calibration table (JSON)");
  };

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "Synthesize a noisy RAW clip from a clean RAW clip");
  c_syn->add_option("--in", syn.in, "Clean clip directory")->required();
  c_syn->add_option("--out", syn.out, "Output directory");
  c_syn->add_option("--clip-id", syn.clip_id, "Clip identifier (default: input directory name)");
  add_noise(c_syn, syn.noise);

  RenderArgs ren;
  auto* c_ren = app.add_subcommand("render", "Render RAW frames to 8-bit sRGB PNG");
  c_ren->add_option("--in", ren.in, "RAW frame or clip directory")->required();
  c_ren->add_option("--out", ren.out, "Output directory");
  c_ren->add_option("--isp", ren.isp, "ISP configuration (JSON)");
  c_ren->add_option("--disable-stage", ren.disable, "Disable a stage: color_temp or tonemap");
  add_noise(c_ren, ren.noise);

  DatasetArgs ds;
  auto* c_ds = app.add_subcommand("dataset", "Build noisy/clean RAW + sRGB clip pairs, patches and a split");
  c_ds->add_option("--in", ds.in, "Directory with one clean RAW clip per sub-directory")->required();
  c_ds->add_option("--out", ds.out, "Output root");
  c_ds->add_option("--isp", ds.isp, "ISP configuration (JSON)");
  add_noise(c_ds, ds.noise);
  c_ds->add_option("--patches", ds.patches, "Training patches per clip")->capture_default_str();
  c_ds->add_option("--patch-size", ds.patch_size, "Patch side in mosaic pixels (even)")->capture_default_str();
  c_ds->add_flag("--no-augment", ds.no_augment, "Disable rotation/flip augmentation");
  c_ds->add_option("--split-ratio", ds.split_ratio, "Training fraction")->capture_default_str();

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "PSNR / SSIM between two PNG frames or numbered PNG directories");
  c_met->add_option("--a", met.a, "Reference")->required();
  c_met->add_option("--b", met.b, "Test")->required();
  c_met->add_option("--peak", met.peak, "Peak signal value")->capture_default_str();

  FlowArgs flo;
  auto* c_flo = app.add_subcommand("flow", "Dense optical flow and motion phase/magnitude histograms");
  c_flo->add_option("--in", flo.in, "Directory of numbered PNG frames")->required();
  c_flo->add_option("--out", flo.out, "Histogram table file (default: appended to the report)");
  c_flo->add_option("--dump", flo.dump, "Binary flow dump (planar u, v float32)");
  c_flo->add_option("--levels", flo.levels, "Pyramid levels")->capture_default_str();
  c_flo->add_option("--window", flo.window, "Averaging window")->capture_default_str();
  c_flo->add_option("--iterations", flo.iterations, "Iterations per level")->capture_default_str();
  c_flo->add_option("--magnitude-bins", flo.magnitude_bins)->capture_default_str();
  c_flo->add_option("--magnitude-max", flo.magnitude_max)->capture_default_str();
  c_flo->add_option("--phase-bins", flo.phase_bins)->capture_default_str();
  c_flo->add_option("--min-magnitude", flo.min_magnitude, "Phase histogram motion threshold (px)")->capture_default_str();

  RvdtArgs rv;
  auto* c_rv = app.add_subcommand("rvdt", "Recurrent video denoising transformer reference");
  c_rv->require_subcommand(1);
  auto* rv_run = c_rv->add_subcommand("run", "Denoise a clip with stored weights");
  auto* rv_check = c_rv->add_subcommand("check", "Run the structural invariant suite");
  auto* rv_params = c_rv->add_subcommand("params", "Print the parameter count");
  auto* rv_init = c_rv->add_subcommand("init", "Write initialized (or zero) weights");
  for (auto* s : {rv_run, rv_check, rv_params, rv_init}) s->add_option("--config", rv.config, "Model configuration (JSON)");
  rv_run->add_option("--weights", rv.weights, "Weight manifest")->required();
  rv_run->add_option("--clip", rv.clip, "PNG clip directory (RAW clip for 4-channel models)")->required();
  rv_run->add_option("--out", rv.out, "Output directory");
  rv_run->add_option("--noise-level", rv.noise_level, "Noise level for non-blind models");
  rv_init->add_option("--weights", rv.weights, "Weight manifest to write")->required();
  rv_init->add_flag("--zero", rv.zero, "All-zero weights (unit norm scales)");

  if (argc <= 1) {
    std::cout << app.help() << std::flush;
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    rawvid::set_max_jobs(ctx.jobs);
    const CLI::App* sub = app.get_subcommands().front();
    std::string path = sub->get_name();
    const CLI::App* leaf = sub;
    if (!sub->get_subcommands().empty()) {
      leaf = sub->get_subcommands().front();
      path += " " + leaf->get_name();
    }
    ctx.report.record(config_echo(app, *leaf, path));

    int code = kExitOk;
    if (sub == c_cal) run_calibrate(ctx, cal);
    else if (sub == c_syn) run_synth(ctx, syn);
    else if (sub == c_ren) run_render(ctx, ren);
    else if (sub == c_ds) run_dataset(ctx, ds);
    else if (sub == c_met) run_metrics(ctx, met);
    else if (sub == c_flo) run_flow(ctx, flo);
    else if (leaf == rv_run) run_rvdt_run(ctx, rv);
    else if (leaf == rv_check) code = run_rvdt_check(ctx, rv) ? kExitOk : kExitDomain;
    else if (leaf == rv_params) run_rvdt_params(ctx, rv);
    else if (leaf == rv_init) run_rvdt_init(ctx, rv);
    ctx.report.flush(ctx.dry_run ? std::string() : ctx.report_path);
    return code;
  } catch (const rawvid::Error& e) {
    std::cerr << "rawvid: " << e.what() << "\n";
    if (e.kind() == rawvid::ErrorKind::Usage) {
      std::cerr << app.help();
      return kExitUsage;
    }
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "rawvid: " << e.what() << "\n";
    return kExitDomain;
  }
}
