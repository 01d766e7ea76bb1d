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

// Acceptance runner: one PASS/FAIL line per criterion with its measured
// values and wall time. Exit status is non-zero when any criterion fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "rawvid/dataset/dataset.hpp"
#include "rawvid/isp/color.hpp"
#include "rawvid/isp/isp.hpp"
#include "rawvid/metrics/metrics.hpp"
#include "rawvid/motion/flow.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/noise/noise_model.hpp"
#include "rawvid/raw/raw_io.hpp"
#include "rawvid/rvdt/checks.hpp"
#include "rawvid/rvdt/weights.hpp"
#include "synthetic.hpp"

namespace {

using namespace rawvid;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

// 1. Poisson-Gaussian moments over 10^6 samples per case.
void noise_moments(Outcome& o) {
  double worst_mean = 0, worst_var = 0;
  std::uint64_t frame = 0;
  for (double y : {0.1, 0.25, 0.5})
    for (double s2 : {0.001, 0.01})
      for (double sr : {0.005, 0.02}) {
        const std::vector<float> clean(1000000, static_cast<float>(y));
        const NoiseParams p = NoiseParams::uniform(100, sr, std::sqrt(s2));
        const auto x = sample_noisy(clean, p, Channel::G, SeedSpec{2026, 1, frame++, 0});
        double s = 0;
        for (float v : x) s += v;
        const double mean = s / static_cast<double>(x.size());
        double ss = 0;
        for (float v : x) ss += (v - mean) * (v - mean);
        const double var = ss / static_cast<double>(x.size() - 1);
        const double expect_var = s2 * y + sr * sr;
        const double em = std::abs(mean - y) / y, ev = std::abs(var - expect_var) / expect_var;
        worst_mean = std::max(worst_mean, em);
        worst_var = std::max(worst_var, ev);
        o.expect(em < 0.005, "mean Y=" + fmt(y) + " s2=" + fmt(s2) + " sr=" + fmt(sr) + " rel err " + fmt(em));
        o.expect(ev < 0.02, "variance Y=" + fmt(y) + " s2=" + fmt(s2) + " sr=" + fmt(sr) + " rel err " + fmt(ev));
      }
  o.detail << "12 cases, worst mean rel err " << fmt(worst_mean, 3) << " (< 0.005), worst variance rel err "
           << fmt(worst_var, 3) << " (< 0.02)";
}

// 2. Flat-field residual histograms against the analytic model.
void noise_realism(Outcome& o) {
  const CalibrationTable table = CalibrationTable::builtin_default();
  const double level = 0.3;
  for (double iso : {2500.0, 8000.0, 20000.0}) {
    const NoiseParams p = params_for_iso(table, iso);
    const std::vector<float> clean(1000000, static_cast<float>(level));
    const auto x = sample_noisy(clean, p, Channel::G, SeedSpec{7, clip_key("flat", iso), 0, 0});
    Histogram h = default_residual_binning();
    h.add_all(noise_residual(x, clean));
    const Histogram model =
        model_residual_histogram(level, p.shot_scale(Channel::G), p.read_std(Channel::G), default_residual_binning());
    const double kl = kl_divergence(h, model);
    o.expect(kl < 0.05, "ISO " + fmt(iso) + " KL " + fmt(kl));
    o.detail << "ISO " << iso << " KL " << fmt(kl, 3) << "; ";
  }
  o.detail << "bound 0.05";
}

// 3. Averaging 50 noisy frames of a static scene.
void temporal_average_oracle(Outcome& o) {
  const NoiseParams p = params_for_iso(CalibrationTable::builtin_default(), 8000);
  const BayerFrame scene = testing::scene_frame(256, 256, 0, 0);
  const Mosaic clean = normalize(scene);
  std::vector<std::vector<float>> residuals;
  for (std::uint64_t f = 0; f < 50; ++f) {
    const Mosaic noisy = sample_noisy(clean, p, SeedSpec{11, 3, f, 0});
    residuals.push_back(noise_residual(noisy.data, clean.data));
  }
  const auto avg = temporal_average(residuals, 50);
  const auto std_of = [](const std::vector<float>& v) {
    double s = 0, s2 = 0;
    for (float x : v) s += x;
    const double m = s / static_cast<double>(v.size());
    for (float x : v) s2 += (x - m) * (x - m);
    return std::sqrt(s2 / static_cast<double>(v.size()));
  };
  double single = 0;
  for (const auto& r : residuals) single += std_of(r) * std_of(r);
  single = std::sqrt(single / 50.0);
  const double ratio = single / std_of(avg);
  const double err = std::abs(ratio / std::sqrt(50.0) - 1.0);
  o.expect(err < 0.05, "reduction " + fmt(ratio));
  o.detail << "std reduction " << fmt(ratio, 5) << " vs sqrt(50) = " << fmt(std::sqrt(50.0), 5) << ", rel err "
           << fmt(err, 3) << " (< 0.05)";
}

// 4. Colour pipeline numbers.
void color_pipeline(Outcome& o) {
  double worst = 0;
  const auto id_err = [&](const ColorMatrix& m) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(m(r, c) - (r == c ? 1.0 : 0.0)));
  };
  id_err(color::xyz_to_prophoto() * color::prophoto_to_xyz());
  id_err(color::prophoto_to_xyz() * color::xyz_to_prophoto());
  id_err(color::xyz_to_srgb() * color::srgb_to_xyz());
  id_err(color::srgb_to_xyz() * color::xyz_to_srgb());
  id_err(color::bradford(color::kD50, color::kD65) * color::bradford(color::kD65, color::kD50));
  const IspConfig cfg = IspConfig::defaults();
  id_err(cfg.ccm_low.matrix * cfg.ccm_low.matrix.inverse());
  id_err(cfg.ccm_high.matrix * cfg.ccm_high.matrix.inverse());
  o.expect(worst <= 1e-5, "matrix round trip " + fmt(worst));

  const double d65 = color::mccamy_cct(0.3127, 0.3290), a = color::mccamy_cct(0.4476, 0.4074);
  o.expect(std::abs(d65 - 6504) <= 50, "D65 CCT " + fmt(d65));
  o.expect(std::abs(a - 2856) <= 60, "A CCT " + fmt(a));

  const bool endpoints = interpolate_ccm(cfg, cfg.ccm_low.temperature) == cfg.ccm_low.matrix &&
                         interpolate_ccm(cfg, cfg.ccm_high.temperature) == cfg.ccm_high.matrix;
  o.expect(endpoints, "CCM interpolation endpoints");

  const double f1 = tonemap_value(1.0, TonemapCurve::AcesFit);
  o.expect(std::abs(f1 - 0.80380) <= 1e-4, "tonemap f(1) " + fmt(f1));

  const double t = 0.0031308;
  const double lin = 12.92 * t, pw = 1.055 * std::pow(t, 1.0 / 2.4) - 0.055;
  const double enc = color::srgb_encode(t);
  const double cont = std::max(std::abs(lin - pw), std::max(std::abs(enc - lin), std::abs(enc - pw)));
  o.expect(cont <= 1e-6, "gamma continuity " + fmt(cont));

  o.detail << "round trips " << fmt(worst, 3) << " (<= 1e-5); D65 " << fmt(d65, 6) << " K; A " << fmt(a, 6)
           << " K; endpoints " << (endpoints ? "exact" : "inexact") << "; f(1) = " << fmt(f1, 7)
           << "; gamma branch gap " << fmt(cont, 3);
}

// Independent 16x16 SSIM for constant images.
double brute_ssim_16(float a, float b) {
  const int n = 16, r = 5;
  double g[11][11], gs = 0;
  for (int j = 0; j < 11; ++j)
    for (int i = 0; i < 11; ++i) gs += g[j][i] = std::exp(-((i - r) * (i - r) + (j - r) * (j - r)) / (2 * 1.5 * 1.5));
  double total = 0;
  int count = 0;
  for (int y = r; y < n - r; ++y)
    for (int x = r; x < n - r; ++x) {
      double ma = 0, mb = 0, va = 0, vb = 0, cov = 0;
      for (int j = 0; j < 11; ++j)
        for (int i = 0; i < 11; ++i) {
          ma += g[j][i] / gs * a;
          mb += g[j][i] / gs * b;
        }
      for (int j = 0; j < 11; ++j)
        for (int i = 0; i < 11; ++i) {
          va += g[j][i] / gs * (a - ma) * (a - ma);
          vb += g[j][i] / gs * (b - mb) * (b - mb);
          cov += g[j][i] / gs * (a - ma) * (b - mb);
        }
      const double c1 = 1e-4, c2 = 9e-4;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / count;
}

// 5. Metric closed forms.
void metric_oracles(Outcome& o) {
  const std::vector<float> a(64 * 64, 0.3f), b(64 * 64, 0.4f);
  const double p = psnr(a, b, 1.0);
  o.expect(std::abs(p - 20.0) <= 1e-6 * 20.0 + 1e-5, "PSNR " + fmt(p, 10));

  std::vector<float> tex(64 * 64);
  for (std::size_t i = 0; i < tex.size(); ++i) tex[i] = static_cast<float>(testing::texture(i % 64, i / 64));
  const double self = ssim(ImageView{tex, 64, 64, 1}, ImageView{tex, 64, 64, 1});
  o.expect(self == 1.0, "SSIM(a,a) " + fmt(self, 10));

  const std::vector<float> c(256, 0.25f), d(256, 0.75f);
  const double s = ssim(ImageView{c, 16, 16, 1}, ImageView{d, 16, 16, 1});
  const double ref = brute_ssim_16(0.25f, 0.75f);
  o.expect(std::abs(s - ref) <= 1e-4, "SSIM offset " + fmt(s) + " vs " + fmt(ref));

  Histogram hp = Histogram::uniform(0, 1, 2), hq = Histogram::uniform(0, 1, 2);
  hp.set_counts({0.5, 0.5});
  hq.set_counts({0.25, 0.75});
  const double kl = kl_divergence(hp, hq);
  const double kl_exact = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  o.expect(std::abs(kl - kl_exact) <= 1e-6 && std::abs(kl - 0.14384) <= 1e-5, "KL " + fmt(kl, 10));

  o.detail << "PSNR " << fmt(p, 10) << " dB; SSIM(a,a) " << fmt(self, 10) << "; SSIM offset " << fmt(s, 8)
           << " vs brute force " << fmt(ref, 8) << "; KL " << fmt(kl, 8);
}

// 6. Translation recovery on 256x256 textured frames.
void flow_oracle(Outcome& o) {
  const GrayImage f0 = testing::textured_gray(256, 256);
  for (auto [dx, dy] : {std::pair{3, 0}, {0, -2}, {5, 4}}) {
    const FlowField f = dense_flow(f0, testing::shift_reflect(f0, dx, dy));
    std::vector<double> u, v;
    for (int y = 16; y < 240; ++y)
      for (int x = 16; x < 240; ++x) {
        u.push_back(f.u[static_cast<std::size_t>(y) * 256 + x]);
        v.push_back(f.v[static_cast<std::size_t>(y) * 256 + x]);
      }
    const double mu = testing::median(u), mv = testing::median(v);
    const double err = std::max(std::abs(mu - dx), std::abs(mv - dy));
    o.expect(err < 0.5, "shift (" + std::to_string(dx) + "," + std::to_string(dy) + ") error " + fmt(err));
    o.detail << "(" << dx << "," << dy << ") -> (" << fmt(mu, 4) << "," << fmt(mv, 4) << "); ";
  }
  o.detail << "tolerance 0.5 px";
}

// 7. Two dataset runs with one seed give identical trees.
void dataset_determinism(Outcome& o) {
  testing::TempDir dir("acceptance_dataset");
  for (int c = 0; c < 5; ++c)
    raw_io::write_clip(dir.path() / "in" / ("clip_" + std::to_string(c)),
                       testing::scene_clip(128, 96, 4, 1.5 * c, 0.5, 100 + static_cast<std::uint64_t>(c)));
  DatasetOptions opt;
  opt.input = dir.path() / "in";
  opt.preset = NoisePreset::Heavy;
  opt.patches = 6;
  opt.patch_size = 32;
  opt.seed = 2026;
  opt.output = dir.path() / "run1";
  const DatasetSummary s1 = run_dataset(opt);
  opt.output = dir.path() / "run2";
  run_dataset(opt);
  const auto t1 = testing::tree_contents(dir.path() / "run1"), t2 = testing::tree_contents(dir.path() / "run2");
  o.expect(!t1.empty() && t1 == t2, "trees differ");

  std::size_t origins = 0, odd = 0;
  for (const auto& [rel, bytes] : t1) {
    if (rel.size() < 11 || rel.substr(rel.size() - 11) != "index.jsonl") continue;
    std::istringstream in(bytes);
    std::string line;
    while (std::getline(in, line)) {
      const auto j = nlohmann::json::parse(line);
      ++origins;
      const int mx = j.at("mosaic_x").get<int>(), my = j.at("mosaic_y").get<int>();
      if (mx % 2 || my % 2 || mx != 2 * j.at("packed_x").get<int>() || my != 2 * j.at("packed_y").get<int>()) ++odd;
    }
  }
  o.expect(origins == 30 && odd == 0, "patch origins: " + std::to_string(odd) + " odd of " + std::to_string(origins));

  std::vector<std::string> ids;
  for (int i = 0; i < 200; ++i) ids.push_back("video_" + std::to_string(i));
  const SplitManifest split = split_dataset(ids, 0.9, 2026);
  o.expect(split.train.size() == 180 && split.test.size() == 20, "split sizes");
  o.expect(s1.split.train.size() + s1.split.test.size() == 5, "toy split not exhaustive");

  o.detail << t1.size() << " files byte-identical across runs; " << origins << " patch origins, " << odd
           << " odd; 200 clips -> " << split.train.size() << "/" << split.test.size();
}

// 8. Structural invariants of the transformer reference.
void rvdt_structure(Outcome& o) {
  const auto results = rvdt::run_structural_checks(rvdt::ModelConfig{}, 2026);
  int passed = 0;
  for (const auto& r : results) {
    o.expect(r.pass, r.name + ": " + r.detail);
    passed += r.pass ? 1 : 0;
  }
  o.expect(results.size() == 7, "expected 7 checks");
  o.detail << passed << "/" << results.size() << " checks:";
  for (const auto& r : results) o.detail << " " << r.name << (r.pass ? "" : "(FAIL)");
}

// 9. Parameter budget of the default configuration.
void parameter_budget(Outcome& o) {
  const rvdt::ModelConfig cfg;
  const std::size_t count = rvdt::param_count(cfg);
  const double target = 2.487e6;
  const double rel = std::abs(static_cast<double>(count) - target) / target;
  o.expect(rel <= 0.10, "count " + std::to_string(count));
  testing::TempDir dir("acceptance_weights");
  rvdt::init_weights(cfg, 1).save(dir.path() / "w.txt", dir.path() / "w.bin");
  const std::uintmax_t saved = fs::file_size(dir.path() / "w.bin") / 4;
  const std::size_t loaded = rvdt::WeightSet::load(dir.path() / "w.txt").element_count();
  o.expect(saved == count && loaded == count, "saved " + std::to_string(saved) + " loaded " + std::to_string(loaded));
  o.detail << "param_count " << count << " (" << fmt(100 * rel, 3) << "% from 2.487M, limit 10%); saved "
           << saved << " floats, reloaded " << loaded;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 = no time bound
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "noise_model_moments", 30, noise_moments},
      {2, "noise_realism_kl", 10, noise_realism},
      {3, "temporal_average_sqrt50", 10, temporal_average_oracle},
      {4, "color_pipeline", 5, color_pipeline},
      {5, "metric_oracles", 5, metric_oracles},
      {6, "flow_translation", 20, flow_oracle},
      {7, "dataset_determinism", 60, dataset_determinism},
      {8, "rvdt_structural_suite", 60, rvdt_structure},
      {9, "parameter_budget", 0, parameter_budget},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail << "; over time budget " << c.limit_seconds << " s";
    }
    std::printf("%s %d %-26s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
