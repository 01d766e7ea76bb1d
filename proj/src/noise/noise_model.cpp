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

#include "rawvid/noise/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rawvid/error.hpp"
#include "rawvid/parallel.hpp"

namespace rawvid {

void NoiseParams::validate() const {
  for (int c = 0; c < 3; ++c) {
    require(std::isfinite(sigma_r[c]) && sigma_r[c] >= 0.0, ErrorKind::Parameter,
            "sigma_r must be finite and non-negative");
    require(std::isfinite(sigma_s[c]) && sigma_s[c] >= 0.0, ErrorKind::Parameter,
            "sigma_s must be finite and non-negative");
  }
}

namespace {

inline float sample_one(double y, double shot_var, double read_std, const CounterRng& rng,
                        std::uint64_t base) {
  double x = y;
  if (shot_var > 0.0) x = shot_var * rng.poisson(y / shot_var, base);
  if (read_std > 0.0) x += read_std * rng.normal(base + 2);
  return static_cast<float>(std::clamp(x, 0.0, 1.0));
}

void check_domain(std::span<const float> clean) {
  for (float v : clean)
    require(v >= 0.0f && v <= 1.0f, ErrorKind::Domain, "clean signal must lie in [0,1]");
}

}  // namespace

std::vector<float> sample_noisy(std::span<const float> clean, const NoiseParams& params,
                                Channel channel, const SeedSpec& seed) {
  params.validate();
  check_domain(clean);
  const double s = params.shot_scale(channel);
  const double shot_var = s * s;
  const double read_std = params.read_std(channel);
  const CounterRng rng(seed.with_channel(static_cast<std::uint32_t>(channel)).key());
  std::vector<float> out(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i)
    out[i] = sample_one(clean[i], shot_var, read_std, rng, 8 * static_cast<std::uint64_t>(i));
  return out;
}

Mosaic sample_noisy(const Mosaic& clean, const NoiseParams& params, const SeedSpec& seed) {
  require(clean.cfa == CfaPattern::GBRG, ErrorKind::UnsupportedPattern, "only GBRG mosaics are supported");
  params.validate();
  check_domain(clean.data);
  Mosaic out = clean;
  std::array<CounterRng, 3> rngs{CounterRng(seed.with_channel(0).key()),
                                 CounterRng(seed.with_channel(1).key()),
                                 CounterRng(seed.with_channel(2).key())};
  const int w = clean.width;
  parallel_for(static_cast<std::size_t>(clean.height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < w; ++x) {
      const Channel c = gbrg_channel(x, y);
      const int ci = static_cast<int>(c);
      const double s = params.sigma_s[ci];
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      out.data[i] = sample_one(clean.data[i], s * s, params.sigma_r[ci], rngs[ci], 8 * static_cast<std::uint64_t>(i));
    }
  });
  return out;
}

std::vector<float> noise_residual(std::span<const float> noisy, std::span<const float> clean) {
  require(noisy.size() == clean.size(), ErrorKind::Shape, "residual operands differ in size");
  std::vector<float> r(noisy.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = noisy[i] - clean[i];
  return r;
}

MeanVarianceFit fit_mean_variance(std::span<const double> mean, std::span<const double> variance) {
  require(mean.size() == variance.size(), ErrorKind::Shape, "mean/variance length mismatch");
  require(mean.size() >= 2, ErrorKind::Calibration, "need at least two samples to fit");
  const double n = static_cast<double>(mean.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mx += mean[i];
    my += variance[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    sxx += (mean[i] - mx) * (mean[i] - mx);
    sxy += (mean[i] - mx) * (variance[i] - my);
  }
  // Relative test so tiny normalized means are not mistaken for one level.
  require(sxx > 1e-24 * std::max(1.0, mx * mx) * n, ErrorKind::Calibration,
          "rank-deficient regression: all samples share one mean level");
  MeanVarianceFit fit;
  fit.slope = std::max(0.0, sxy / sxx);
  fit.intercept = std::max(0.0, my - fit.slope * mx);
  return fit;
}

NoiseParams estimate_params(std::span<const FlatStack> stacks, double iso) {
  NoiseParams out;
  out.iso = iso;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> mean, var;
    std::set<double> levels;
    for (const auto& s : stacks) {
      if (static_cast<int>(s.channel) != c) continue;
      require(s.mean.size() == s.variance.size(), ErrorKind::Shape, "flat stack mean/variance length mismatch");
      mean.insert(mean.end(), s.mean.begin(), s.mean.end());
      var.insert(var.end(), s.variance.begin(), s.variance.end());
      levels.insert(s.mean.begin(), s.mean.end());
    }
    require(levels.size() >= 2, ErrorKind::Calibration,
            "channel " + std::string(1, "RGB"[c]) + " needs at least two distinct mean levels");
    const auto fit = fit_mean_variance(mean, var);
    out.sigma_s[c] = std::sqrt(fit.slope);
    out.sigma_r[c] = std::sqrt(fit.intercept);
  }
  return out;
}

std::vector<FlatStack> flat_stacks_from_frames(std::span<const Mosaic> frames) {
  require(frames.size() >= 2, ErrorKind::Calibration, "need at least two frames per flat field");
  const int w = frames[0].width, h = frames[0].height;
  for (const auto& f : frames)
    require(f.width == w && f.height == h && f.cfa == CfaPattern::GBRG, ErrorKind::Shape,
            "flat-field frames must share size and GBRG pattern");
  std::vector<FlatStack> out(3);
  for (int c = 0; c < 3; ++c) out[c].channel = static_cast<Channel>(c);
  const double n = static_cast<double>(frames.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0, s2 = 0;
      for (const auto& f : frames) s += f.at(x, y);
      const double m = s / n;
      for (const auto& f : frames) s2 += (f.at(x, y) - m) * (f.at(x, y) - m);
      auto& stack = out[static_cast<int>(gbrg_channel(x, y))];
      stack.mean.push_back(m);
      stack.variance.push_back(s2 / (n - 1.0));
    }
  }
  return out;
}

Histogram model_residual_histogram(double clean_level, double sigma_s, double sigma_r,
                                   const Histogram& binning) {
  require(clean_level >= 0.0 && clean_level <= 1.0, ErrorKind::Domain, "clean level must lie in [0,1]");
  require(sigma_s >= 0.0 && sigma_r >= 0.0, ErrorKind::Parameter, "negative sigma");
  const double y = clean_level;
  const double shot_var = sigma_s * sigma_s;

  // Mixture components: (weight, mean of X before clamping).
  std::vector<std::pair<double, double>> comps;
  if (shot_var > 0.0) {
    const double rate = y / shot_var;
    const double sd = std::sqrt(std::max(rate, 1.0));
    const int lo = std::max(0, static_cast<int>(std::floor(rate - 12.0 * sd - 10)));
    const int hi = static_cast<int>(std::ceil(rate + 12.0 * sd + 10));
    for (int k = lo; k <= hi; ++k) {
      const double logp = k * std::log(std::max(rate, 1e-300)) - rate - std::lgamma(k + 1.0);
      const double p = rate > 0.0 ? std::exp(logp) : (k == 0 ? 1.0 : 0.0);
      if (p > 1e-16) comps.emplace_back(p, shot_var * k);
    }
  } else {
    comps.emplace_back(1.0, y);
  }

  // Left limit of the CDF of X (before clamping) at x.
  auto cdf_left = [&](double x) {
    double acc = 0.0;
    for (const auto& [w, mu] : comps) {
      if (sigma_r > 0.0) acc += w * 0.5 * std::erfc(-(x - mu) / (sigma_r * std::sqrt(2.0)));
      else acc += w * (mu < x ? 1.0 : 0.0);
    }
    return acc;
  };
  // Left limit of the CDF of the clamped residual R = clamp(X,0,1) - y.
  auto residual_cdf_left = [&](double r) {
    const double x = r + y;
    if (x <= 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return cdf_left(x);
  };

  const auto& e = binning.edges();
  std::vector<double> probs(binning.bins());
  for (int i = 0; i < binning.bins(); ++i) {
    const double a = (i == 0) ? -1e300 : e[i];
    const double b = (i == binning.bins() - 1) ? 1e300 : e[i + 1];
    probs[i] = std::max(0.0, residual_cdf_left(b) - residual_cdf_left(a));
  }
  Histogram h(e);
  h.set_counts(std::move(probs));
  return h;
}

}  // namespace rawvid
