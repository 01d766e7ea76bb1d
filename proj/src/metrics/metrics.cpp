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

#include "rawvid/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/simd/kernels.hpp"

namespace rawvid {

double psnr(std::span<const float> a, std::span<const float> b, double peak) {
  require(a.size() == b.size() && !a.empty(), ErrorKind::Shape, "psnr operands must have equal, non-zero size");
  require(peak > 0.0, ErrorKind::Parameter, "peak must be positive");
  const double mse = simd::sum_sq_diff(a.size(), a.data(), b.data()) / static_cast<double>(a.size());
  if (mse == 0.0) return kInfiniteDb;
  return 10.0 * std::log10(peak * peak / mse);
}

namespace {

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> k(size);
  const int r = size / 2;
  double s = 0;
  for (int i = 0; i < size; ++i) {
    k[i] = std::exp(-0.5 * (i - r) * (i - r) / (sigma * sigma));
    s += k[i];
  }
  for (double& v : k) v /= s;
  return k;
}

// Valid-region separable filter: out is (w - n + 1) x (h - n + 1).
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h, const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1, oh = h - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += k[i] * src[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

double ssim_plane(std::span<const float> a, std::span<const float> b, int w, int h, const SsimParams& p) {
  const auto k = gaussian_taps(p.window, p.sigma);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a[i];
    y[i] = b[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, k), my = filter_valid(y, w, h, k);
  const auto sxx = filter_valid(xx, w, h, k), syy = filter_valid(yy, w, h, k), sxy = filter_valid(xy, w, h, k);
  const double c1 = (p.k1 * p.peak) * (p.k1 * p.peak);
  const double c2 = (p.k2 * p.peak) * (p.k2 * p.peak);
  double total = 0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    const double num = (2 * mx[i] * my[i] + c1) * (2 * cov + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace

double ssim(const ImageView& a, const ImageView& b, const SsimParams& params) {
  require(a.width == b.width && a.height == b.height && a.channels == b.channels, ErrorKind::Shape,
          "ssim operands must have equal shape");
  require(a.data.size() == a.plane_size() * a.channels && b.data.size() == b.plane_size() * b.channels,
          ErrorKind::Shape, "ssim image buffers do not match their declared shape");
  require(a.width >= params.window && a.height >= params.window, ErrorKind::Shape,
          "image is smaller than the SSIM window");
  if (std::equal(a.data.begin(), a.data.end(), b.data.begin())) return 1.0;
  double s = 0;
  for (int c = 0; c < a.channels; ++c) s += ssim_plane(a.plane(c), b.plane(c), a.width, a.height, params);
  return s / a.channels;
}

double snr(std::span<const float> signal, std::span<const float> noisy) {
  require(signal.size() == noisy.size() && !signal.empty(), ErrorKind::Shape, "snr operands must have equal size");
  const double noise = simd::sum_sq_diff(signal.size(), noisy.data(), signal.data());
  if (noise == 0.0) return kInfiniteDb;
  const double power = simd::sum_sq(signal.size(), signal.data());
  return 10.0 * std::log10(power / noise);
}

std::vector<float> temporal_average(std::span<const std::vector<float>> frames, std::size_t n) {
  require(n > 0, ErrorKind::Parameter, "temporal average needs n > 0");
  require(n <= frames.size(), ErrorKind::Parameter, "temporal average needs at least n frames");
  const std::size_t len = frames[0].size();
  std::vector<double> acc(len, 0.0);
  for (std::size_t f = 0; f < n; ++f) {
    require(frames[f].size() == len, ErrorKind::Shape, "frames differ in size");
    for (std::size_t i = 0; i < len; ++i) acc[i] += frames[f][i];
  }
  std::vector<float> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = static_cast<float>(acc[i] / static_cast<double>(n));
  return out;
}

double kl_divergence(const Histogram& p, const Histogram& q) {
  require(p.same_binning(q), ErrorKind::Shape, "KL operands must share binning");
  require(p.total() > 0 && q.total() > 0, ErrorKind::Parameter, "KL operands must be non-empty");
  const auto pn = p.normalized(), qn = q.normalized();
  double kl = 0;
  for (std::size_t i = 0; i < pn.size(); ++i) {
    if (pn[i] <= 0.0) continue;
    kl += pn[i] * std::log(pn[i] / std::max(qn[i], kKlFloor));
  }
  return kl;
}

double residual_kl(std::span<const std::vector<float>> reference, std::span<const std::vector<float>> candidate,
                   const Histogram& binning, KlMode mode) {
  require(!reference.empty() && !candidate.empty(), ErrorKind::Parameter, "residual sets must be non-empty");
  if (mode == KlMode::Pooled) {
    Histogram p(binning.edges()), q(binning.edges());
    for (const auto& f : reference) p.add_all(f);
    for (const auto& f : candidate) q.add_all(f);
    return kl_divergence(p, q);
  }
  const std::size_t len = reference[0].size();
  for (const auto& f : reference) require(f.size() == len, ErrorKind::Shape, "residual frames differ in size");
  for (const auto& f : candidate) require(f.size() == len, ErrorKind::Shape, "residual frames differ in size");
  double acc = 0;
  for (std::size_t i = 0; i < len; ++i) {
    Histogram p(binning.edges()), q(binning.edges());
    for (const auto& f : reference) p.add(f[i]);
    for (const auto& f : candidate) q.add(f[i]);
    acc += kl_divergence(p, q);
  }
  return acc / static_cast<double>(len);
}

Histogram default_residual_binning() { return Histogram::uniform(-1.0, 1.0, 256); }

double MetricReport::mean_psnr() const {
  double s = 0;
  std::size_t n = 0;
  for (const auto& f : frames_) {
    if (is_infinite_db(f.psnr)) continue;
    s += f.psnr;
    ++n;
  }
  return n ? s / static_cast<double>(n) : kInfiniteDb;
}

double MetricReport::mean_ssim() const {
  if (frames_.empty()) return 0.0;
  double s = 0;
  for (const auto& f : frames_) s += f.ssim;
  return s / static_cast<double>(frames_.size());
}

std::size_t MetricReport::excluded_infinite() const {
  std::size_t n = 0;
  for (const auto& f : frames_) n += is_infinite_db(f.psnr) ? 1 : 0;
  return n;
}

}  // namespace rawvid
