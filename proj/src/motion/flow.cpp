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

#include "rawvid/motion/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rawvid/error.hpp"

namespace rawvid {

GrayImage to_gray(const Rgb8Image& img) {
  GrayImage g{img.width, img.height, std::vector<float>(static_cast<std::size_t>(img.width) * img.height)};
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    const double r = img.data[3 * i], gg = img.data[3 * i + 1], b = img.data[3 * i + 2];
    g.data[i] = static_cast<float>((0.2126 * r + 0.7152 * gg + 0.0722 * b) / 255.0);
  }
  return g;
}

GrayImage to_gray(const RgbImage& img) {
  GrayImage g{img.width, img.height, std::vector<float>(img.pixels())};
  auto r = img.plane(0), gg = img.plane(1), b = img.plane(2);
  for (std::size_t i = 0; i < g.data.size(); ++i)
    g.data[i] = static_cast<float>(0.2126 * r[i] + 0.7152 * gg[i] + 0.0722 * b[i]);
  return g;
}

namespace {

inline int reflect101(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

using Plane = std::vector<float>;

// Correlates rows then columns with the given 1-D kernels (centred).
Plane separable(const Plane& src, int w, int h, const std::vector<double>& kx, const std::vector<double>& ky) {
  const int rx = static_cast<int>(kx.size()) / 2, ry = static_cast<int>(ky.size()) / 2;
  std::vector<double> tmp(src.size());
  for (int y = 0; y < h; ++y) {
    const float* row = src.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -rx; i <= rx; ++i) s += kx[i + rx] * row[reflect101(x + i, w)];
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  Plane out(src.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -ry; i <= ry; ++i) s += ky[i + ry] * tmp[static_cast<std::size_t>(reflect101(y + i, h)) * w + x];
      out[static_cast<std::size_t>(y) * w + x] = static_cast<float>(s);
    }
  return out;
}

std::vector<double> gaussian_kernel(int radius, double sigma) {
  std::vector<double> k(2 * radius + 1);
  double s = 0;
  for (int i = -radius; i <= radius; ++i) s += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k) v /= s;
  return k;
}

Plane gaussian_blur(const Plane& src, int w, int h, double sigma) {
  if (sigma <= 0) return src;
  const int radius = std::max(1, static_cast<int>(std::lround(sigma * 2.5)));
  const auto k = gaussian_kernel(radius, sigma);
  return separable(src, w, h, k, k);
}

Plane window_blur(const Plane& src, int w, int h, int window, bool gaussian) {
  const int radius = window / 2;
  std::vector<double> k;
  if (gaussian) k = gaussian_kernel(radius, 0.3 * radius + 0.5);
  else k.assign(2 * radius + 1, 1.0 / (2 * radius + 1));
  return separable(src, w, h, k, k);
}

// Pixel-centre aligned bilinear resize.
Plane resize(const Plane& src, int sw, int sh, int dw, int dh) {
  Plane out(static_cast<std::size_t>(dw) * dh);
  const double fx = static_cast<double>(sw) / dw, fy = static_cast<double>(sh) / dh;
  for (int y = 0; y < dh; ++y) {
    const double sy = std::clamp((y + 0.5) * fy - 0.5, 0.0, sh - 1.0);
    const int y0 = static_cast<int>(sy), y1 = std::min(y0 + 1, sh - 1);
    const double ty = sy - y0;
    for (int x = 0; x < dw; ++x) {
      const double sx = std::clamp((x + 0.5) * fx - 0.5, 0.0, sw - 1.0);
      const int x0 = static_cast<int>(sx), x1 = std::min(x0 + 1, sw - 1);
      const double tx = sx - x0;
      const double top = (1 - tx) * src[static_cast<std::size_t>(y0) * sw + x0] + tx * src[static_cast<std::size_t>(y0) * sw + x1];
      const double bot = (1 - tx) * src[static_cast<std::size_t>(y1) * sw + x0] + tx * src[static_cast<std::size_t>(y1) * sw + x1];
      out[static_cast<std::size_t>(y) * dw + x] = static_cast<float>((1 - ty) * top + ty * bot);
    }
  }
  return out;
}

inline float bilinear(const Plane& p, int w, int h, double x, double y) {
  x = std::clamp(x, 0.0, w - 1.0);
  y = std::clamp(y, 0.0, h - 1.0);
  const int x0 = static_cast<int>(x), y0 = static_cast<int>(y);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double tx = x - x0, ty = y - y0;
  const double top = (1 - tx) * p[static_cast<std::size_t>(y0) * w + x0] + tx * p[static_cast<std::size_t>(y0) * w + x1];
  const double bot = (1 - tx) * p[static_cast<std::size_t>(y1) * w + x0] + tx * p[static_cast<std::size_t>(y1) * w + x1];
  return static_cast<float>((1 - ty) * top + ty * bot);
}

// Solves G c = r for the 6x6 Gram matrix once; returns G^{-1}.
std::array<std::array<double, 6>, 6> inverse6(std::array<std::array<double, 6>, 6> a) {
  std::array<std::array<double, 6>, 6> inv{};
  for (int i = 0; i < 6; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < 6; ++col) {
    int piv = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    const double d = a[col][col];
    require(std::abs(d) > 1e-300, ErrorKind::Parameter, "singular polynomial basis");
    for (int j = 0; j < 6; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < 6; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (int j = 0; j < 6; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace

PolyExpansion polynomial_expansion(const GrayImage& img, int n, double sigma) {
  require(n >= 1 && sigma > 0, ErrorKind::Parameter, "invalid polynomial expansion parameters");
  const int w = img.width, h = img.height;
  const auto g = gaussian_kernel(n, sigma);
  std::vector<double> gx(g.size()), gxx(g.size());
  for (int i = -n; i <= n; ++i) {
    gx[i + n] = g[i + n] * i;
    gxx[i + n] = g[i + n] * i * i;
  }
  // Basis order: 1, x, y, x^2, y^2, xy.
  std::array<std::array<double, 6>, 6> gram{};
  for (int y = -n; y <= n; ++y)
    for (int x = -n; x <= n; ++x) {
      const double wgt = g[x + n] * g[y + n];
      const std::array<double, 6> b{1.0, double(x), double(y), double(x) * x, double(y) * y, double(x) * y};
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) gram[i][j] += wgt * b[i] * b[j];
    }
  const auto ginv = inverse6(gram);

  const std::vector<double> one{1.0};
  const Plane h0 = separable(img.data, w, h, g, one);
  const Plane h1 = separable(img.data, w, h, gx, one);
  const Plane h2 = separable(img.data, w, h, gxx, one);
  const std::array<Plane, 6> r{
      separable(h0, w, h, one, g),    // 1
      separable(h1, w, h, one, g),    // x
      separable(h0, w, h, one, gx),   // y
      separable(h2, w, h, one, g),    // x^2
      separable(h0, w, h, one, gxx),  // y^2
      separable(h1, w, h, one, gx),   // xy
  };

  PolyExpansion out;
  out.width = w;
  out.height = h;
  const std::size_t count = img.data.size();
  out.a11.resize(count);
  out.a12.resize(count);
  out.a22.resize(count);
  out.b1.resize(count);
  out.b2.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    std::array<double, 6> c{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) c[i] += ginv[i][j] * r[j][p];
    out.b1[p] = static_cast<float>(c[1]);
    out.b2[p] = static_cast<float>(c[2]);
    out.a11[p] = static_cast<float>(c[3]);
    out.a22[p] = static_cast<float>(c[4]);
    out.a12[p] = static_cast<float>(0.5 * c[5]);
  }
  return out;
}

namespace {

void refine_flow(const PolyExpansion& r0, const PolyExpansion& r1, FlowField& flow, const FlowConfig& cfg) {
  const int w = r0.width, h = r0.height;
  const std::size_t count = static_cast<std::size_t>(w) * h;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    Plane g11(count), g12(count), g22(count), hb1(count), hb2(count);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        const double dx = flow.u[p], dy = flow.v[p];
        const double sx = x + dx, sy = y + dy;
        const double a11 = 0.5 * (r0.a11[p] + bilinear(r1.a11, w, h, sx, sy));
        const double a12 = 0.5 * (r0.a12[p] + bilinear(r1.a12, w, h, sx, sy));
        const double a22 = 0.5 * (r0.a22[p] + bilinear(r1.a22, w, h, sx, sy));
        const double db1 = -0.5 * (bilinear(r1.b1, w, h, sx, sy) - r0.b1[p]) + a11 * dx + a12 * dy;
        const double db2 = -0.5 * (bilinear(r1.b2, w, h, sx, sy) - r0.b2[p]) + a12 * dx + a22 * dy;
        g11[p] = static_cast<float>(a11 * a11 + a12 * a12);
        g12[p] = static_cast<float>(a11 * a12 + a12 * a22);
        g22[p] = static_cast<float>(a12 * a12 + a22 * a22);
        hb1[p] = static_cast<float>(a11 * db1 + a12 * db2);
        hb2[p] = static_cast<float>(a12 * db1 + a22 * db2);
      }
    g11 = window_blur(g11, w, h, cfg.window, cfg.gaussian_window);
    g12 = window_blur(g12, w, h, cfg.window, cfg.gaussian_window);
    g22 = window_blur(g22, w, h, cfg.window, cfg.gaussian_window);
    hb1 = window_blur(hb1, w, h, cfg.window, cfg.gaussian_window);
    hb2 = window_blur(hb2, w, h, cfg.window, cfg.gaussian_window);
    for (std::size_t p = 0; p < count; ++p) {
      const double tr = static_cast<double>(g11[p]) + g22[p];
      const double det = static_cast<double>(g11[p]) * g22[p] - static_cast<double>(g12[p]) * g12[p] +
                         cfg.regularization * tr * tr + 1e-12;
      flow.u[p] = static_cast<float>((g22[p] * hb1[p] - g12[p] * hb2[p]) / det);
      flow.v[p] = static_cast<float>((g11[p] * hb2[p] - g12[p] * hb1[p]) / det);
    }
  }
}

}  // namespace

FlowField dense_flow(const GrayImage& f0, const GrayImage& f1, const FlowConfig& cfg) {
  require(f0.width == f1.width && f0.height == f1.height, ErrorKind::Shape, "flow frames must have equal size");
  require(f0.data.size() == static_cast<std::size_t>(f0.width) * f0.height &&
              f1.data.size() == f0.data.size(),
          ErrorKind::Shape, "flow frame buffers do not match their size");
  require(cfg.levels >= 1 && cfg.scale > 0.0 && cfg.scale < 1.0 && cfg.window >= 1 && cfg.iterations >= 1 &&
              cfg.regularization >= 0.0,
          ErrorKind::Parameter, "invalid flow configuration");
  const int min_side = 2 * cfg.poly_n + 1;
  const double coarsest = std::pow(cfg.scale, cfg.levels - 1);
  const int cw = static_cast<int>(std::lround(f0.width * coarsest));
  const int ch = static_cast<int>(std::lround(f0.height * coarsest));
  require(cw >= min_side && ch >= min_side, ErrorKind::Shape,
          "frames are smaller than the coarsest pyramid level allows");

  // 8-bit intensity scale; the absolute floor of the solve assumes it.
  Plane i0(f0.data.size()), i1(f1.data.size());
  for (std::size_t i = 0; i < i0.size(); ++i) {
    i0[i] = f0.data[i] * 255.0f;
    i1[i] = f1.data[i] * 255.0f;
  }

  FlowField flow;
  int prev_w = 0, prev_h = 0;
  for (int level = cfg.levels - 1; level >= 0; --level) {
    const double s = std::pow(cfg.scale, level);
    const int w = static_cast<int>(std::lround(f0.width * s));
    const int h = static_cast<int>(std::lround(f0.height * s));
    const double sigma = (1.0 / s - 1.0) * 0.5;
    GrayImage l0{w, h, {}}, l1{w, h, {}};
    if (level == 0) {
      l0.data = i0;
      l1.data = i1;
    } else {
      l0.data = resize(gaussian_blur(i0, f0.width, f0.height, sigma), f0.width, f0.height, w, h);
      l1.data = resize(gaussian_blur(i1, f0.width, f0.height, sigma), f0.width, f0.height, w, h);
    }
    if (flow.u.empty()) {
      flow.width = w;
      flow.height = h;
      flow.u.assign(static_cast<std::size_t>(w) * h, 0.0f);
      flow.v.assign(static_cast<std::size_t>(w) * h, 0.0f);
    } else {
      Plane u = resize(flow.u, prev_w, prev_h, w, h);
      Plane v = resize(flow.v, prev_w, prev_h, w, h);
      const float sx = static_cast<float>(w) / prev_w, sy = static_cast<float>(h) / prev_h;
      for (auto& x : u) x *= sx;
      for (auto& y : v) y *= sy;
      flow = {w, h, std::move(u), std::move(v)};
    }
    const auto r0 = polynomial_expansion(l0, cfg.poly_n, cfg.poly_sigma);
    const auto r1 = polynomial_expansion(l1, cfg.poly_n, cfg.poly_sigma);
    refine_flow(r0, r1, flow, cfg);
    prev_w = w;
    prev_h = h;
  }
  return flow;
}

}  // namespace rawvid
