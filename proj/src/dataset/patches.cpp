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

#include <algorithm>

#include "rawvid/dataset/dataset.hpp"
#include "rawvid/error.hpp"
#include "rawvid/noise/rng.hpp"

namespace rawvid {

namespace {

// Source coordinate of output pixel (x, y) after rotating by `rotation`
// quarter turns counter-clockwise and then flipping.
inline std::pair<int, int> source_of(int x, int y, int side, const PatchSpec& s) {
  if (s.flip_h) x = side - 1 - x;
  if (s.flip_v) y = side - 1 - y;
  for (int r = 0; r < (s.rotation & 3); ++r) {
    const int nx = side - 1 - y, ny = x;  // inverse of one CCW turn
    x = nx;
    y = ny;
  }
  return {x, y};
}

}  // namespace

std::vector<float> augment_planar(std::span<const float> src, int planes, int side, const PatchSpec& spec) {
  const std::size_t area = static_cast<std::size_t>(side) * side;
  require(src.size() == area * planes, ErrorKind::Shape, "patch buffer does not match its size");
  std::vector<float> out(src.size());
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const auto [sx, sy] = source_of(x, y, side, spec);
      for (int p = 0; p < planes; ++p)
        out[p * area + static_cast<std::size_t>(y) * side + x] = src[p * area + static_cast<std::size_t>(sy) * side + sx];
    }
  return out;
}

std::vector<PatchSpec> sample_patch_specs(int mosaic_width, int mosaic_height, int size, std::size_t count,
                                          std::uint64_t seed, bool augment) {
  require(size > 0 && size % 2 == 0, ErrorKind::Parameter, "patch size must be positive and even");
  require(size <= mosaic_width && size <= mosaic_height, ErrorKind::Parameter,
          "patch size exceeds the frame dimensions");
  const int half = size / 2;
  const int span_x = mosaic_width / 2 - half + 1, span_y = mosaic_height / 2 - half + 1;
  const CounterRng rng(splitmix64(seed ^ 0x7061746368ull));
  std::vector<PatchSpec> specs(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t c = 8 * i;
    PatchSpec& s = specs[i];
    s.size = size;
    s.packed_x = static_cast<int>(rng.below(static_cast<std::uint64_t>(span_x), c));
    s.packed_y = static_cast<int>(rng.below(static_cast<std::uint64_t>(span_y), c + 1));
    if (augment) {
      s.rotation = static_cast<int>(rng.below(4, c + 2));
      s.flip_h = rng.below(2, c + 3) == 1;
      s.flip_v = rng.below(2, c + 4) == 1;
    }
  }
  return specs;
}

namespace {

PackedRaw crop_packed(const PackedRaw& src, const PatchSpec& s) {
  const int side = s.size / 2;
  PackedRaw out;
  out.width = out.height = side;
  std::vector<float> buf(static_cast<std::size_t>(PackedRaw::kPlanes) * side * side);
  for (int p = 0; p < PackedRaw::kPlanes; ++p) {
    const auto plane = src.plane(p);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x)
        buf[(static_cast<std::size_t>(p) * side + y) * side + x] =
            plane[static_cast<std::size_t>(s.packed_y + y) * src.width + s.packed_x + x];
  }
  out.data = augment_planar(buf, PackedRaw::kPlanes, side, s);
  return out;
}

Rgb8Image crop_rgb8(const Rgb8Image& src, const PatchSpec& s) {
  const int side = s.size;
  const int ox = s.mosaic_x(), oy = s.mosaic_y();
  Rgb8Image out{side, side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side * 3)};
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const auto [sx, sy] = source_of(x, y, side, s);
      for (int c = 0; c < 3; ++c)
        out.data[(static_cast<std::size_t>(y) * side + x) * 3 + c] =
            src.data[(static_cast<std::size_t>(oy + sy) * src.width + ox + sx) * 3 + c];
    }
  return out;
}

}  // namespace

std::vector<Patch> extract_patches(const ClipPair& pair, int size, std::size_t count, std::uint64_t seed,
                                   bool augment) {
  if (count == 0) return {};
  require(!pair.clean_raw.empty(), ErrorKind::Shape, "clip pair has no frames");
  const int w = pair.clean_raw.front().width, h = pair.clean_raw.front().height;
  const auto specs = sample_patch_specs(w, h, size, count, seed, augment);
  const std::size_t frames = pair.clean_raw.size();
  std::vector<PackedRaw> clean(frames), noisy(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    clean[t] = pack_gbrg(normalize(pair.clean_raw[t]));
    noisy[t] = pack_gbrg(normalize(pair.noisy_raw[t]));
  }
  std::vector<Patch> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    Patch& p = out[i];
    p.spec = specs[i];
    for (std::size_t t = 0; t < frames; ++t) {
      p.clean_raw.push_back(crop_packed(clean[t], p.spec));
      p.noisy_raw.push_back(crop_packed(noisy[t], p.spec));
      p.clean_srgb.push_back(crop_rgb8(pair.clean_srgb[t], p.spec));
      p.noisy_srgb.push_back(crop_rgb8(pair.noisy_srgb[t], p.spec));
    }
  }
  return out;
}

}  // namespace rawvid
