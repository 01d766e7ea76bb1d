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

// Writes synthetic fixtures for the CLI smoke test:
//   rawvid_make_clip raw <dir> <clips> <frames> <width> <height>
//   rawvid_make_clip png <dir> <frames> <width> <height>
//   rawvid_make_clip flat <dir> <levels> <frames> <width> <height> <iso>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "rawvid/io/png_io.hpp"
#include "rawvid/io/text_io.hpp"
#include "rawvid/isp/isp.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/raw/raw_io.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  using namespace rawvid;
  const std::string mode = argc > 1 ? argv[1] : "";
  if (mode == "raw" && argc == 7) {
    const int clips = std::atoi(argv[3]), frames = std::atoi(argv[4]);
    const int w = std::atoi(argv[5]), h = std::atoi(argv[6]);
    for (int c = 0; c < clips; ++c)
      raw_io::write_clip(std::filesystem::path(argv[2]) / ("clip_" + std::to_string(c)),
                         testing::scene_clip(w, h, frames, 1.0 + c, 0.5, 40 + static_cast<std::uint64_t>(c)));
    return 0;
  }
  if (mode == "png" && argc == 6) {
    const int frames = std::atoi(argv[3]), w = std::atoi(argv[4]), h = std::atoi(argv[5]);
    const IspConfig cfg = IspConfig::defaults();
    for (int i = 0; i < frames; ++i) {
      const BayerFrame f = testing::scene_frame(w, h, 2.0 * i, 0.0);
      io::write_png(std::filesystem::path(argv[2]) / io::frame_name(static_cast<std::size_t>(i), ".png"),
                    render(f, std::nullopt, cfg, {}));
    }
    return 0;
  }
  if (mode == "flat" && argc == 8) {
    // Flat fields with the builtin noise of the given ISO, one level per sub-directory.
    const int levels = std::atoi(argv[3]), frames = std::atoi(argv[4]);
    const int w = std::atoi(argv[5]), h = std::atoi(argv[6]);
    const double iso = std::atof(argv[7]);
    const NoiseParams p = params_for_iso(CalibrationTable::builtin_default(), iso);
    for (int l = 0; l < levels; ++l) {
      Mosaic flat{w, h, CfaPattern::GBRG, std::vector<float>(static_cast<std::size_t>(w) * h, 0.1f + 0.7f * l / levels)};
      std::vector<BayerFrame> clip;
      for (int f = 0; f < frames; ++f)
        clip.push_back(denormalize(sample_noisy(flat, p, SeedSpec{5, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(f), 0}),
                                   0, 65535, iso));
      raw_io::write_clip(std::filesystem::path(argv[2]) / ("level_" + std::to_string(l)), clip);
    }
    return 0;
  }
  std::fprintf(stderr, "usage: rawvid_make_clip raw <dir> <clips> <frames> <w> <h> | png <dir> <frames> <w> <h> | "
                       "flat <dir> <levels> <frames> <w> <h> <iso>\n");
  return 2;
}
