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

#include <filesystem>
#include <vector>

#include "rawvid/raw/bayer.hpp"

// RAW frame files: little-endian uint16 row-major samples in NNNNNN.raw and a
// "key = value" sidecar NNNNNN.meta with width, height, cfa, black_level,
// white_level and iso. A clip is a directory of such numbered frames.
namespace rawvid::raw_io {

namespace fs = std::filesystem;

void write_frame(const fs::path& raw_path, const BayerFrame& frame);
BayerFrame read_frame(const fs::path& raw_path);

std::vector<BayerFrame> read_clip(const fs::path& dir);
void write_clip(const fs::path& dir, const std::vector<BayerFrame>& frames);

}  // namespace rawvid::raw_io
