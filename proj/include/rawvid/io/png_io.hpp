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

#include "rawvid/raw/bayer.hpp"

namespace rawvid::io {

// 8-bit RGB PNG. Grayscale, palette and alpha inputs are expanded or
// stripped; 16-bit inputs are reduced to 8 bits. Output carries no time or
// text chunks so equal images give equal bytes.
Rgb8Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Rgb8Image& img);

// Interleaved 8-bit -> planar float in [0,1], tagged SrgbEncoded.
RgbImage to_float(const Rgb8Image& img);

}  // namespace rawvid::io
