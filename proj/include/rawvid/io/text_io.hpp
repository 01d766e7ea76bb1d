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

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rawvid::io {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path);
std::vector<std::uint8_t> read_binary(const fs::path& path);

// Writes to a sibling temporary file and renames it into place.
void write_atomic(const fs::path& path, std::span<const std::uint8_t> bytes);
void write_atomic(const fs::path& path, std::string_view text);

// "key = value" lines; '#' starts a comment. Duplicate keys are an error.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(std::string_view text);
std::string format_key_values(const KeyValues& kv);

double kv_number(const KeyValues& kv, const std::string& key);
std::string kv_string(const KeyValues& kv, const std::string& key);

// Zero-padded six digit frame file name: 000042.raw
std::string frame_name(std::size_t index, std::string_view ext);

// Files in dir whose name is digits + ext, in numeric order.
std::vector<fs::path> list_numbered(const fs::path& dir, std::string_view ext);

// 64-bit FNV-1a, used for config digests and seed derivation from names.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace rawvid::io
