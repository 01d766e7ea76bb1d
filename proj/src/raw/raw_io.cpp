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

#include "rawvid/raw/raw_io.hpp"

#include <bit>
#include <sstream>

#include "rawvid/error.hpp"
#include "rawvid/io/text_io.hpp"

namespace rawvid::raw_io {

namespace {

fs::path meta_path(const fs::path& raw_path) {
  fs::path m = raw_path;
  m.replace_extension(".meta");
  return m;
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void write_frame(const fs::path& raw_path, const BayerFrame& frame) {
  frame.validate();
  std::vector<std::uint8_t> bytes(frame.samples.size() * 2);
  for (std::size_t i = 0; i < frame.samples.size(); ++i) {
    bytes[2 * i] = static_cast<std::uint8_t>(frame.samples[i] & 0xff);
    bytes[2 * i + 1] = static_cast<std::uint8_t>(frame.samples[i] >> 8);
  }
  io::KeyValues kv{
      {"width", std::to_string(frame.width)},
      {"height", std::to_string(frame.height)},
      {"cfa", to_string(frame.cfa)},
      {"black_level", std::to_string(frame.black_level)},
      {"white_level", std::to_string(frame.white_level)},
      {"iso", format_number(frame.iso)},
  };
  io::write_atomic(raw_path, bytes);
  io::write_atomic(meta_path(raw_path), io::format_key_values(kv));
}

BayerFrame read_frame(const fs::path& raw_path) {
  const auto kv = io::parse_key_values(io::read_text(meta_path(raw_path)));
  BayerFrame f;
  f.width = static_cast<int>(io::kv_number(kv, "width"));
  f.height = static_cast<int>(io::kv_number(kv, "height"));
  f.cfa = parse_cfa(io::kv_string(kv, "cfa"));
  const double black = io::kv_number(kv, "black_level");
  const double white = io::kv_number(kv, "white_level");
  require(black >= 0 && white <= 65535, ErrorKind::Config, "levels outside 16-bit range");
  f.black_level = static_cast<std::uint16_t>(black);
  f.white_level = static_cast<std::uint16_t>(white);
  f.iso = io::kv_number(kv, "iso");
  const auto bytes = io::read_binary(raw_path);
  require(bytes.size() == static_cast<std::size_t>(f.width) * f.height * 2, ErrorKind::Shape,
          raw_path.string() + ": byte count does not match sidecar dimensions");
  f.samples.resize(bytes.size() / 2);
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    f.samples[i] = static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
  f.validate();
  return f;
}

std::vector<BayerFrame> read_clip(const fs::path& dir) {
  std::vector<BayerFrame> frames;
  for (const auto& p : io::list_numbered(dir, ".raw")) frames.push_back(read_frame(p));
  require(!frames.empty(), ErrorKind::Io, "no RAW frames in " + dir.string());
  return frames;
}

void write_clip(const fs::path& dir, const std::vector<BayerFrame>& frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) write_frame(dir / io::frame_name(i, ".raw"), frames[i]);
}

}  // namespace rawvid::raw_io
