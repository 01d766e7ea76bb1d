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

#include <doctest.h>

#include "rawvid/io/text_io.hpp"
#include "rawvid/isp/isp_config.hpp"
#include "rawvid/noise/calibration.hpp"
#include "rawvid/rvdt/config.hpp"

// The shipped config files mirror the builtin defaults exactly.
TEST_CASE("data directory matches the builtin defaults") {
  const std::filesystem::path dir(RAWVID_DATA_DIR);
  CHECK(rawvid::io::read_text(dir / "isp.json") == rawvid::IspConfig::defaults().serialize());
  CHECK(rawvid::io::read_text(dir / "noise_calibration.json") ==
        rawvid::CalibrationTable::builtin_default().serialize());
  CHECK(rawvid::io::read_text(dir / "model.json") == rawvid::rvdt::ModelConfig{}.serialize());
  CHECK(rawvid::IspConfig::load(dir / "isp.json") == rawvid::IspConfig::defaults());
}
