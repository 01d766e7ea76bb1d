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
#include <string>
#include <vector>

#include "rawvid/noise/noise_model.hpp"

namespace rawvid {

// Per-ISO noise parameters, ISO keys strictly increasing.
//
// Text form (JSON):
//   {"entries": [{"iso": 2500, "sigma_r": 0.0018, "sigma_s": [0.021, 0.0224, 0.023]}, ...]}
// sigma_r / sigma_s take either one number shared by R, G, B or an [R, G, B]
// triple.
class CalibrationTable {
 public:
  CalibrationTable() = default;
  explicit CalibrationTable(std::vector<NoiseParams> entries);

  const std::vector<NoiseParams>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  double min_iso() const;
  double max_iso() const;

  // Inserts or replaces the entry with params.iso.
  void upsert(const NoiseParams& params);

  static CalibrationTable parse(const std::string& text);
  static CalibrationTable load(const std::filesystem::path& path);
  std::string serialize() const;

  // Illustrative operating points for a full-frame sensor; see data/.
  static CalibrationTable builtin_default();

 private:
  void validate() const;
  std::vector<NoiseParams> entries_;
};

// Exact key -> stored entry; between keys, sigma^2 is interpolated linearly
// in ISO; outside the range the nearest endpoint is returned.
NoiseParams params_for_iso(const CalibrationTable& table, double iso);

}  // namespace rawvid
