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

#include "rawvid/noise/calibration.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/io/text_io.hpp"

namespace rawvid {

using nlohmann::json;

CalibrationTable::CalibrationTable(std::vector<NoiseParams> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const NoiseParams& a, const NoiseParams& b) { return a.iso < b.iso; });
  validate();
}

void CalibrationTable::validate() const {
  require(!entries_.empty(), ErrorKind::Config, "calibration table is empty");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i].validate();
    require(entries_[i].iso > 0.0, ErrorKind::Config, "ISO keys must be positive");
    if (i > 0)
      require(entries_[i].iso > entries_[i - 1].iso, ErrorKind::Config,
              "ISO keys must be strictly increasing");
  }
}

double CalibrationTable::min_iso() const {
  require(!entries_.empty(), ErrorKind::Config, "calibration table is empty");
  return entries_.front().iso;
}

double CalibrationTable::max_iso() const {
  require(!entries_.empty(), ErrorKind::Config, "calibration table is empty");
  return entries_.back().iso;
}

void CalibrationTable::upsert(const NoiseParams& params) {
  params.validate();
  auto it = std::lower_bound(entries_.begin(), entries_.end(), params.iso,
                             [](const NoiseParams& e, double iso) { return e.iso < iso; });
  if (it != entries_.end() && it->iso == params.iso) *it = params;
  else entries_.insert(it, params);
}

namespace {

std::array<double, 3> read_triple(const json& v, const char* name) {
  if (v.is_number()) {
    const double x = v.get<double>();
    return {x, x, x};
  }
  require(v.is_array() && v.size() == 3, ErrorKind::Config,
          std::string(name) + " must be a number or an [R, G, B] triple");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json write_triple(const std::array<double, 3>& t) {
  if (t[0] == t[1] && t[1] == t[2]) return t[0];
  return json::array({t[0], t[1], t[2]});
}

}  // namespace

CalibrationTable CalibrationTable::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("calibration table: ") + e.what());
  }
  require(doc.contains("entries") && doc["entries"].is_array(), ErrorKind::Config,
          "calibration table needs an 'entries' array");
  std::vector<NoiseParams> entries;
  try {
    for (const auto& e : doc["entries"]) {
      NoiseParams p;
      p.iso = e.at("iso").get<double>();
      p.sigma_r = read_triple(e.at("sigma_r"), "sigma_r");
      p.sigma_s = read_triple(e.at("sigma_s"), "sigma_s");
      entries.push_back(p);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("calibration table: ") + e.what());
  }
  // Keep the order the file declares so a non-increasing file is rejected.
  CalibrationTable t;
  t.entries_ = std::move(entries);
  t.validate();
  return t;
}

CalibrationTable CalibrationTable::load(const std::filesystem::path& path) {
  return parse(io::read_text(path));
}

std::string CalibrationTable::serialize() const {
  json entries = json::array();
  for (const auto& e : entries_)
    entries.push_back({{"iso", e.iso}, {"sigma_r", write_triple(e.sigma_r)}, {"sigma_s", write_triple(e.sigma_s)}});
  return json{{"entries", entries}}.dump(2) + "\n";
}

CalibrationTable CalibrationTable::builtin_default() {
  // Normalized-signal units. Shot scale grows ~sqrt(ISO); red and blue sites
  // run slightly noisier than green after the analogue colour gains.
  return CalibrationTable({
      {100, {0.00060, 0.00055, 0.00062}, {0.0047, 0.0045, 0.0048}},
      {800, {0.00100, 0.00095, 0.00104}, {0.0131, 0.0127, 0.0134}},
      {2500, {0.00185, 0.00175, 0.00190}, {0.0230, 0.0224, 0.0236}},
      {8000, {0.00360, 0.00345, 0.00372}, {0.0412, 0.0400, 0.0420}},
      {20000, {0.00720, 0.00700, 0.00740}, {0.0650, 0.0632, 0.0662}},
      {51200, {0.01500, 0.01450, 0.01540}, {0.1040, 0.1010, 0.1060}},
  });
}

NoiseParams params_for_iso(const CalibrationTable& table, double iso) {
  require(!table.empty(), ErrorKind::Config, "calibration table is empty");
  require(std::isfinite(iso) && iso > 0.0, ErrorKind::Parameter, "ISO must be positive");
  const auto& e = table.entries();
  if (iso <= e.front().iso) return e.front();
  if (iso >= e.back().iso) return e.back();
  auto hi = std::lower_bound(e.begin(), e.end(), iso, [](const NoiseParams& p, double v) { return p.iso < v; });
  if (hi->iso == iso) return *hi;
  auto lo = hi - 1;
  const double t = (iso - lo->iso) / (hi->iso - lo->iso);
  NoiseParams out;
  out.iso = iso;
  for (int c = 0; c < 3; ++c) {
    const double r2 = (1 - t) * lo->sigma_r[c] * lo->sigma_r[c] + t * hi->sigma_r[c] * hi->sigma_r[c];
    const double s2 = (1 - t) * lo->sigma_s[c] * lo->sigma_s[c] + t * hi->sigma_s[c] * hi->sigma_s[c];
    out.sigma_r[c] = std::sqrt(r2);
    out.sigma_s[c] = std::sqrt(s2);
  }
  return out;
}

}  // namespace rawvid
