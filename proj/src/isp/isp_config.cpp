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

#include "rawvid/isp/isp_config.hpp"

#include <json.hpp>

#include <cmath>

#include "rawvid/error.hpp"
#include "rawvid/io/text_io.hpp"

namespace rawvid {

using nlohmann::json;

TonemapCurve parse_tonemap(const std::string& name) {
  if (name == "aces_fit") return TonemapCurve::AcesFit;
  if (name == "reinhard") return TonemapCurve::Reinhard;
  if (name == "none") return TonemapCurve::None;
  fail(ErrorKind::Config, "unknown tonemap '" + name + "' (expected aces_fit, reinhard or none)");
}

std::string to_string(TonemapCurve curve) {
  switch (curve) {
    case TonemapCurve::AcesFit: return "aces_fit";
    case TonemapCurve::Reinhard: return "reinhard";
    case TonemapCurve::None: return "none";
  }
  return "?";
}

void IspConfig::validate() const {
  if (wb_gains) {
    for (double g : *wb_gains)
      require(std::isfinite(g) && g > 0.0, ErrorKind::Config, "white-balance gains must be positive");
  }
  require(ccm_low.temperature > 0.0 && ccm_low.temperature < ccm_high.temperature, ErrorKind::Config,
          "ccm_low temperature must be positive and below ccm_high temperature");
  require(ccm_low.matrix.finite() && ccm_high.matrix.finite(), ErrorKind::Config,
          "colour matrices must be finite");
  require(std::abs(ccm_low.matrix.determinant()) > 1e-6 && std::abs(ccm_high.matrix.determinant()) > 1e-6,
          ErrorKind::Config, "colour matrices must be invertible");
}

IspConfig IspConfig::defaults() {
  IspConfig cfg;
  // Forward-style matrices: rows sum to the D50 white so that a balanced
  // neutral lands on D50. See data/isp.json.
  cfg.ccm_low = {2856.0, {{0.6900, 0.2300, 0.0442,  //
                           0.2100, 0.8700, -0.0800, //
                           -0.0300, -0.2500, 1.1052}}};
  cfg.ccm_high = {6504.0, {{0.7850, 0.1450, 0.0342,  //
                            0.2900, 0.7700, -0.0600, //
                            0.0100, -0.1200, 0.9352}}};
  return cfg;
}

namespace {

ColorMatrix matrix_from_json(const json& j) {
  require(j.is_array() && j.size() == 9, ErrorKind::Config, "matrix must be an array of 9 numbers");
  ColorMatrix m;
  for (int i = 0; i < 9; ++i) m.m[i] = j[i].get<double>();
  return m;
}

json matrix_to_json(const ColorMatrix& m) {
  json a = json::array();
  for (double v : m.m) a.push_back(v);
  return a;
}

}  // namespace

IspConfig IspConfig::parse(const std::string& text) {
  IspConfig cfg = defaults();
  try {
    const json doc = json::parse(text);
    if (doc.contains("wb_gains")) {
      const auto& g = doc["wb_gains"];
      if (g.is_string()) {
        require(g.get<std::string>() == "auto", ErrorKind::Config, "wb_gains must be \"auto\" or [r, g, b]");
        cfg.wb_gains.reset();
      } else {
        require(g.is_array() && g.size() == 3, ErrorKind::Config, "wb_gains must be \"auto\" or [r, g, b]");
        cfg.wb_gains = std::array<double, 3>{g[0].get<double>(), g[1].get<double>(), g[2].get<double>()};
      }
    }
    if (doc.contains("ccm_low"))
      cfg.ccm_low = {doc["ccm_low"].at("temperature").get<double>(), matrix_from_json(doc["ccm_low"].at("matrix"))};
    if (doc.contains("ccm_high"))
      cfg.ccm_high = {doc["ccm_high"].at("temperature").get<double>(), matrix_from_json(doc["ccm_high"].at("matrix"))};
    if (doc.contains("tonemap")) cfg.tonemap = parse_tonemap(doc["tonemap"].get<std::string>());
    if (doc.contains("stages")) {
      const auto& s = doc["stages"];
      if (s.contains("color_temp_module")) cfg.color_temp_module = s["color_temp_module"].get<bool>();
      if (s.contains("tonemap")) cfg.tonemap_stage = s["tonemap"].get<bool>();
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("ISP config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

IspConfig IspConfig::load(const std::filesystem::path& path) { return parse(io::read_text(path)); }

std::string IspConfig::serialize() const {
  json doc;
  if (wb_gains) doc["wb_gains"] = {(*wb_gains)[0], (*wb_gains)[1], (*wb_gains)[2]};
  else doc["wb_gains"] = "auto";
  doc["ccm_low"] = {{"temperature", ccm_low.temperature}, {"matrix", matrix_to_json(ccm_low.matrix)}};
  doc["ccm_high"] = {{"temperature", ccm_high.temperature}, {"matrix", matrix_to_json(ccm_high.matrix)}};
  doc["tonemap"] = to_string(tonemap);
  doc["stages"] = {{"color_temp_module", color_temp_module}, {"tonemap", tonemap_stage}};
  doc["stage_order"] = render_stage_order();
  return doc.dump(2) + "\n";
}

std::uint64_t IspConfig::digest() const { return io::fnv1a(serialize()); }

void disable_stage(IspConfig& cfg, const std::string& stage) {
  if (stage == kStageColorTemp || stage == "color_temp_module") cfg.color_temp_module = false;
  else if (stage == kStageTonemap) cfg.tonemap_stage = false;
  else fail(ErrorKind::Usage, "unknown stage '" + stage + "' (expected color_temp or tonemap)");
}

const std::vector<std::string>& render_stage_order() {
  static const std::vector<std::string> order{
      "normalize", "noise",  "white_balance", "demosaic",    "cct_ccm", "camera_to_xyz",
      "xyz_to_prophoto", "tonemap", "prophoto_to_srgb", "gamma", "quantize"};
  return order;
}

}  // namespace rawvid
