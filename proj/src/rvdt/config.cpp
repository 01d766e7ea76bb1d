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

#include "rawvid/rvdt/config.hpp"

#include <cmath>
#include <json.hpp>

#include "rawvid/error.hpp"
#include "rawvid/io/text_io.hpp"

namespace rawvid::rvdt {

using nlohmann::json;

int ModelConfig::hidden() const { return static_cast<int>(std::lround(channels * mlp_ratio)); }

void ModelConfig::validate() const {
  require(image_channels == 3 || image_channels == 4, ErrorKind::Config, "image_channels must be 3 or 4");
  require(channels > 0 && heads > 0 && channels % heads == 0, ErrorKind::Config,
          "channels must be a positive multiple of heads");
  require(temporal_layers >= 2, ErrorKind::Config, "temporal_layers must be at least 2");
  require(window >= 1 && temporal_window >= 1 && temporal_window <= 2, ErrorKind::Config,
          "window must be positive and temporal_window 1 or 2");
  require(mlp_ratio > 0.0 && hidden() >= 1, ErrorKind::Config, "mlp_ratio must be positive");
  require(spatial_blocks >= 0, ErrorKind::Config, "spatial_blocks must be non-negative");
  require(unet_channels > 0, ErrorKind::Config, "unet_channels must be positive");
  require(ca_reduction >= 1 && hidden() / ca_reduction >= 1, ErrorKind::Config,
          "ca_reduction too large for the MLP width");
  require(!shifted_windows, ErrorKind::Config, "shifted windows are not supported");
}

std::string ModelConfig::serialize() const {
  json j{{"image_channels", image_channels}, {"channels", channels},       {"temporal_layers", temporal_layers},
         {"window", window},                 {"temporal_window", temporal_window}, {"heads", heads},
         {"mlp_ratio", mlp_ratio},           {"spatial_blocks", spatial_blocks},
         {"unet_channels", unet_channels},   {"blind", blind},             {"csa_mlp", csa_mlp},
         {"tie_directions", tie_directions}, {"ca_reduction", ca_reduction},
         {"shifted_windows", shifted_windows}};
  return j.dump(2) + "\n";
}

ModelConfig ModelConfig::parse(const std::string& text) {
  ModelConfig c;
  try {
    const json j = json::parse(text);
    require(j.is_object(), ErrorKind::Config, "model config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "image_channels") c.image_channels = value.get<int>();
      else if (key == "channels") c.channels = value.get<int>();
      else if (key == "temporal_layers") c.temporal_layers = value.get<int>();
      else if (key == "window") c.window = value.get<int>();
      else if (key == "temporal_window") c.temporal_window = value.get<int>();
      else if (key == "heads") c.heads = value.get<int>();
      else if (key == "mlp_ratio") c.mlp_ratio = value.get<double>();
      else if (key == "spatial_blocks") c.spatial_blocks = value.get<int>();
      else if (key == "unet_channels") c.unet_channels = value.get<int>();
      else if (key == "blind") c.blind = value.get<bool>();
      else if (key == "csa_mlp") c.csa_mlp = value.get<bool>();
      else if (key == "tie_directions") c.tie_directions = value.get<bool>();
      else if (key == "ca_reduction") c.ca_reduction = value.get<int>();
      else if (key == "shifted_windows") c.shifted_windows = value.get<bool>();
      else fail(ErrorKind::Config, "unknown model config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid model config: ") + e.what());
  }
  c.validate();
  return c;
}

ModelConfig ModelConfig::load(const std::filesystem::path& path) { return parse(io::read_text(path)); }

}  // namespace rawvid::rvdt
