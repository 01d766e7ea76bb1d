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

#include "rawvid/rvdt/weights.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "rawvid/error.hpp"
#include "rawvid/io/text_io.hpp"
#include "rawvid/noise/rng.hpp"

namespace rawvid::rvdt {

namespace {

using Init = WeightSpec::Init;

struct SpecBuilder {
  std::vector<WeightSpec> specs;

  void tensor(const std::string& name, std::vector<int> shape, Init init, int fan = 1) {
    specs.push_back({name, std::move(shape), init, fan});
  }
  void conv(const std::string& name, int cout, int cin_per_group, int k = 3) {
    tensor(name + ".w", {cout, cin_per_group, k, k}, Init::Fan, cin_per_group * k * k);
    tensor(name + ".b", {cout}, Init::Zero);
  }
  void linear(const std::string& name, int in, int out) {
    tensor(name + ".w", {in, out}, Init::Fan, in);
    tensor(name + ".b", {out}, Init::Zero);
  }
  void norm(const std::string& name, int c) {
    tensor(name + ".g", {c}, Init::One);
    tensor(name + ".b", {c}, Init::Zero);
  }
  void mlp(const std::string& p, const ModelConfig& cfg) {
    const int c = cfg.channels, h = cfg.hidden();
    norm(p + ".norm", c);
    linear(p + ".fc1", c, h);
    linear(p + ".fc2", h, c);
    if (!cfg.csa_mlp) return;
    conv(p + ".sa", 1, 2);
    const int r = h / cfg.ca_reduction;
    linear(p + ".ca1", h, r);
    linear(p + ".ca2", r, h);
    conv(p + ".fuse", h, 2);  // grouped: one (SA, CA) pair per output channel
    conv(p + ".sca", h, 1);   // depthwise
  }
  void self_attention(const std::string& p, const ModelConfig& cfg, int bias_entries) {
    const int c = cfg.channels;
    norm(p + ".norm1", c);
    linear(p + ".attn.qkv", c, 3 * c);
    linear(p + ".attn.proj", c, c);
    tensor(p + ".attn.rpb", {bias_entries, cfg.heads}, Init::Bias);
  }
};

int bias_2d(const ModelConfig& cfg) { return (2 * cfg.window - 1) * (2 * cfg.window - 1); }
int bias_3d(const ModelConfig& cfg) { return (2 * cfg.temporal_window - 1) * bias_2d(cfg); }

}  // namespace

std::vector<WeightSpec> weight_specs(const ModelConfig& cfg) {
  cfg.validate();
  SpecBuilder b;
  const int cx = cfg.input_channels(), u = cfg.unet_channels, c = cfg.channels;
  b.conv("enc.in", u, cx);
  b.conv("enc.l0", u, u);
  b.conv("enc.down", 2 * u, u);
  b.conv("enc.mid", 2 * u, 2 * u);
  b.conv("enc.up", u, 2 * u);
  b.conv("enc.fuse", u, 2 * u);
  b.conv("enc.ds1", c, u);
  b.conv("enc.ds2", c, c);

  for (int i = 0; i < cfg.spatial_blocks; ++i) {
    const std::string p = "spatial." + std::to_string(i);
    b.self_attention(p, cfg, bias_2d(cfg));
    b.mlp(p + ".mlp", cfg);
  }

  const std::vector<std::string> dirs =
      cfg.tie_directions ? std::vector<std::string>{"temporal.shared"}
                         : std::vector<std::string>{"temporal.fwd", "temporal.bwd"};
  for (const auto& d : dirs) {
    for (int s = 0; s < cfg.temporal_layers - 1; ++s) {
      const std::string p = d + ".t" + std::to_string(s);
      b.self_attention(p, cfg, bias_3d(cfg));
      b.mlp(p + ".mlp", cfg);
    }
    const std::string p = d + ".merge";
    b.norm(p + ".norm_q", c);
    b.norm(p + ".norm_kv", c);
    b.linear(p + ".attn.q", c, c);
    b.linear(p + ".attn.kv", c, 2 * c);
    b.linear(p + ".attn.proj", c, c);
    b.tensor(p + ".attn.rpb", {bias_2d(cfg), cfg.heads}, Init::Bias);
    b.mlp(p + ".mlp", cfg);
  }

  const int d2 = std::max(1, c / 2);
  if (cfg.tie_directions) {
    b.tensor("dec.fuse_dir.w", {c, c, 3, 3}, Init::Fan, 2 * c * 9);
  } else {
    b.tensor("dec.fuse_f.w", {c, c, 3, 3}, Init::Fan, 2 * c * 9);
    b.tensor("dec.fuse_b.w", {c, c, 3, 3}, Init::Fan, 2 * c * 9);
  }
  b.tensor("dec.fuse.b", {c}, Init::Zero);
  b.conv("dec.up1", 4 * c, c);
  b.conv("dec.up2", 4 * d2, c);
  b.conv("dec.out", cfg.image_channels, d2);
  return b.specs;
}

std::size_t param_count(const ModelConfig& cfg) {
  std::size_t n = 0;
  for (const auto& s : weight_specs(cfg)) n += Tensor::numel(s.shape);
  return n;
}

void WeightSet::add(const std::string& name, Tensor t) {
  require(!contains(name), ErrorKind::Shape, "duplicate weight '" + name + "'");
  index_[name] = names_.size();
  names_.push_back(name);
  tensors_.push_back(std::move(t));
}

const Tensor& WeightSet::get(const std::string& name) const {
  const auto it = index_.find(name);
  require(it != index_.end(), ErrorKind::Shape, "missing weight '" + name + "'");
  return tensors_[it->second];
}

Tensor& WeightSet::get(const std::string& name) {
  const auto it = index_.find(name);
  require(it != index_.end(), ErrorKind::Shape, "missing weight '" + name + "'");
  return tensors_[it->second];
}

std::size_t WeightSet::element_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.size();
  return n;
}

void WeightSet::validate(const ModelConfig& cfg) const {
  const auto specs = weight_specs(cfg);
  for (const auto& s : specs) {
    const Tensor& t = get(s.name);
    require(t.shape == s.shape, ErrorKind::Shape,
            "weight '" + s.name + "' has shape " + t.shape_string() + ", expected " + shape_string(s.shape));
    require(t.all_finite(), ErrorKind::Domain, "weight '" + s.name + "' has non-finite values");
  }
  require(specs.size() == names_.size(), ErrorKind::Shape, "weight set has tensors the config does not use");
}

void WeightSet::save(const std::filesystem::path& manifest, const std::filesystem::path& blob) const {
  std::ostringstream m;
  m << "rawvid-weights 1\n";
  m << "blob " << blob.filename().string() << "\n";
  std::vector<std::uint8_t> bytes;
  bytes.reserve(element_count() * 4);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    m << names_[i] << ' ' << tensors_[i].shape_string() << ' ' << bytes.size() << '\n';
    for (float f : tensors_[i].data) {
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      for (int k = 0; k < 4; ++k) bytes.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
    }
  }
  io::write_atomic(blob, bytes);
  io::write_atomic(manifest, m.str());
}

WeightSet WeightSet::load(const std::filesystem::path& manifest) {
  std::istringstream in(io::read_text(manifest));
  std::string line, magic;
  int version = 0;
  require(static_cast<bool>(in >> magic >> version) && magic == "rawvid-weights" && version == 1,
          ErrorKind::Config, "not a weight manifest: " + manifest.string());
  std::string key, blob_name;
  require(static_cast<bool>(in >> key >> blob_name) && key == "blob", ErrorKind::Config,
          "weight manifest lacks a blob line");
  const auto bytes = io::read_binary(manifest.parent_path() / blob_name);
  WeightSet ws;
  std::string name, shape_text;
  std::size_t offset = 0, expected = 0;
  while (in >> name >> shape_text >> offset) {
    std::vector<int> shape;
    if (shape_text != "scalar") {
      std::istringstream ss(shape_text);
      std::string part;
      while (std::getline(ss, part, 'x')) shape.push_back(std::stoi(part));
    }
    require(offset == expected, ErrorKind::Config, "weight '" + name + "' has a non-contiguous offset");
    const std::size_t n = Tensor::numel(shape);
    require(offset + 4 * n <= bytes.size(), ErrorKind::Config, "weight blob is truncated at '" + name + "'");
    std::vector<float> values(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t u = 0;
      for (int k = 0; k < 4; ++k) u |= static_cast<std::uint32_t>(bytes[offset + 4 * i + k]) << (8 * k);
      std::memcpy(&values[i], &u, 4);
    }
    ws.add(name, Tensor(std::move(shape), std::move(values)));
    expected = offset + 4 * n;
  }
  require(in.eof(), ErrorKind::Config, "malformed weight manifest line");
  require(expected == bytes.size(), ErrorKind::Config, "weight blob has trailing bytes");
  return ws;
}

WeightSet init_weights(const ModelConfig& cfg, std::uint64_t seed) {
  WeightSet ws;
  for (const auto& s : weight_specs(cfg)) {
    Tensor t(s.shape);
    const CounterRng rng(splitmix64(seed ^ io::fnv1a(s.name)));
    switch (s.init) {
      case Init::Zero: break;
      case Init::One: std::fill(t.data.begin(), t.data.end(), 1.0f); break;
      case Init::Fan: {
        const double bound = 1.0 / std::sqrt(static_cast<double>(s.fan_in));
        for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = static_cast<float>(bound * (2.0 * rng.uniform(i) - 1.0));
        break;
      }
      case Init::Bias:
        for (std::size_t i = 0; i < t.size(); ++i) t.data[i] = static_cast<float>(0.02 * (2.0 * rng.uniform(i) - 1.0));
        break;
    }
    ws.add(s.name, std::move(t));
  }
  return ws;
}

WeightSet zero_weights(const ModelConfig& cfg) {
  WeightSet ws;
  for (const auto& s : weight_specs(cfg)) ws.add(s.name, Tensor(s.shape, s.init == Init::One ? 1.0f : 0.0f));
  return ws;
}

}  // namespace rawvid::rvdt
