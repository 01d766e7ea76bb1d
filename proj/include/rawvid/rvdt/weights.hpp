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
#include <string>
#include <vector>

#include "rawvid/rvdt/config.hpp"
#include "rawvid/rvdt/tensor.hpp"

namespace rawvid::rvdt {

struct WeightSpec {
  std::string name;
  std::vector<int> shape;
  enum class Init { Fan, Zero, One, Bias } init = Init::Fan;
  int fan_in = 1;
};

// Every tensor the model reads, in a fixed order.
std::vector<WeightSpec> weight_specs(const ModelConfig& cfg);
std::size_t param_count(const ModelConfig& cfg);

// Named tensors. Insertion order is the on-disk order.
class WeightSet {
 public:
  void add(const std::string& name, Tensor t);
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const Tensor& get(const std::string& name) const;
  Tensor& get(const std::string& name);
  const std::vector<std::string>& names() const { return names_; }
  std::size_t element_count() const;

  // Throws Shape when a tensor is missing, extra or mis-shaped.
  void validate(const ModelConfig& cfg) const;

  // Manifest: "rawvid-weights 1", "blob <file>", then "name shape offset"
  // lines (shape as AxBxC, offset in bytes). The blob is little-endian f32.
  void save(const std::filesystem::path& manifest, const std::filesystem::path& blob) const;
  static WeightSet load(const std::filesystem::path& manifest);

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> tensors_;
  std::map<std::string, std::size_t> index_;
};

// Scaled uniform in +-1/sqrt(fan_in) for matrices and kernels, zero biases,
// unit norm scales, small relative-position biases.
WeightSet init_weights(const ModelConfig& cfg, std::uint64_t seed);
WeightSet zero_weights(const ModelConfig& cfg);

}  // namespace rawvid::rvdt
