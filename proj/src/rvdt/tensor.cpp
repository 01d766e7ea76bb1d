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

#include "rawvid/rvdt/tensor.hpp"

#include <cmath>

#include "rawvid/error.hpp"

namespace rawvid::rvdt {

std::size_t Tensor::numel(const std::vector<int>& s) {
  std::size_t n = 1;
  for (int d : s) {
    require(d >= 0, ErrorKind::Shape, "negative tensor extent");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> s, float fill) : shape(std::move(s)), data(numel(shape), fill) {}

Tensor::Tensor(std::vector<int> s, std::vector<float> values) : shape(std::move(s)), data(std::move(values)) {
  require(data.size() == numel(shape), ErrorKind::Shape,
          "tensor data length does not match shape " + rvdt::shape_string(shape));
}

bool Tensor::all_finite() const {
  for (float v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

float Tensor::max_abs() const {
  float m = 0.0f;
  for (float v : data) m = std::max(m, std::abs(v));
  return m;
}

std::string Tensor::shape_string() const { return rvdt::shape_string(shape); }

std::string shape_string(const std::vector<int>& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(shape[i]);
  }
  return s.empty() ? "scalar" : s;
}

}  // namespace rawvid::rvdt
