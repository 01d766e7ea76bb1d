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

#include <cstddef>
#include <string>
#include <vector>

namespace rawvid::rvdt {

// Row-major float32 tensor. Feature maps are C x H x W, window tokens are
// windows x tokens x C.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s, float fill = 0.0f);
  Tensor(std::vector<int> s, std::vector<float> values);

  static std::size_t numel(const std::vector<int>& s);
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<std::size_t>(i < 0 ? i + rank() : i)]; }
  std::size_t size() const { return data.size(); }
  float* ptr() { return data.data(); }
  const float* ptr() const { return data.data(); }

  bool all_finite() const;
  float max_abs() const;
  std::string shape_string() const;
  bool operator==(const Tensor&) const = default;
};

std::string shape_string(const std::vector<int>& shape);

}  // namespace rawvid::rvdt
