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

#include <span>
#include <vector>

namespace rawvid {

// Fixed-edge histogram. Values outside [edges.front(), edges.back()] land in
// the first or last bin; the last bin is closed on the right.
class Histogram {
 public:
  Histogram() = default;
  explicit Histogram(std::vector<double> edges);

  static Histogram uniform(double lo, double hi, int bins);

  int bins() const { return static_cast<int>(counts_.size()); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& counts() const { return counts_; }
  double total() const { return total_; }

  int bin_of(double v) const;
  void add(double v, double weight = 1.0);
  void add_all(std::span<const float> values);
  // Replaces counts wholesale, e.g. with analytic bin probabilities.
  void set_counts(std::vector<double> counts);
  void merge(const Histogram& other);

  // counts / total; all zeros when empty.
  std::vector<double> normalized() const;
  bool same_binning(const Histogram& other) const;

 private:
  std::vector<double> edges_;
  std::vector<double> counts_;
  double total_ = 0.0;
  bool uniform_ = false;
};

}  // namespace rawvid
