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

#include "rawvid/metrics/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rawvid/error.hpp"

namespace rawvid {

Histogram::Histogram(std::vector<double> edges) : edges_(std::move(edges)) {
  require(edges_.size() >= 2, ErrorKind::Parameter, "histogram needs at least one bin");
  for (std::size_t i = 1; i < edges_.size(); ++i)
    require(edges_[i] > edges_[i - 1], ErrorKind::Parameter, "histogram edges must be strictly increasing");
  counts_.assign(edges_.size() - 1, 0.0);
}

Histogram Histogram::uniform(double lo, double hi, int bins) {
  require(bins > 0 && hi > lo, ErrorKind::Parameter, "invalid uniform histogram range");
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
  Histogram h(std::move(edges));
  h.uniform_ = true;
  return h;
}

int Histogram::bin_of(double v) const {
  const int n = bins();
  if (!(v > edges_.front())) return 0;
  if (v >= edges_.back()) return n - 1;
  if (uniform_) {
    int i = static_cast<int>((v - edges_.front()) / (edges_.back() - edges_.front()) * n);
    i = std::clamp(i, 0, n - 1);
    // Correct for rounding right at an edge.
    if (v < edges_[i]) --i;
    else if (v >= edges_[i + 1]) ++i;
    return std::clamp(i, 0, n - 1);
  }
  auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
  return std::clamp(static_cast<int>(it - edges_.begin()) - 1, 0, n - 1);
}

void Histogram::add(double v, double weight) {
  counts_[bin_of(v)] += weight;
  total_ += weight;
}

void Histogram::add_all(std::span<const float> values) {
  for (float v : values) add(v);
}

void Histogram::set_counts(std::vector<double> counts) {
  require(counts.size() == counts_.size(), ErrorKind::Shape, "bin count mismatch");
  for (double c : counts) require(c >= 0.0, ErrorKind::Parameter, "negative histogram count");
  counts_ = std::move(counts);
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0.0);
}

void Histogram::merge(const Histogram& other) {
  require(same_binning(other), ErrorKind::Shape, "cannot merge histograms with different binning");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

std::vector<double> Histogram::normalized() const {
  std::vector<double> p(counts_.size(), 0.0);
  if (total_ <= 0.0) return p;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = counts_[i] / total_;
  return p;
}

bool Histogram::same_binning(const Histogram& other) const { return edges_ == other.edges_; }

}  // namespace rawvid
