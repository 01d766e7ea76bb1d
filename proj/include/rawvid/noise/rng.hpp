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
#include <string_view>

namespace rawvid {

// Identifies one independent noise stream. Two equal SeedSpecs always produce
// bit-identical noise, regardless of thread count or evaluation order.
struct SeedSpec {
  std::uint64_t global = 0;
  std::uint64_t clip = 0;
  std::uint64_t frame = 0;
  std::uint32_t channel = 0;

  std::uint64_t key() const;
  SeedSpec with_frame(std::uint64_t f) const { return {global, clip, f, channel}; }
  SeedSpec with_channel(std::uint32_t c) const { return {global, clip, frame, c}; }
};

// Clip id derived from a clip name plus an ISO operating point, so the same
// clip rendered at different presets gets independent noise.
std::uint64_t clip_key(std::string_view clip_name, double iso);

std::uint64_t splitmix64(std::uint64_t x);

// Stateless draws: the value depends only on (key, counter).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key_ + counter * 0x9E3779B97F4A7C15ull);
  }
  // Uniform in (0, 1].
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
  }
  // Uniform integer in [0, n), n < 2^53.
  std::uint64_t below(std::uint64_t n, std::uint64_t counter) const {
    return static_cast<std::uint64_t>(static_cast<double>(bits(counter) >> 11) * 0x1.0p-53 * static_cast<double>(n));
  }
  // Standard normal via Box-Muller from counters c and c+1.
  double normal(std::uint64_t counter) const;
  // Poisson(rate): inversion below kPoissonInversionLimit, normal
  // approximation rate + sqrt(rate) z (truncated at 0) above. Uses counters
  // c..c+1.
  double poisson(double rate, std::uint64_t counter) const;

  static constexpr double kPoissonInversionLimit = 64.0;

 private:
  std::uint64_t key_;
};

}  // namespace rawvid
