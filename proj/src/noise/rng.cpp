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

#include "rawvid/noise/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rawvid/io/text_io.hpp"

namespace rawvid {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t SeedSpec::key() const {
  std::uint64_t k = splitmix64(global);
  k = splitmix64(k ^ clip);
  k = splitmix64(k ^ (frame * 0xD1B54A32D192ED03ull));
  k = splitmix64(k ^ (static_cast<std::uint64_t>(channel) + 0x5851F42D4C957F2Dull));
  return k;
}

std::uint64_t clip_key(std::string_view clip_name, double iso) {
  return splitmix64(io::fnv1a(clip_name) ^ splitmix64(static_cast<std::uint64_t>(std::llround(iso))));
}

double CounterRng::normal(std::uint64_t counter) const {
  const double u1 = uniform(counter);
  const double u2 = uniform(counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::poisson(double rate, std::uint64_t counter) const {
  if (rate <= 0.0) return 0.0;
  if (rate < kPoissonInversionLimit) {
    const double u = uniform(counter);
    double p = std::exp(-rate);
    double cdf = p;
    int k = 0;
    // The cap only matters when u rounds to 1 beyond the representable tail.
    while (u > cdf && k < 1000) {
      ++k;
      p *= rate / k;
      cdf += p;
      if (p == 0.0) break;
    }
    return static_cast<double>(k);
  }
  return std::max(0.0, rate + std::sqrt(rate) * normal(counter));
}

}  // namespace rawvid
