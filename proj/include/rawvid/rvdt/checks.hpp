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
#include <string>
#include <vector>

#include "rawvid/rvdt/config.hpp"

namespace rawvid::rvdt {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Structural invariants of the forward reference: window partition inverses,
// softmax normalization, zero-weight residual identities, layer norm moments,
// finite full forward (T=5, 64x64), time-reversal covariance with tied
// directions, and the SA/CA/SCA gate-map shapes.
std::vector<CheckResult> run_structural_checks(const ModelConfig& cfg, std::uint64_t seed);

}  // namespace rawvid::rvdt
