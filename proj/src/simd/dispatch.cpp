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

#include <atomic>
#include <cstdlib>
#include <string>

#include "rawvid/simd/kernels.hpp"

namespace rawvid::simd {

const KernelTable* avx2_kernels_table();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  const char* env = std::getenv("RAWVID_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = cpu_has_avx2();
  return supported ? avx2_kernels_table() : nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view variant) {
  if (variant == "scalar") {
    current() = &scalar_kernels();
    return true;
  }
  if (variant == "avx2") {
    if (const KernelTable* t = avx2_kernels()) {
      current() = t;
      return true;
    }
    return false;
  }
  if (variant == "auto") {
    current() = avx2_kernels() ? avx2_kernels() : &scalar_kernels();
    return true;
  }
  return false;
}

}  // namespace rawvid::simd
