/*
 Copyright 2026 The tbx Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <atomic>
#include <cstdlib>
#include <string>

#include "tbx/kernels/kernels.hpp"

namespace tbx::kernels {

bool avx2_compiled();

namespace {

SimdLevel initial_level() {
  SimdLevel level = avx2_available() ? SimdLevel::Avx2 : SimdLevel::Scalar;
  if (const char* env = std::getenv("TBX_SIMD")) {
    if (std::string(env) == "scalar") level = SimdLevel::Scalar;
  }
  return level;
}

std::atomic<SimdLevel>& level_slot() {
  static std::atomic<SimdLevel> level{initial_level()};
  return level;
}

}  // namespace

std::string_view to_string(SimdLevel level) {
  switch (level) {
    case SimdLevel::Scalar: return "scalar";
    case SimdLevel::Avx2: return "avx2";
  }
  return "unknown";
}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = avx2_compiled() && __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

SimdLevel active_level() { return level_slot().load(std::memory_order_relaxed); }

void set_active_level(SimdLevel level) {
  if (level == SimdLevel::Avx2 && !avx2_available()) level = SimdLevel::Scalar;
  level_slot().store(level, std::memory_order_relaxed);
}

void scan_residuals(const ScanConstants& c, std::span<const double> x, std::span<double> h) {
  if (active_level() == SimdLevel::Avx2) {
    scan_residuals_avx2(c, x, h);
  } else {
    scan_residuals_scalar(c, x, h);
  }
}

void update_controls(const ControlConstants& c, const NodeBatch& in, ControlColumns out) {
  if (active_level() == SimdLevel::Avx2) {
    update_controls_avx2(c, in, out);
  } else {
    update_controls_scalar(c, in, out);
  }
}

}  // namespace tbx::kernels
