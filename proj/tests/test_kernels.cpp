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

#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "tbx/kernels/kernels.hpp"
#include "tbx/sampling.hpp"

using namespace tbx;
using namespace tbx::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("dispatch level") {
  MESSAGE("active level: " << to_string(active_level()) << ", avx2 available: " << avx2_available());
  const SimdLevel before = active_level();
  set_active_level(SimdLevel::Scalar);
  CHECK(active_level() == SimdLevel::Scalar);
  set_active_level(SimdLevel::Avx2);
  CHECK(active_level() == (avx2_available() ? SimdLevel::Avx2 : SimdLevel::Scalar));
  set_active_level(before);
}

TEST_CASE("scan residuals: scalar and AVX2 agree bitwise") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; skipping equivalence");
    return;
  }
  std::mt19937_64 rng(404);
  // lengths straddling the vector width, including the remainder loop
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const ScanConstants c = ScanConstants::from(sampling::parameters(rng));
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1) / static_cast<double>(n);
      std::vector<double> a(n), b(n);
      scan_residuals_scalar(c, x, a);
      scan_residuals_avx2(c, x, b);
      CHECK(same_bits(a, b));
      // and the scalar kernel is the inline reference
      for (std::size_t i = 0; i < n; ++i) {
        const double ref = scan_point(c, x[i]).h;
        CHECK(std::memcmp(&a[i], &ref, sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("control update: scalar and AVX2 agree bitwise") {
  if (!avx2_available()) {
    MESSAGE("AVX2 not available; skipping equivalence");
    return;
  }
  std::mt19937_64 rng(505);
  for (std::size_t n : {1u, 2u, 4u, 7u, 64u, 3001u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Parameters par = sampling::parameters(rng);
      const ControlBounds bounds = ControlBounds::defaults_for(par);
      ControlConstants c{par.beta_c, par.sigma, par.k, par.r, par.p, par.alpha, {}, bounds.lower, bounds.upper};
      for (auto& w : c.weight) w = sampling::uniform(rng, 0.5, 1000.0);

      std::vector<std::vector<double>> cols(9, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        // include exact zeros so the N = 0 guard is exercised
        const State x = (i % 13 == 0) ? State{} : sampling::state(rng);
        const AdjointState l = sampling::adjoint(rng, 5.0);
        const Vec5 v = x.to_vec();
        for (std::size_t j = 0; j < 5; ++j) cols[j][i] = v[j];
        for (std::size_t j = 0; j < 4; ++j) cols[5 + j][i] = l[j + 1];
      }
      const NodeBatch in{cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], cols[6], cols[7], cols[8]};
      std::array<std::vector<double>, 4> a, b;
      for (auto& v : a) v.assign(n, -1.0);
      for (auto& v : b) v.assign(n, -2.0);
      update_controls_scalar(c, in, {a[0], a[1], a[2], a[3]});
      update_controls_avx2(c, in, {b[0], b[1], b[2], b[3]});
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(same_bits(a[k], b[k]));
        for (double u : a[k]) {
          CHECK(u >= c.lower[k]);
          CHECK(u <= c.upper[k]);
        }
      }
    }
  }
}

TEST_CASE("dispatching entry points match the scalar reference") {
  std::mt19937_64 rng(606);
  const ScanConstants c = ScanConstants::from(sampling::parameters(rng));
  std::vector<double> x(777), a(777), b(777);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i + 0.5) / x.size();
  scan_residuals(c, x, a);
  scan_residuals_scalar(c, x, b);
  CHECK(same_bits(a, b));
}

TEST_CASE("projection matches the clamp formula") {
  CHECK(project(-1.0, 0.01, 0.9) == 0.01);
  CHECK(project(2.0, 0.01, 0.9) == 0.9);
  CHECK(project(0.5, 0.01, 0.9) == 0.5);
  CHECK(project(0.5, 0.0, 1.0) == std::min(1.0, std::max(0.0, 0.5)));
}
