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

#pragma once

// Batched inner loops with a scalar reference and an AVX2 variant. The two
// variants perform the same IEEE operations in the same order (no FMA), so
// their results are bitwise identical; tests/test_kernels.cpp enforces this.

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string_view>

#include "tbx/model.hpp"

namespace tbx::kernels {

enum class SimdLevel { Scalar, Avx2 };

std::string_view to_string(SimdLevel level);

/// True when the CPU executes AVX2 and the variant was compiled in.
bool avx2_available();

/// Level used by the dispatching entry points. Defaults to the best
/// available; the TBX_SIMD environment variable ("scalar" or "avx2") caps it.
SimdLevel active_level();

/// Overrides the active level (clamped to what the CPU supports).
void set_active_level(SimdLevel level);

// ---------------------------------------------------------------------------
// Endemic steady-state scan.
//
// For x = I/N the steady state is reconstructed from the stationarity of every
// compartment except the constraint I = xN; the reduced residual
//   h(x) = I(x) / (x N(x)) - 1
// vanishes exactly at endemic equilibria and tends to R0 - 1 as x -> 0+.
// Recruitment cancels, so the kernel works with unit recruitment.

struct ScanConstants {
  double beta_c, sigma, mu, k, d, r, p, alpha;

  static ScanConstants from(const Parameters& par) {
    return {par.beta_c, par.sigma, par.mu, par.k, par.d, par.r, par.p, par.alpha};
  }
};

/// Unit-recruitment steady state at x, plus h(x). Shared by the scalar
/// kernel and the full reconstruction.
struct ScanPoint {
  double S, E, I_S, I_N, T, h;
};

inline ScanPoint scan_point(const ScanConstants& c, double x) {
  const double lf = c.beta_c * x;
  const double m3 = c.mu + c.r + c.d;
  const double m4 = c.mu + c.d;
  const double shield = c.sigma * lf + c.mu;
  const double g = c.p * lf + c.k;
  const double S = 1.0 / (c.mu + lf);
  const double back_flow = c.sigma * lf * (c.r * c.alpha / m3) * g / shield;
  const double E = lf * S / (c.p * lf + c.mu + c.k - back_flow);
  const double I_S = c.alpha * g * E / m3;
  const double I_N = (1.0 - c.alpha) * g * E / m4;
  const double T = c.r * I_S / shield;
  const double N = S + E + I_S + I_N + T;
  return {S, E, I_S, I_N, T, (I_S + I_N) / (x * N) - 1.0};
}

void scan_residuals_scalar(const ScanConstants& c, std::span<const double> x, std::span<double> h);
void scan_residuals_avx2(const ScanConstants& c, std::span<const double> x, std::span<double> h);
void scan_residuals(const ScanConstants& c, std::span<const double> x, std::span<double> h);

// ---------------------------------------------------------------------------
// Pointwise optimal-control characterization with box projection.

struct ControlConstants {
  double beta_c, sigma, k, r, p, alpha;
  std::array<double, 4> weight;
  std::array<double, 4> lower;
  std::array<double, 4> upper;
};

/// Structure-of-arrays view of states and the costates the controls need.
struct NodeBatch {
  std::span<const double> S, E, I_S, I_N, T;
  std::span<const double> l2, l3, l4, l5;

  std::size_t size() const { return S.size(); }
};

using ControlColumns = std::array<std::span<double>, 4>;

/// Unprojected stationary values of the four controls at one node.
inline std::array<double, 4> stationary_controls(const ControlConstants& c, double S, double E,
                                                 double I_S, double I_N, double T, double l2,
                                                 double l3, double l4, double l5) {
  const double N = S + E + I_S + I_N + T;
  const double F = N > 0.0 ? c.beta_c * (I_S + I_N) / N : 0.0;
  const double to_seeking = c.alpha * c.p * F * E + c.alpha * c.k * E;
  return {(l4 - l3) * to_seeking / c.weight[0], (l4 - l3) * I_N / c.weight[1],
          (l3 - l5) * c.r * I_S / c.weight[2], (l2 - l5) * c.sigma * F * T / c.weight[3]};
}

inline double project(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void update_controls_scalar(const ControlConstants& c, const NodeBatch& in, ControlColumns out);
void update_controls_avx2(const ControlConstants& c, const NodeBatch& in, ControlColumns out);
void update_controls(const ControlConstants& c, const NodeBatch& in, ControlColumns out);

}  // namespace tbx::kernels
