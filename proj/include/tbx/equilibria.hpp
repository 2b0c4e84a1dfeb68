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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tbx/model.hpp"

namespace tbx {

/// x^2 + P x + Q = 0 in x = I*/N*.
struct QuadraticCoefficients {
  double P = 0.0;
  double Q = 0.0;

  double discriminant() const { return P * P / 4.0 - Q; }
  /// Positive real roots, ascending; a double root is reported once.
  std::vector<double> positive_roots() const;
};

enum class EndemicClass { NoEndemic, UniqueEndemic, TwoEndemic, ThresholdEndemic };

std::string_view to_string(EndemicClass c);

struct EquilibriumReport {
  EndemicClass classification = EndemicClass::NoEndemic;
  std::vector<State> points;      // sorted by infectious fraction
  std::vector<double> fractions;  // I/N of each point
  double r0 = 0.0;
  double Rp = 0.0;                // NaN unless alpha == 0
  std::optional<double> p0;       // empty when every p gives real roots (R0 > 1)
  std::size_t oracle_count = 0;   // equilibria found by the grid scan
  bool oracle_agrees = false;
  double max_residual = 0.0;      // largest steady-state residual over `points`
};

/// Default resolution of the x-scan used as the oracle.
inline constexpr std::size_t kDefaultScanPoints = 100000;

State disease_free_equilibrium(const Parameters& par);

/// Euclidean norm of the uncontrolled right-hand side.
double steady_state_residual(const State& x, const Parameters& par);

/// Endemic quadratic for alpha = 0, derived from stationarity of S, E and I_N
/// with N the equilibrium population S + E + I. Throws std::invalid_argument
/// unless alpha == 0 and p > 0.
QuadraticCoefficients endemic_quadratic(const Parameters& par);

/// Threshold on p above which the alpha = 0 quadratic has two positive roots
/// (the larger zero of its discriminant viewed as a function of p). Empty for
/// R0 > 1; +inf when beta_c <= mu + d, where no subthreshold root exists.
std::optional<double> reinfection_threshold_p0(const Parameters& par);

/// Value of R0 at which the alpha = 0 discriminant vanishes; the sign of the
/// discriminant equals the sign of R0 - Rp.
double subthreshold_Rp(const Parameters& par);

/// Steady state with infectious fraction x in (0, 1], reconstructed from the
/// stationarity of all five equations except I = xN. Exact for any alpha.
State reconstruct_steady_state(const Parameters& par, double x);

/// I(x) / (x N(x)) - 1 for the reconstruction above.
double reduced_residual(const Parameters& par, double x);

/// Cubic in x (ascending coefficients) whose roots in (0, 1] are exactly the
/// endemic equilibria, obtained by clearing denominators of the reduced
/// residual. Its value at 0 is mu (mu + k) (R0 - 1).
std::array<double, 4> endemic_polynomial(const Parameters& par);

/// Roots of a polynomial of degree <= 3 in (0, 1], ascending.
std::vector<double> polynomial_roots_unit_interval(const std::array<double, 4>& coeffs);

/// Scans h(x) on the uniform grid x_i = i/n, brackets sign changes (and
/// touch-and-return minima), bisects each bracket and returns the distinct
/// equilibria sorted by x. Requires grid_size >= 1000.
std::vector<double> scan_endemic_fractions(const Parameters& par,
                                           std::size_t grid_size = kDefaultScanPoints);
std::vector<State> solve_endemic_numeric(const Parameters& par,
                                         std::size_t grid_size = kDefaultScanPoints);

/// Endemic structure. For alpha == 0 the case table on R0, p0 and Rp decides;
/// for other alpha the roots of endemic_polynomial do. The grid scan is run
/// alongside and disagreement is reported through `oracle_agrees`.
EquilibriumReport classify_endemic(const Parameters& par,
                                   std::size_t oracle_grid = kDefaultScanPoints);

/// The alpha = 0 coefficients and thresholds in their commonly quoted closed
/// form (equilibrium population taken as Lambda/mu), next to the exact ones.
/// The quoted root is pushed back through the dynamics so any discrepancy is
/// visible as a residual.
struct ClosedFormAudit {
  QuadraticCoefficients quoted;
  QuadraticCoefficients exact;
  double quoted_Rp = 0.0;
  double exact_Rp = 0.0;
  double quoted_p0 = 0.0;  // NaN when the quoted square root is imaginary
  std::optional<double> exact_p0;
  std::optional<double> quoted_root;
  double quoted_root_residual = 0.0;  // state with N* = Lambda/mu
  std::optional<double> exact_root;
  double exact_root_residual = 0.0;
};

/// Requires alpha == 0 and p > 0.
ClosedFormAudit audit_closed_forms(const Parameters& par);

}  // namespace tbx
