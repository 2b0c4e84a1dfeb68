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
#include <functional>

#include "tbx/integrate.hpp"
#include "tbx/model.hpp"

namespace tbx {

/// Weights C_i of the quadratic control costs C_i/2 u_i^2.
struct CostWeights {
  std::array<double, 4> C{10.0, 10.0, 10.0, 10.0};

  static CostWeights uniform(double c) { return {{c, c, c, c}}; }
  void validate() const;
};

/// Box for each control. The defaults keep (1 + u1) alpha <= 1 and
/// (1 + u3) r <= 1 while capping every control at one.
struct ControlBounds {
  std::array<double, 4> lower{0.01, 0.01, 0.01, 0.01};
  std::array<double, 4> upper{1.0, 0.9, 1.0, 0.9};

  static ControlBounds defaults_for(const Parameters& par, double lower_bound = 0.01);
  void validate(const Parameters& par) const;
};

/// Which controls are decision variables; the rest are pinned to zero.
using ActiveMask = std::array<bool, 4>;
inline constexpr ActiveMask kAllControls{true, true, true, true};

struct SweepOptions {
  double relaxation = 0.5;         // u <- relaxation * u_computed + (1 - relaxation) * u
  double tolerance = 1e-6;         // on max |du| / max |u| per control
  std::size_t max_iterations = 500;
};

struct OptimalSolution {
  StateTrajectory states;
  AdjointTrajectory adjoints;
  ControlTrajectory controls;
  ActiveMask active{};
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double last_change = 0.0;  // relative control change of the final iteration
};

double running_cost(const State& x, const ControlVector& u, const CostWeights& w);

/// Trapezoid rule of the running cost over the shared grid.
double objective(const StateTrajectory& states, const ControlTrajectory& controls,
                 const CostWeights& w);

double hamiltonian(const State& x, const ControlVector& u, const AdjointState& lambda,
                   const CostWeights& w, const Parameters& par);

/// d(lambda)/dt = -dH/dx, with N = S + E + I_S + I_N + T differentiated too.
AdjointState adjoint_rhs(const State& x, const ControlVector& u, const AdjointState& lambda,
                         const CostWeights& w, const Parameters& par);

/// dH/du_i at one instant.
ControlVector control_gradient(const State& x, const ControlVector& u, const AdjointState& lambda,
                               const CostWeights& w, const Parameters& par);

/// Stationary point of H in u, projected onto the box.
ControlVector control_update(const State& x, const AdjointState& lambda, const CostWeights& w,
                             const ControlBounds& b, const Parameters& par);

/// control_update at every node (batched); inactive controls are zero.
ControlTrajectory control_update(const StateTrajectory& states, const AdjointTrajectory& adjoints,
                                 const CostWeights& w, const ControlBounds& b, const Parameters& par,
                                 const ActiveMask& active = kAllControls);

/// Backward costate solve with lambda(tf) = 0.
AdjointTrajectory solve_adjoint(const Parameters& par, const CostWeights& w,
                                const StateTrajectory& states, const ControlTrajectory& controls);

ControlTrajectory constant_controls(const TimeGrid& grid, const ControlVector& u);

/// Forward-backward sweep. Starts from the lower bounds; returns the
/// converged iterate, or the lowest-objective iterate flagged not converged.
/// Throws IntegrationError if a trajectory becomes non-finite.
OptimalSolution forward_backward_sweep(const Parameters& par, const CostWeights& w,
                                       const ControlBounds& b, const TimeGrid& grid,
                                       const State& initial, const ActiveMask& active = kAllControls,
                                       const SweepOptions& opts = {});

struct StationarityReport {
  ActiveMask included{};
  std::array<double, 4> max_interior_gradient{};  // max |dH/du_i| where the projection is inactive
  std::array<std::size_t, 4> interior_nodes{};
  std::array<std::size_t, 4> lower_nodes{};
  std::array<std::size_t, 4> upper_nodes{};
  std::array<std::size_t, 4> sign_violations{};   // dH/du < 0 at lower or > 0 at upper
  double max_interior = 0.0;
  bool sign_conditions_hold = true;
};

/// First-order optimality diagnostics over every node of a solution.
StationarityReport stationarity_report(const OptimalSolution& sol, const CostWeights& w,
                                       const ControlBounds& b, const Parameters& par);

struct FirstVariation {
  std::size_t control = 0;
  double predicted = 0.0;  // delta * integral of dH/du_i * bump
  double actual = 0.0;     // (J(u + delta bump) - J(u - delta bump)) / 2
  double relative_error = 0.0;
};

/// Compares the central difference of J along `bump` (values on the grid
/// nodes) with the adjoint-based first variation.
FirstVariation first_variation(const Parameters& par, const CostWeights& w, const State& initial,
                               const ControlTrajectory& controls, std::size_t control,
                               const std::vector<double>& bump, double delta);

/// Smooth compactly supported bump cos^2 on [center - half_width, center + half_width].
std::vector<double> cosine_bump(const TimeGrid& grid, double center, double half_width);

}  // namespace tbx
