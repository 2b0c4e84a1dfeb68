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

#include <algorithm>
#include <array>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tbx/model.hpp"

namespace tbx {

/// Uniform grid t0 + i*h, i = 0..steps.
struct TimeGrid {
  double t0 = 0.0;
  double tf = 30.0;
  std::size_t steps = 3000;

  double step() const { return (tf - t0) / static_cast<double>(steps); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * step(); }
  std::size_t nodes() const { return steps + 1; }
  void validate() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Values on the nodes of a TimeGrid.
template <class V>
struct Trajectory {
  TimeGrid grid;
  std::vector<V> values;

  const V& operator[](std::size_t i) const { return values[i]; }
  const V& back() const { return values.back(); }
  std::size_t size() const { return values.size(); }
};

using StateTrajectory = Trajectory<State>;
using ControlTrajectory = Trajectory<ControlVector>;

/// Costates, indexed like the compartments (S, E, I_S, I_N, T).
struct AdjointState {
  Vec5 lambda{};

  double operator[](std::size_t i) const { return lambda[i]; }
  double& operator[](std::size_t i) { return lambda[i]; }
};

using AdjointTrajectory = Trajectory<AdjointState>;

/// Thrown when a trajectory leaves the feasible region or stops being finite.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// One classical Runge-Kutta step of y' = f(t, y). Negative h integrates
/// backwards.
template <std::size_t N, class F>
std::array<double, N> rk4_step(F&& f, const std::array<double, N>& y, double t, double h) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const std::array<double, N> k1 = f(t, y);
  const std::array<double, N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const std::array<double, N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const std::array<double, N> k4 = f(t + h, axpy(y, h, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(out[i])) {
      std::ostringstream os;
      os << "non-finite value after RK4 step at t=" << t;
      throw IntegrationError(os.str(), t);
    }
  }
  return out;
}

struct ForwardResult {
  StateTrajectory trajectory;
  double min_component = 0.0;  // smallest compartment value seen at any node
};

/// Below this a compartment counts as a positivity violation.
inline constexpr double kPositivityFloor = -1e-6;

/// Integrates the model from `initial` over `grid`. Without controls the
/// uncontrolled system is used; otherwise the control at node i is held
/// over [t_i, t_{i+1}], including inside the RK stages.
ForwardResult integrate_forward(const Parameters& par, const State& initial, const TimeGrid& grid,
                                const ControlTrajectory* controls = nullptr);

/// Signature of a costate vector field: d(lambda)/dt at one instant.
template <class F>
concept AdjointField = requires(F f, const State& x, const ControlVector& u, const AdjointState& l) {
  { f(x, u, l) } -> std::convertible_to<AdjointState>;
};

/// Integrates a costate system backwards from `terminal` at tf to t0 with
/// step -h. The state at RK stages inside [t_i, t_{i+1}] is the linear
/// interpolant of the stored nodes; the control is the left-node value.
template <AdjointField F>
AdjointTrajectory integrate_backward(F&& field, const AdjointState& terminal,
                                     const StateTrajectory& states,
                                     const ControlTrajectory& controls) {
  const TimeGrid& grid = states.grid;
  if (!(controls.grid == grid) || states.size() != grid.nodes() ||
      controls.size() != grid.nodes()) {
    throw std::invalid_argument("integrate_backward: state and control grids differ");
  }
  const double h = grid.step();
  AdjointTrajectory out{grid, std::vector<AdjointState>(grid.nodes())};
  out.values[grid.steps] = terminal;

  for (std::size_t i = grid.steps; i-- > 0;) {
    const State& left = states[i];
    const State& right = states[i + 1];
    const ControlVector& u = controls[i];
    const double t_right = grid.time(i + 1);
    auto state_at = [&](double t) {
      // weight of the left node: 0 at t_{i+1}, 1 at t_i
      const double w = std::clamp((t_right - t) / h, 0.0, 1.0);
      const Vec5 a = left.to_vec();
      const Vec5 b = right.to_vec();
      Vec5 v;
      for (std::size_t j = 0; j < 5; ++j) v[j] = w * a[j] + (1.0 - w) * b[j];
      return State::from_vec(v);
    };
    auto f = [&](double t, const Vec5& lam) {
      return field(state_at(t), u, AdjointState{lam}).lambda;
    };
    try {
      out.values[i].lambda = rk4_step(f, out.values[i + 1].lambda, t_right, -h);
    } catch (const IntegrationError&) {
      std::ostringstream os;
      os << "adjoint integration failed between t=" << grid.time(i) << " and t=" << t_right;
      throw IntegrationError(os.str(), t_right);
    }
  }
  return out;
}

}  // namespace tbx
