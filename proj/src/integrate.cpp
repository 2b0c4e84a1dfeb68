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

#include "tbx/integrate.hpp"

#include <algorithm>

namespace tbx {

void TimeGrid::validate() const {
  if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0)) {
    throw std::invalid_argument("time grid requires finite tf > t0");
  }
  if (steps < 1) throw std::invalid_argument("time grid requires at least one step");
}

ForwardResult integrate_forward(const Parameters& par, const State& initial, const TimeGrid& grid,
                                const ControlTrajectory* controls) {
  grid.validate();
  if (initial.min_component() < 0.0) {
    throw std::invalid_argument("initial state has a negative compartment");
  }
  if (controls && (!(controls->grid == grid) || controls->size() != grid.nodes())) {
    throw std::invalid_argument("control trajectory is not defined on the integration grid");
  }

  const double h = grid.step();
  ForwardResult out;
  out.trajectory.grid = grid;
  out.trajectory.values.reserve(grid.nodes());
  out.trajectory.values.push_back(initial);
  out.min_component = initial.min_component();

  Vec5 y = initial.to_vec();
  for (std::size_t i = 0; i < grid.steps; ++i) {
    const double t = grid.time(i);
    if (controls) {
      const ControlVector& u = (*controls)[i];
      y = rk4_step([&](double, const Vec5& v) { return rhs_controlled(State::from_vec(v), u, par).to_vec(); },
                   y, t, h);
    } else {
      y = rk4_step([&](double, const Vec5& v) { return rhs_base(State::from_vec(v), par).to_vec(); },
                   y, t, h);
    }
    const State x = State::from_vec(y);
    const double lowest = x.min_component();
    out.min_component = std::min(out.min_component, lowest);
    if (lowest < kPositivityFloor) {
      std::ostringstream os;
      os << "positivity violated at t=" << grid.time(i + 1) << ": " << to_string(x);
      throw IntegrationError(os.str(), grid.time(i + 1));
    }
    out.trajectory.values.push_back(x);
  }
  return out;
}

}  // namespace tbx
