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

#include <cmath>
#include <random>

#include "tbx/integrate.hpp"
#include "tbx/optctl.hpp"
#include "tbx/sampling.hpp"

using namespace tbx;

TEST_CASE("rk4_step on simple fields") {
  using V1 = std::array<double, 1>;
  const V1 one{1.0};
  const V1 e = rk4_step([](double, const V1& y) { return y; }, one, 0.0, 0.1);
  CHECK(std::abs(e[0] - std::exp(0.1)) < 1e-7);
  CHECK(e[0] == doctest::Approx(1.10517083).epsilon(1e-8));

  const V1 c = rk4_step([](double, const V1&) { return V1{3.0}; }, V1{2.0}, 0.0, 0.25);
  CHECK(c[0] == 2.75);

  const V1 z = rk4_step([](double, const V1&) { return V1{0.0}; }, V1{-4.5}, 1.0, 0.3);
  CHECK(z[0] == -4.5);

  // time-dependent: y' = t has y(1) = 1/2 exactly for a cubic-exact method
  const V1 q = rk4_step([](double t, const V1&) { return V1{t}; }, V1{0.0}, 0.0, 1.0);
  CHECK(q[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("rk4_step rejects non-finite results") {
  using V1 = std::array<double, 1>;
  CHECK_THROWS_AS(rk4_step([](double, const V1&) { return V1{NAN}; }, V1{1.0}, 0.0, 0.1), IntegrationError);
}

TEST_CASE("time grid") {
  TimeGrid g;
  CHECK(g.step() == doctest::Approx(0.01));
  CHECK(g.nodes() == 3001);
  CHECK(g.time(3000) == doctest::Approx(30.0));
  g.tf = g.t0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = {};
  g.steps = 0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("disease-free start stays put") {
  const Parameters par;
  const State dfe{par.Lambda / par.mu, 0, 0, 0, 0};
  const ForwardResult f = integrate_forward(par, dfe, TimeGrid{});
  for (const State& x : f.trajectory.values) {
    CHECK(x.S == doctest::Approx(dfe.S).epsilon(1e-12));
    CHECK(x.E == 0.0);
    CHECK(x.I_S == 0.0);
  }
}

TEST_CASE("no recruitment: S decays monotonically") {
  Parameters par;
  par.Lambda = 0.0;
  const ForwardResult f = integrate_forward(par, {1000, 0, 0, 0, 0}, TimeGrid{});
  for (std::size_t i = 1; i < f.trajectory.size(); ++i) CHECK(f.trajectory[i].S < f.trajectory[i - 1].S);
  CHECK(f.trajectory.back().S == doctest::Approx(1000 * std::exp(-par.mu * 30)).epsilon(1e-10));
}

TEST_CASE("positivity from the initial conditions and random starts") {
  std::mt19937_64 rng(17);
  for (double alpha : {0.0, 0.5, 1.0}) {
    Parameters par;
    par.alpha = alpha;
    CHECK(integrate_forward(par, State::default_initial(), TimeGrid{}).min_component >= -1e-9);
    for (int i = 0; i < 100; ++i) {
      const ForwardResult f = integrate_forward(par, sampling::state(rng), TimeGrid{});
      CHECK(f.min_component >= -1e-9);
    }
  }
}

TEST_CASE("negative initial compartments are rejected") {
  CHECK_THROWS_AS(integrate_forward(Parameters{}, {1, -1, 0, 0, 0}, TimeGrid{}), std::invalid_argument);
}

TEST_CASE("observed convergence order of the base model") {
  const Parameters par;
  auto end_at = [&](std::size_t steps) {
    return integrate_forward(par, State::default_initial(), TimeGrid{0.0, 30.0, steps}).trajectory.back();
  };
  // coarse steps so truncation error dominates rounding
  const State ref = end_at(300 * 16);
  auto err = [&](std::size_t steps) {
    const State x = end_at(steps);
    double e = 0.0;
    for (std::size_t i = 0; i < 5; ++i) e = std::max(e, std::abs(x.to_vec()[i] - ref.to_vec()[i]));
    return e;
  };
  const double e1 = err(150);
  const double e2 = err(300);
  const double order = std::log2(e1 / e2);
  MESSAGE("observed order " << order);
  CHECK(order >= 3.8);
}

TEST_CASE("population consistency along a trajectory") {
  const Parameters par;
  const ForwardResult f = integrate_forward(par, State::default_initial(), TimeGrid{});
  const auto& x = f.trajectory.values;
  const double h = f.trajectory.grid.step();
  for (std::size_t i = 1; i + 1 < x.size(); i += 37) {
    const double dN = (x[i + 1].total() - x[i - 1].total()) / (2 * h);
    const double want = population_balance(x[i], par);
    CHECK(std::abs(dN - want) <= 1e-3 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("controlled integration validates the control grid") {
  const Parameters par;
  const TimeGrid g;
  const ControlTrajectory u = constant_controls(TimeGrid{0, 10, 1000}, {});
  CHECK_THROWS_AS(integrate_forward(par, State::default_initial(), g, &u), std::invalid_argument);
  const ControlTrajectory zero = constant_controls(g, {});
  const ForwardResult a = integrate_forward(par, State::default_initial(), g, &zero);
  const ForwardResult b = integrate_forward(par, State::default_initial(), g);
  CHECK(a.trajectory.back().to_vec() == b.trajectory.back().to_vec());
}

TEST_CASE("backward integration") {
  const Parameters par;
  const TimeGrid g;
  const StateTrajectory xs = integrate_forward(par, State::default_initial(), g).trajectory;
  const ControlTrajectory us = constant_controls(g, {});

  SUBCASE("zero data gives a zero adjoint") {
    const auto lam = integrate_backward(
        [&](const State& x, const ControlVector& u, const AdjointState& l) {
          AdjointState out = adjoint_rhs(x, u, l, CostWeights{}, par);
          // drop the running-cost gradient: homogeneous system
          const AdjointState zero_l = adjoint_rhs(x, u, AdjointState{}, CostWeights{}, par);
          for (std::size_t i = 0; i < 5; ++i) out[i] -= zero_l[i];
          return out;
        },
        AdjointState{}, xs, us);
    for (const auto& l : lam.values) {
      for (double v : l.lambda) CHECK(v == 0.0);
    }
  }

  SUBCASE("infected costates turn positive just before tf") {
    const AdjointTrajectory lam = solve_adjoint(par, CostWeights{}, xs, us);
    const AdjointState& before = lam[g.steps - 1];
    CHECK(before[1] > 0.0);
    CHECK(before[2] > 0.0);
    CHECK(before[3] > 0.0);
    for (double v : lam.back().lambda) CHECK(v == 0.0);
    // deterministic: a second solve is bitwise identical
    const AdjointTrajectory again = solve_adjoint(par, CostWeights{}, xs, us);
    for (std::size_t i = 0; i < lam.size(); ++i) CHECK(lam[i].lambda == again[i].lambda);
  }

  SUBCASE("one step equals rk4_step with -h") {
    const TimeGrid one{0.0, 0.01, 1};
    const StateTrajectory flat{one, {State::default_initial(), State::default_initial()}};
    const ControlTrajectory u = constant_controls(one, {0.1, 0.2, 0.3, 0.4});
    const AdjointState terminal{{0.5, -1.0, 2.0, 0.25, 3.0}};
    auto field = [&](const State& x, const ControlVector& c, const AdjointState& l) {
      return adjoint_rhs(x, c, l, CostWeights{}, par);
    };
    const AdjointTrajectory lam = integrate_backward(field, terminal, flat, u);
    const Vec5 direct = rk4_step(
        [&](double, const Vec5& l) { return field(State::default_initial(), u[0], AdjointState{l}).lambda; },
        terminal.lambda, 0.01, -0.01);
    CHECK(lam[0].lambda == direct);
  }
}
