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

#include "tbx/model.hpp"
#include "tbx/sampling.hpp"

using namespace tbx;

namespace {

// Hand-evaluated at the default constants, alpha = 1, state (18000, 5500, 700, 400, 400):
// lambda = 2 * 1100 / 25000 = 0.088.
constexpr double kHand_dS = 588 - 0.088 * 18000 - 0.0235 * 18000;                       // -1419
constexpr double kHand_dE = 1584 - 0.4 * 0.088 * 5500 - 0.0529 * 5500 + 0.9 * 0.088 * 400;  // 1131.13
constexpr double kHand_dIS = 0.4 * 0.088 * 5500 + 0.0294 * 5500 - 0.3641 * 700;         // 100.43
constexpr double kHand_dIN = -0.0735 * 400;                                              // -29.4
constexpr double kHand_dT = 0.2906 * 700 - 0.9 * 0.088 * 400 - 0.0235 * 400;            // 162.34

}  // namespace

TEST_CASE("force of infection") {
  const Parameters par;
  CHECK(force_of_infection(State::default_initial(), par) == doctest::Approx(0.088).epsilon(1e-14));
  CHECK(force_of_infection({100, 5, 0, 0, 7}, par) == 0.0);
  CHECK(force_of_infection({}, par) == 0.0);
}

TEST_CASE("force of infection is invariant under scaling the state") {
  std::mt19937_64 rng(11);
  const Parameters par;
  for (int i = 0; i < 100; ++i) {
    const State x = sampling::positive_state(rng);
    const double c = sampling::uniform(rng, 0.1, 50.0);
    const State y{c * x.S, c * x.E, c * x.I_S, c * x.I_N, c * x.T};
    CHECK(force_of_infection(y, par) == doctest::Approx(force_of_infection(x, par)).epsilon(1e-13));
  }
}

TEST_CASE("rhs_base at the initial conditions matches hand arithmetic") {
  const Derivative d = rhs_base(State::default_initial(), Parameters{});
  CHECK(d.dS == doctest::Approx(kHand_dS).epsilon(1e-12));
  CHECK(d.dS == doctest::Approx(-1419.0).epsilon(1e-12));
  CHECK(d.dE == doctest::Approx(kHand_dE).epsilon(1e-12));
  CHECK(d.dI_S == doctest::Approx(kHand_dIS).epsilon(1e-12));
  CHECK(d.dI_N == doctest::Approx(kHand_dIN).epsilon(1e-12));
  CHECK(d.dT == doctest::Approx(kHand_dT).epsilon(1e-12));
}

TEST_CASE("disease-free states") {
  const Parameters par;
  const Derivative d = rhs_base({par.Lambda / par.mu, 0, 0, 0, 0}, par);
  for (double v : d.to_vec()) CHECK(std::abs(v) < 1e-10);

  const Derivative s = rhs_base({1234.5, 0, 0, 0, 0}, par);
  CHECK(s.dS == doctest::Approx(par.Lambda - par.mu * 1234.5));
  CHECK(s.dE == 0.0);
  CHECK(s.dI_S == 0.0);
  CHECK(s.dI_N == 0.0);
  CHECK(s.dT == 0.0);

  // controls multiply infected quantities only
  const Derivative c = rhs_controlled({par.Lambda / par.mu, 0, 0, 0, 0}, {0.0, 0.9, 1.0, 0.9}, par);
  for (double v : c.to_vec()) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("zero controls reproduce the base model bitwise") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const Parameters par = sampling::parameters(rng);
    const State x = sampling::state(rng);
    CHECK(rhs_controlled(x, {}, par).to_vec() == rhs_base(x, par).to_vec());
  }
}

TEST_CASE("u2 moves I_N into I_S") {
  const Parameters par;
  const State x{1000, 200, 30, 100, 20};
  ControlVector u;
  u.u2 = 0.5;
  const Derivative base = rhs_base(x, par);
  const Derivative ctl = rhs_controlled(x, u, par);
  CHECK(ctl.dI_S - base.dI_S == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(ctl.dI_N - base.dI_N == doctest::Approx(-50.0).epsilon(1e-12));
  CHECK(ctl.dS == base.dS);
  CHECK(ctl.dE == base.dE);
  CHECK(ctl.dT == base.dT);
}

TEST_CASE("population balance holds for both right-hand sides") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Parameters par = sampling::parameters(rng);
    const State x = sampling::state(rng);
    const ControlVector u = sampling::controls(rng, par);
    const double want = population_balance(x, par);
    const double tol = 1e-10 * std::max(1.0, std::abs(want));
    CHECK(std::abs(rhs_base(x, par).sum() - want) <= tol);
    CHECK(std::abs(rhs_controlled(x, u, par).sum() - want) <= tol);
  }
}

TEST_CASE("slightly negative inputs are evaluated, not clamped") {
  const Parameters par;
  const Derivative d = rhs_base({1000, -1e-10, 5, 5, 0}, par);
  CHECK(std::isfinite(d.dE));
  CHECK(d.dS != 0.0);
}

TEST_CASE("R0 values") {
  Parameters par;
  CHECK(basic_reproduction_number(par) == doctest::Approx(2 * 0.0294 / (0.0529 * 0.3641)).epsilon(1e-14));
  CHECK(basic_reproduction_number(par) == doctest::Approx(3.0528184315).epsilon(1e-9));
  par.alpha = 0.0;
  CHECK(basic_reproduction_number(par) == doctest::Approx(2 * 0.0294 / (0.0529 * 0.0735)).epsilon(1e-14));
  const double r0_zero = basic_reproduction_number(par);
  par.alpha = 1.0;
  const double r0_one = basic_reproduction_number(par);
  par.alpha = 0.5;
  CHECK(basic_reproduction_number(par) == doctest::Approx(0.5 * (r0_zero + r0_one)).epsilon(1e-13));
  CHECK(basic_reproduction_number(par) == doctest::Approx(9.0878).epsilon(1e-4));
}

TEST_CASE("R0 strictly decreases in alpha when r > 0") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    Parameters par = sampling::parameters(rng);
    par.r = sampling::uniform(rng, 1e-3, 1.0);
    par.k = std::max(par.k, 1e-3);
    const double a = sampling::uniform(rng, 0.0, 0.99);
    Parameters lo = par, hi = par;
    lo.alpha = a;
    hi.alpha = a + 0.01;
    CHECK(basic_reproduction_number(hi) < basic_reproduction_number(lo));
  }
  Parameters par;
  par.r = 0.0;
  par.alpha = 0.2;
  const double a = basic_reproduction_number(par);
  par.alpha = 0.9;
  CHECK(basic_reproduction_number(par) == doctest::Approx(a).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  Parameters par;
  CHECK_NOTHROW(par.validate());
  par.alpha = 1.5;
  CHECK_THROWS_WITH_AS(par.validate(), doctest::Contains("alpha"), std::invalid_argument);
  par = {};
  par.mu = 0.0;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
  par = {};
  par.sigma = -0.1;
  CHECK_THROWS_AS(par.validate(), std::invalid_argument);
}

TEST_CASE("rhs_controlled rejects (1 + u1) alpha > 1") {
  Parameters par;
  par.alpha = 0.7;
  ControlVector u;
  u.u1 = 0.5;
  CHECK_THROWS_AS(rhs_controlled(State::default_initial(), u, par), std::invalid_argument);
  u.u1 = 0.3 / 0.7;
  CHECK_NOTHROW(rhs_controlled(State::default_initial(), u, par));
}
