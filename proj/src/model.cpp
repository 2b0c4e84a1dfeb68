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

#include "tbx/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tbx {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string("parameter '") + field + "' " + what);
  }
}

}  // namespace

void Parameters::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  require(finite_nonneg(Lambda), "Lambda", "must be finite and >= 0");
  require(finite_nonneg(beta_c), "beta_c", "must be finite and >= 0");
  require(finite_nonneg(sigma) && sigma <= 1.0, "sigma", "must lie in [0, 1]");
  require(std::isfinite(mu) && mu > 0.0, "mu", "must be finite and > 0");
  require(finite_nonneg(k), "k", "must be finite and >= 0");
  require(finite_nonneg(d), "d", "must be finite and >= 0");
  require(finite_nonneg(r), "r", "must be finite and >= 0");
  require(finite_nonneg(p), "p", "must be finite and >= 0");
  require(finite_nonneg(alpha) && alpha <= 1.0, "alpha", "must lie in [0, 1]");
}

double State::min_component() const { return std::min({S, E, I_S, I_N, T}); }

double& ControlVector::operator[](std::size_t i) {
  switch (i) {
    case 0: return u1;
    case 1: return u2;
    case 2: return u3;
    case 3: return u4;
  }
  throw std::out_of_range("control index");
}

double ControlVector::operator[](std::size_t i) const {
  return const_cast<ControlVector&>(*this)[i];
}

double force_of_infection(const State& x, const Parameters& par) {
  const double n = x.total();
  if (!(n > 0.0)) return 0.0;
  return par.beta_c * x.infectious() / n;
}

Derivative rhs_base(const State& x, const Parameters& par) {
  const double lam = force_of_infection(x, par);
  const double progression = par.p * lam * x.E + par.k * x.E;
  const double reinfected_T = par.sigma * lam * x.T;

  Derivative dx;
  dx.dS = par.Lambda - lam * x.S - par.mu * x.S;
  dx.dE = lam * x.S - par.p * lam * x.E - (par.mu + par.k) * x.E + reinfected_T;
  dx.dI_S = par.alpha * progression - (par.mu + par.r + par.d) * x.I_S;
  dx.dI_N = (1.0 - par.alpha) * progression - (par.mu + par.d) * x.I_N;
  dx.dT = par.r * x.I_S - reinfected_T - par.mu * x.T;
  return dx;
}

Derivative rhs_controlled(const State& x, const ControlVector& u, const Parameters& par) {
  const double seek = (1.0 + u.u1) * par.alpha;
  if (seek > 1.0 + 1e-12) {
    throw std::invalid_argument("control u1 pushes (1+u1)*alpha above 1");
  }
  const double lam = force_of_infection(x, par);
  const double sigma_eff = (1.0 - u.u4) * par.sigma;
  const double r_eff = (1.0 + u.u3) * par.r;
  // E -> I flow: endogenous progression plus exogenous reinfection.
  const double progression = par.p * lam * x.E + par.k * x.E;
  const double reinfected_T = sigma_eff * lam * x.T;

  Derivative dx;
  dx.dS = par.Lambda - lam * x.S - par.mu * x.S;
  dx.dE = lam * x.S - par.p * lam * x.E - (par.mu + par.k) * x.E + reinfected_T;
  dx.dI_S = seek * progression - (par.mu + r_eff + par.d) * x.I_S + u.u2 * x.I_N;
  dx.dI_N = (1.0 - seek) * progression - (par.mu + par.d) * x.I_N - u.u2 * x.I_N;
  dx.dT = r_eff * x.I_S - reinfected_T - par.mu * x.T;
  return dx;
}

double population_balance(const State& x, const Parameters& par) {
  return par.Lambda - par.mu * x.total() - par.d * x.infectious();
}

double basic_reproduction_number(const Parameters& par) {
  const double to_infectious = par.beta_c * par.k / (par.mu + par.k);
  return to_infectious * par.alpha / (par.mu + par.r + par.d) +
         to_infectious * (1.0 - par.alpha) / (par.mu + par.d);
}

std::string to_string(const State& x) {
  std::ostringstream os;
  os.precision(10);
  os << "(S=" << x.S << ", E=" << x.E << ", I_S=" << x.I_S << ", I_N=" << x.I_N
     << ", T=" << x.T << ")";
  return os.str();
}

}  // namespace tbx
