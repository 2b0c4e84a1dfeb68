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

#include "tbx/optctl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tbx/kernels/kernels.hpp"

namespace tbx {

namespace {

kernels::ControlConstants control_constants(const CostWeights& w, const ControlBounds& b,
                                            const Parameters& par) {
  return {par.beta_c, par.sigma, par.k, par.r, par.p, par.alpha, w.C, b.lower, b.upper};
}

double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return sum * h;
}

double relative_change(const ControlTrajectory& next, const ControlTrajectory& prev,
                       const ActiveMask& active) {
  double worst = 0.0;
  for (std::size_t j = 0; j < kNumControls; ++j) {
    if (!active[j]) continue;
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      diff = std::max(diff, std::abs(next[i][j] - prev[i][j]));
      scale = std::max(scale, std::abs(next[i][j]));
    }
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  return worst;
}

}  // namespace

void CostWeights::validate() const {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!std::isfinite(C[i]) || !(C[i] > 0.0)) {
      throw std::invalid_argument("cost weight C" + std::to_string(i + 1) + " must be finite and > 0");
    }
  }
}

ControlBounds ControlBounds::defaults_for(const Parameters& par, double lower_bound) {
  ControlBounds b;
  b.lower.fill(lower_bound);
  b.upper[0] = par.alpha > 0.0 ? std::clamp((1.0 - par.alpha) / par.alpha, 0.0, 1.0) : 1.0;
  b.upper[1] = 0.9;
  b.upper[2] = par.r > 0.0 ? std::clamp((1.0 - par.r) / par.r, 0.0, 1.0) : 1.0;
  b.upper[3] = 0.9;
  // alpha = 1 leaves no room for u1: the box collapses to {0}
  for (std::size_t i = 0; i < 4; ++i) b.lower[i] = std::min(b.lower[i], b.upper[i]);
  return b;
}

void ControlBounds::validate(const Parameters& par) const {
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string name = "u" + std::to_string(i + 1);
    if (!(lower[i] >= 0.0) || !(upper[i] >= lower[i]) || !std::isfinite(upper[i])) {
      throw std::invalid_argument("bounds for " + name + " must satisfy 0 <= lower <= upper");
    }
  }
  if ((1.0 + upper[0]) * par.alpha > 1.0 + 1e-12) {
    throw std::invalid_argument("upper bound of u1 lets (1+u1)*alpha exceed 1");
  }
  if (upper[3] > 1.0) throw std::invalid_argument("upper bound of u4 must not exceed 1");
}

double running_cost(const State& x, const ControlVector& u, const CostWeights& w) {
  double cost = x.E + x.I_N + x.I_S;
  for (std::size_t i = 0; i < 4; ++i) cost += 0.5 * w.C[i] * u[i] * u[i];
  return cost;
}

double objective(const StateTrajectory& states, const ControlTrajectory& controls,
                 const CostWeights& w) {
  if (!(states.grid == controls.grid) || states.size() != controls.size() ||
      states.size() != states.grid.nodes()) {
    throw std::invalid_argument("objective: state and control trajectories use different grids");
  }
  std::vector<double> f(states.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = running_cost(states[i], controls[i], w);
  return trapezoid(f, states.grid.step());
}

double hamiltonian(const State& x, const ControlVector& u, const AdjointState& lambda,
                   const CostWeights& w, const Parameters& par) {
  const Vec5 g = rhs_controlled(x, u, par).to_vec();
  double h = running_cost(x, u, w);
  for (std::size_t i = 0; i < 5; ++i) h += lambda[i] * g[i];
  return h;
}

AdjointState adjoint_rhs(const State& x, const ControlVector& u, const AdjointState& lambda,
                         const CostWeights& /*w*/, const Parameters& par) {
  const double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2], l4 = lambda[3], l5 = lambda[4];
  const double seek = (1.0 + u.u1) * par.alpha;
  const double sigma_eff = (1.0 - u.u4) * par.sigma;
  const double r_eff = (1.0 + u.u3) * par.r;
  const double N = x.total();
  const double F = force_of_infection(x, par);

  // Coefficient of the force of infection in sum(lambda_i g_i).
  const double wF = -l1 * x.S + l2 * (x.S - par.p * x.E + sigma_eff * x.T) +
                    l3 * seek * par.p * x.E + l4 * (1.0 - seek) * par.p * x.E - l5 * sigma_eff * x.T;
  // dF/dx: F = beta_c I / N.
  double dF_other = 0.0, dF_infectious = 0.0;
  if (N > 0.0) {
    dF_other = -par.beta_c * x.infectious() / (N * N);
    dF_infectious = par.beta_c * (N - x.infectious()) / (N * N);
  }

  const double progression_rate = par.p * F + par.k;
  AdjointState dH;
  dH[0] = -l1 * F - l1 * par.mu + l2 * F + wF * dF_other;
  dH[1] = 1.0 - l2 * (par.p * F + par.mu + par.k) + l3 * seek * progression_rate +
          l4 * (1.0 - seek) * progression_rate + wF * dF_other;
  dH[2] = 1.0 - l3 * (par.mu + r_eff + par.d) + l5 * r_eff + wF * dF_infectious;
  dH[3] = 1.0 + l3 * u.u2 - l4 * (par.mu + par.d + u.u2) + wF * dF_infectious;
  dH[4] = l2 * sigma_eff * F - l5 * sigma_eff * F - l5 * par.mu + wF * dF_other;

  AdjointState out;
  for (std::size_t i = 0; i < 5; ++i) out[i] = -dH[i];
  return out;
}

ControlVector control_gradient(const State& x, const ControlVector& u, const AdjointState& lambda,
                               const CostWeights& w, const Parameters& par) {
  const double F = force_of_infection(x, par);
  const double l2 = lambda[1], l3 = lambda[2], l4 = lambda[3], l5 = lambda[4];
  ControlVector g;
  g.u1 = w.C[0] * u.u1 + (l3 - l4) * (par.alpha * par.p * F * x.E + par.alpha * par.k * x.E);
  g.u2 = w.C[1] * u.u2 + (l3 - l4) * x.I_N;
  g.u3 = w.C[2] * u.u3 + (l5 - l3) * par.r * x.I_S;
  g.u4 = w.C[3] * u.u4 + (l5 - l2) * par.sigma * F * x.T;
  return g;
}

ControlVector control_update(const State& x, const AdjointState& lambda, const CostWeights& w,
                             const ControlBounds& b, const Parameters& par) {
  const kernels::ControlConstants c = control_constants(w, b, par);
  const auto raw = kernels::stationary_controls(c, x.S, x.E, x.I_S, x.I_N, x.T, lambda[1],
                                                lambda[2], lambda[3], lambda[4]);
  ControlVector u;
  for (std::size_t j = 0; j < 4; ++j) u[j] = kernels::project(raw[j], b.lower[j], b.upper[j]);
  return u;
}

ControlTrajectory control_update(const StateTrajectory& states, const AdjointTrajectory& adjoints,
                                 const CostWeights& w, const ControlBounds& b, const Parameters& par,
                                 const ActiveMask& active) {
  if (!(states.grid == adjoints.grid) || states.size() != adjoints.size()) {
    throw std::invalid_argument("control_update: state and adjoint grids differ");
  }
  const std::size_t n = states.size();
  std::array<std::vector<double>, 9> in;
  for (auto& col : in) col.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const State& x = states[i];
    const AdjointState& l = adjoints[i];
    in[0][i] = x.S;
    in[1][i] = x.E;
    in[2][i] = x.I_S;
    in[3][i] = x.I_N;
    in[4][i] = x.T;
    for (std::size_t j = 0; j < 4; ++j) in[5 + j][i] = l[j + 1];
  }
  std::array<std::vector<double>, 4> out;
  for (auto& col : out) col.resize(n);
  const kernels::NodeBatch batch{in[0], in[1], in[2], in[3], in[4], in[5], in[6], in[7], in[8]};
  kernels::update_controls(control_constants(w, b, par), batch, {out[0], out[1], out[2], out[3]});

  ControlTrajectory u{states.grid, std::vector<ControlVector>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 4; ++j) u.values[i][j] = active[j] ? out[j][i] : 0.0;
  }
  return u;
}

AdjointTrajectory solve_adjoint(const Parameters& par, const CostWeights& w,
                                const StateTrajectory& states, const ControlTrajectory& controls) {
  auto field = [&](const State& x, const ControlVector& u, const AdjointState& l) {
    return adjoint_rhs(x, u, l, w, par);
  };
  return integrate_backward(field, AdjointState{}, states, controls);
}

ControlTrajectory constant_controls(const TimeGrid& grid, const ControlVector& u) {
  return {grid, std::vector<ControlVector>(grid.nodes(), u)};
}

OptimalSolution forward_backward_sweep(const Parameters& par, const CostWeights& w,
                                       const ControlBounds& b, const TimeGrid& grid,
                                       const State& initial, const ActiveMask& active,
                                       const SweepOptions& opts) {
  par.validate();
  w.validate();
  b.validate(par);
  grid.validate();
  if (!(opts.relaxation > 0.0 && opts.relaxation <= 1.0)) {
    throw std::invalid_argument("sweep relaxation must lie in (0, 1]");
  }

  ControlVector start;
  for (std::size_t j = 0; j < 4; ++j) start[j] = active[j] ? b.lower[j] : 0.0;
  ControlTrajectory u = constant_controls(grid, start);

  OptimalSolution sol;
  sol.active = active;
  const bool any_active = std::any_of(active.begin(), active.end(), [](bool a) { return a; });

  ControlTrajectory best = u;
  double best_objective = std::numeric_limits<double>::infinity();
  if (any_active) {
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
      const StateTrajectory x = integrate_forward(par, initial, grid, &u).trajectory;
      const double J = objective(x, u, w);
      if (J < best_objective) {
        best_objective = J;
        best = u;
      }
      const AdjointTrajectory lam = solve_adjoint(par, w, x, u);
      const ControlTrajectory computed = control_update(x, lam, w, b, par, active);

      ControlTrajectory next = u;
      for (std::size_t i = 0; i < next.size(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          next.values[i][j] = opts.relaxation * computed[i][j] + (1.0 - opts.relaxation) * u[i][j];
        }
      }
      sol.last_change = relative_change(next, u, active);
      sol.iterations = it;
      u = std::move(next);
      if (sol.last_change < opts.tolerance) {
        sol.converged = true;
        break;
      }
    }
  } else {
    sol.converged = true;
  }

  if (!sol.converged) {
    const StateTrajectory x = integrate_forward(par, initial, grid, &u).trajectory;
    if (objective(x, u, w) > best_objective) u = best;
  }
  sol.controls = std::move(u);
  sol.states = integrate_forward(par, initial, grid, &sol.controls).trajectory;
  sol.adjoints = solve_adjoint(par, w, sol.states, sol.controls);
  sol.objective = objective(sol.states, sol.controls, w);
  return sol;
}

StationarityReport stationarity_report(const OptimalSolution& sol, const CostWeights& w,
                                       const ControlBounds& b, const Parameters& par) {
  StationarityReport rep;
  rep.included = sol.active;
  const kernels::ControlConstants c = control_constants(w, b, par);
  for (std::size_t i = 0; i < sol.states.size(); ++i) {
    const State& x = sol.states[i];
    const AdjointState& l = sol.adjoints[i];
    const ControlVector& u = sol.controls[i];
    const auto raw = kernels::stationary_controls(c, x.S, x.E, x.I_S, x.I_N, x.T, l[1], l[2], l[3], l[4]);
    const ControlVector grad = control_gradient(x, u, l, w, par);
    for (std::size_t j = 0; j < 4; ++j) {
      if (!sol.active[j]) continue;
      if (raw[j] <= b.lower[j]) {
        ++rep.lower_nodes[j];
        if (grad[j] < 0.0) ++rep.sign_violations[j];
      } else if (raw[j] >= b.upper[j]) {
        ++rep.upper_nodes[j];
        if (grad[j] > 0.0) ++rep.sign_violations[j];
      } else {
        ++rep.interior_nodes[j];
        rep.max_interior_gradient[j] = std::max(rep.max_interior_gradient[j], std::abs(grad[j]));
      }
    }
  }
  for (std::size_t j = 0; j < 4; ++j) {
    rep.max_interior = std::max(rep.max_interior, rep.max_interior_gradient[j]);
    if (rep.sign_violations[j] > 0) rep.sign_conditions_hold = false;
  }
  return rep;
}

std::vector<double> cosine_bump(const TimeGrid& grid, double center, double half_width) {
  std::vector<double> phi(grid.nodes(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double s = (grid.time(i) - center) / half_width;
    if (std::abs(s) < 1.0) {
      const double c = std::cos(0.5 * std::numbers::pi * s);
      phi[i] = c * c;
    }
  }
  return phi;
}

FirstVariation first_variation(const Parameters& par, const CostWeights& w, const State& initial,
                               const ControlTrajectory& controls, std::size_t control,
                               const std::vector<double>& bump, double delta) {
  const TimeGrid& grid = controls.grid;
  if (control >= 4 || bump.size() != grid.nodes()) {
    throw std::invalid_argument("first_variation: bad control index or bump length");
  }
  auto shifted = [&](double s) {
    ControlTrajectory u = controls;
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i][control] += s * bump[i];
    return u;
  };
  auto J = [&](const ControlTrajectory& u) {
    return objective(integrate_forward(par, initial, grid, &u).trajectory, u, w);
  };

  const StateTrajectory x = integrate_forward(par, initial, grid, &controls).trajectory;
  const AdjointTrajectory lam = solve_adjoint(par, w, x, controls);
  std::vector<double> integrand(grid.nodes());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    integrand[i] = control_gradient(x[i], controls[i], lam[i], w, par)[control] * bump[i];
  }

  FirstVariation fv;
  fv.control = control;
  fv.predicted = delta * trapezoid(integrand, grid.step());
  fv.actual = 0.5 * (J(shifted(delta)) - J(shifted(-delta)));
  fv.relative_error = std::abs(fv.actual - fv.predicted) / std::max(std::abs(fv.predicted), 1e-300);
  return fv;
}

}  // namespace tbx
