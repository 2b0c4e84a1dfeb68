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
#include <cmath>
#include <random>

#include "tbx/model.hpp"
#include "tbx/optctl.hpp"

namespace tbx::sampling {

// Draws for randomized property checks. Ranges bracket the default constants
// by an order of magnitude either way.

template <class Rng>
double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <class Rng>
Parameters parameters(Rng& rng, double alpha) {
  Parameters p;
  p.Lambda = uniform(rng, 50.0, 2000.0);
  p.beta_c = uniform(rng, 0.05, 20.0);
  p.sigma = uniform(rng, 0.0, 1.0);
  p.mu = uniform(rng, 0.005, 0.2);
  p.k = uniform(rng, 0.001, 0.5);
  p.d = uniform(rng, 0.0, 0.5);
  p.r = uniform(rng, 0.0, 1.0);
  p.p = uniform(rng, 0.0, 1.0);
  p.alpha = alpha;
  return p;
}

template <class Rng>
Parameters parameters(Rng& rng) {
  return parameters(rng, uniform(rng, 0.0, 1.0));
}

template <class Rng>
State state(Rng& rng, double scale = 30000.0) {
  return {uniform(rng, 0.0, scale), uniform(rng, 0.0, scale / 3), uniform(rng, 0.0, scale / 10),
          uniform(rng, 0.0, scale / 10), uniform(rng, 0.0, scale / 10)};
}

/// Strictly positive state, for checks that divide by N.
template <class Rng>
State positive_state(Rng& rng, double scale = 30000.0) {
  State x = state(rng, scale);
  x.S += 1.0;
  x.E += 1.0;
  x.I_S += 1.0;
  x.I_N += 1.0;
  x.T += 1.0;
  return x;
}

/// Controls inside the default box for `par`.
template <class Rng>
ControlVector controls(Rng& rng, const Parameters& par) {
  const ControlBounds b = ControlBounds::defaults_for(par, 0.0);
  ControlVector u;
  for (std::size_t i = 0; i < kNumControls; ++i) u[i] = uniform(rng, b.lower[i], b.upper[i]);
  return u;
}

template <class Rng>
AdjointState adjoint(Rng& rng, double scale = 10.0) {
  AdjointState l;
  for (auto& v : l.lambda) v = uniform(rng, -scale, scale);
  return l;
}

/// -dH/dx by fourth-order central differences; reference for adjoint_rhs.
inline AdjointState numeric_adjoint_rhs(const State& x, const ControlVector& u, const AdjointState& l,
                                        const CostWeights& w, const Parameters& par) {
  AdjointState out;
  const Vec5 base = x.to_vec();
  for (std::size_t i = 0; i < 5; ++i) {
    const double h = 1e-3 * std::max(std::abs(base[i]), 1.0);
    auto H = [&](double shift) {
      Vec5 v = base;
      v[i] += shift;
      return hamiltonian(State::from_vec(v), u, l, w, par);
    };
    const double d = (-H(2 * h) + 8 * H(h) - 8 * H(-h) + H(-2 * h)) / (12 * h);
    out[i] = -d;
  }
  return out;
}

/// Largest componentwise gap between adjoint_rhs and the difference quotient,
/// relative to the largest component of either.
inline double adjoint_fd_error(const State& x, const ControlVector& u, const AdjointState& l,
                               const CostWeights& w, const Parameters& par) {
  const AdjointState a = adjoint_rhs(x, u, l, w, par);
  const AdjointState n = numeric_adjoint_rhs(x, u, l, w, par);
  double scale = 0.0;
  double gap = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    scale = std::max({scale, std::abs(a[i]), std::abs(n[i])});
    gap = std::max(gap, std::abs(a[i] - n[i]));
  }
  return scale > 0.0 ? gap / scale : gap;
}

}  // namespace tbx::sampling
