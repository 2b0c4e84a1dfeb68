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
#include <string>

namespace tbx {

using Vec5 = std::array<double, 5>;

/// Model constants. beta_c is the product of the per-contact transmission
/// probability and the contact rate; only the product enters the dynamics.
struct Parameters {
  double Lambda = 588.0;  // recruitment, humans/year
  double beta_c = 2.0;    // transmission, 1/year
  double sigma = 0.9;     // reinfection reduction for treated
  double mu = 0.0235;     // natural death, 1/year
  double k = 0.0294;      // progression E -> I, 1/year
  double d = 0.05;        // disease-induced death, 1/year
  double r = 0.2906;      // treatment, 1/year
  double p = 0.4;         // exogenous reinfection level
  double alpha = 1.0;     // fraction seeking treatment

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;

  static Parameters table_defaults() { return {}; }
};

/// Compartment sizes at one instant, in humans.
struct State {
  double S = 0.0;
  double E = 0.0;
  double I_S = 0.0;
  double I_N = 0.0;
  double T = 0.0;

  double total() const { return S + E + I_S + I_N + T; }
  double infectious() const { return I_S + I_N; }
  double min_component() const;

  Vec5 to_vec() const { return {S, E, I_S, I_N, T}; }
  static State from_vec(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }

  static State default_initial() { return {18000.0, 5500.0, 700.0, 400.0, 400.0}; }
};

struct Derivative {
  double dS = 0.0;
  double dE = 0.0;
  double dI_S = 0.0;
  double dI_N = 0.0;
  double dT = 0.0;

  double sum() const { return dS + dE + dI_S + dI_N + dT; }
  Vec5 to_vec() const { return {dS, dE, dI_S, dI_N, dT}; }
};

struct ControlVector {
  double u1 = 0.0;  // shifts new infectious cases towards I_S
  double u2 = 0.0;  // moves I_N to I_S
  double u3 = 0.0;  // raises the treatment rate
  double u4 = 0.0;  // shields treated individuals from reinfection

  double& operator[](std::size_t i);
  double operator[](std::size_t i) const;
};

inline constexpr std::size_t kNumControls = 4;

/// beta_c * I / N, zero when N is not positive.
double force_of_infection(const State& x, const Parameters& par);

/// Uncontrolled dynamics.
Derivative rhs_base(const State& x, const Parameters& par);

/// Dynamics with the four time-dependent interventions. Throws
/// std::invalid_argument if (1 + u1) * alpha exceeds one.
Derivative rhs_controlled(const State& x, const ControlVector& u, const Parameters& par);

/// Lambda - mu N - d (I_S + I_N); the value every right-hand side must sum to.
double population_balance(const State& x, const Parameters& par);

/// Spectral radius of the next-generation matrix.
double basic_reproduction_number(const Parameters& par);

std::string to_string(const State& x);

}  // namespace tbx
