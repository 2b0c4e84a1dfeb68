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

#include "tbx/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tbx/kernels/kernels.hpp"

namespace tbx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// |R0 - Rp| below this (relative) counts as the double-root case.
constexpr double kThresholdTieTolerance = 1e-9;

void require_alpha_zero(const Parameters& par, const char* what) {
  if (par.alpha != 0.0) {
    throw std::invalid_argument(std::string(what) + " is defined for alpha = 0 only");
  }
  if (!(par.p > 0.0) || !(par.beta_c > 0.0)) {
    throw std::invalid_argument(std::string(what) + " requires p > 0 and beta_c > 0");
  }
}

template <class F>
double bisect(F&& f, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimum of f on [lo, hi]; returns the abscissa.
template <class F>
double golden_minimum(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

void sort_unique(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, b); }),
           xs.end());
}

double poly_eval(const std::array<double, 4>& a, double x) {
  return ((a[3] * x + a[2]) * x + a[1]) * x + a[0];
}

// Polynomial helpers for building the endemic cubic; ascending coefficients.
using Poly = std::array<double, 4>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; i + j < 4; ++j) out[i + j] += a[i] * b[j];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 4 - i; j < 4; ++j) {
      if (a[i] != 0.0 && b[j] != 0.0) throw std::logic_error("endemic polynomial degree overflow");
    }
  }
  return out;
}

Poly poly_add(const Poly& a, const Poly& b, double scale_b = 1.0) {
  Poly out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = a[i] + scale_b * b[i];
  return out;
}

Poly poly_scale(const Poly& a, double s) { return poly_add(Poly{}, a, s); }

struct UnitRoot {
  double x;
  bool tangent;  // double root where the polynomial touches zero
};

std::vector<UnitRoot> unit_interval_roots(const Poly& a) {
  std::vector<UnitRoot> roots;
  const double scale = std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]);
  if (scale == 0.0) return roots;

  // Monotone pieces of [0, 1] split at the critical points.
  std::vector<double> breaks{0.0};
  const double c2 = 3.0 * a[3], c1 = 2.0 * a[2], c0 = a[1];
  std::vector<double> crit;
  if (c2 != 0.0) {
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc >= 0.0) {
      const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
      if (q != 0.0) crit.push_back(c0 / q);
      crit.push_back(q / c2);
    }
  } else if (c1 != 0.0) {
    crit.push_back(-c0 / c1);
  }
  std::sort(crit.begin(), crit.end());
  for (double c : crit) {
    if (c > 0.0 && c < 1.0) breaks.push_back(c);
  }
  breaks.push_back(1.0);

  auto f = [&](double x) { return poly_eval(a, x); };
  // Sign just to the right of 0 when the constant term vanishes.
  auto left_value = [&](double x) {
    if (x > 0.0 || a[0] != 0.0) return f(x);
    for (std::size_t i = 1; i < 4; ++i) {
      if (a[i] != 0.0) return a[i];
    }
    return 0.0;
  };

  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s], hi = breaks[s + 1];
    const double f_lo = left_value(lo), f_hi = f(hi);
    if (f_hi == 0.0) {
      roots.push_back({hi, false});
    } else if (f_lo != 0.0 && (f_lo < 0.0) != (f_hi < 0.0)) {
      roots.push_back({bisect(f, lo, hi, f_lo), false});
    }
  }
  // Touching zero at an interior critical point without a sign change.
  for (std::size_t s = 1; s + 1 < breaks.size(); ++s) {
    const double c = breaks[s];
    if (std::abs(f(c)) <= 1e-13 * scale) {
      const bool already = std::any_of(roots.begin(), roots.end(),
                                       [&](const UnitRoot& r) { return std::abs(r.x - c) < 1e-9; });
      if (!already) roots.push_back({c, true});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const UnitRoot& l, const UnitRoot& r) { return l.x < r.x; });
  return roots;
}

// Closed-form alpha = 0 steady state at x = I/N: S* = Lambda/(mu + beta_c x),
// E* = (mu + d) I*/(k + p beta_c x), N* from N = S + E + I.
State alpha_zero_state(const Parameters& par, double x) {
  const double lf = par.beta_c * x;
  const double S = par.Lambda / (par.mu + lf);
  const double e_per_n = (par.mu + par.d) * x / (par.k + par.p * lf);
  const double N = S / (1.0 - x - e_per_n);
  return {S, e_per_n * N, 0.0, x * N, 0.0};
}

}  // namespace

std::string_view to_string(EndemicClass c) {
  switch (c) {
    case EndemicClass::NoEndemic: return "NoEndemic";
    case EndemicClass::UniqueEndemic: return "UniqueEndemic";
    case EndemicClass::TwoEndemic: return "TwoEndemic";
    case EndemicClass::ThresholdEndemic: return "ThresholdEndemic";
  }
  return "Unknown";
}

std::vector<double> QuadraticCoefficients::positive_roots() const {
  const double disc = discriminant();
  if (disc < 0.0) return {};
  if (disc == 0.0) {
    if (-P / 2.0 > 0.0) return {-P / 2.0};
    return {};
  }
  // Cancellation-free pair: q = -(P/2 + sign(P) sqrt(disc)), roots q and Q/q.
  const double q = -(P / 2.0 + std::copysign(std::sqrt(disc), P));
  std::vector<double> roots;
  if (q != 0.0) {
    roots = {q, Q / q};
  } else {
    roots = {0.0, -P};
  }
  std::erase_if(roots, [](double x) { return !(x > 0.0); });
  std::sort(roots.begin(), roots.end());
  return roots;
}

State disease_free_equilibrium(const Parameters& par) {
  if (!(par.mu > 0.0)) throw std::invalid_argument("disease-free equilibrium requires mu > 0");
  return {par.Lambda / par.mu, 0.0, 0.0, 0.0, 0.0};
}

double steady_state_residual(const State& x, const Parameters& par) {
  const Vec5 v = rhs_base(x, par).to_vec();
  double sum = 0.0;
  for (double c : v) sum += c * c;
  return std::sqrt(sum);
}

QuadraticCoefficients endemic_quadratic(const Parameters& par) {
  require_alpha_zero(par, "endemic_quadratic");
  const double bc = par.beta_c;
  const double m4 = par.mu + par.d;
  const double r0 = basic_reproduction_number(par);
  return {(par.k + m4) / (par.p * bc) + m4 / bc - 1.0,
          -m4 * (par.mu + par.k) * (r0 - 1.0) / (par.p * bc * bc)};
}

double subthreshold_Rp(const Parameters& par) {
  const QuadraticCoefficients q = endemic_quadratic(par);
  const double bc = par.beta_c;
  return 1.0 - par.p * bc * bc * q.P * q.P / (4.0 * (par.mu + par.d) * (par.mu + par.k));
}

std::optional<double> reinfection_threshold_p0(const Parameters& par) {
  if (par.alpha != 0.0) {
    throw std::invalid_argument("reinfection_threshold_p0 is defined for alpha = 0 only");
  }
  const double r0 = basic_reproduction_number(par);
  if (r0 > 1.0) return std::nullopt;
  if (!(par.beta_c > 0.0)) return kInf;
  // P = A + B/p and Q = C/p; 4 p^2 disc = A^2 p^2 + (2AB - 4C) p + B^2.
  const double bc = par.beta_c;
  const double m4 = par.mu + par.d;
  const double A = m4 / bc - 1.0;
  const double B = (par.k + m4) / bc;
  const double C = -m4 * (par.mu + par.k) * (r0 - 1.0) / (bc * bc);
  if (!(A < 0.0)) return kInf;
  const double root = std::sqrt(std::max(0.0, C * (C - A * B)));
  return ((2.0 * C - A * B) + 2.0 * root) / (A * A);
}

State reconstruct_steady_state(const Parameters& par, double x) {
  const kernels::ScanPoint s = kernels::scan_point(kernels::ScanConstants::from(par), x);
  const double L = par.Lambda;
  return {L * s.S, L * s.E, L * s.I_S, L * s.I_N, L * s.T};
}

double reduced_residual(const Parameters& par, double x) {
  return kernels::scan_point(kernels::ScanConstants::from(par), x).h;
}

std::array<double, 4> endemic_polynomial(const Parameters& par) {
  const double bc = par.beta_c;
  const double m3 = par.mu + par.r + par.d;
  const double m4 = par.mu + par.d;
  const double q = par.alpha / m3 + (1.0 - par.alpha) / m4;  // I per unit E-outflow g E
  const double cT = par.r * par.alpha / m3;                    // T (shield) per unit g E

  const Poly X{0.0, 1.0, 0.0, 0.0};
  const Poly G{par.k, par.p * bc, 0.0, 0.0};             // p lambda + k
  const Poly shield{par.mu, par.sigma * bc, 0.0, 0.0};   // sigma lambda + mu
  const Poly outflow{par.k + par.mu, par.p * bc, 0.0, 0.0};

  // beta_c [(q G (1 - x) - x) shield - cT G x] - outflow shield + sigma lambda cT G
  const Poly qG = poly_scale(G, q);
  const Poly bracket = poly_add(poly_add(qG, X, -1.0), poly_mul(qG, X), -1.0);
  Poly term = poly_add(poly_mul(bracket, shield), poly_mul(poly_scale(G, cT), X), -1.0);
  term = poly_scale(term, bc);
  term = poly_add(term, poly_mul(outflow, shield), -1.0);
  term = poly_add(term, poly_mul(Poly{0.0, par.sigma * bc * cT, 0.0, 0.0}, G));
  return term;
}

std::vector<double> polynomial_roots_unit_interval(const std::array<double, 4>& coeffs) {
  std::vector<double> xs;
  for (const UnitRoot& r : unit_interval_roots(coeffs)) xs.push_back(r.x);
  return xs;
}

std::vector<double> scan_endemic_fractions(const Parameters& par, std::size_t grid_size) {
  if (grid_size < 1000) throw std::invalid_argument("scan requires at least 1000 grid points");
  par.validate();
  if (par.Lambda == 0.0) return {};

  const kernels::ScanConstants c = kernels::ScanConstants::from(par);
  const std::size_t n = grid_size;
  std::vector<double> x(n + 1), h(n + 1);
  for (std::size_t i = 1; i <= n; ++i) x[i] = static_cast<double>(i) / static_cast<double>(n);
  kernels::scan_residuals(c, std::span<const double>(x).subspan(1), std::span<double>(h).subspan(1));
  x[0] = 0.0;
  h[0] = basic_reproduction_number(par) - 1.0;  // limit of h as x -> 0+

  auto f = [&](double xi) { return kernels::scan_point(c, xi).h; };
  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i + 1] == 0.0) {
      roots.push_back(x[i + 1]);
    } else if (h[i] != 0.0 && (h[i] < 0.0) != (h[i + 1] < 0.0)) {
      roots.push_back(bisect(f, x[i], x[i + 1], h[i]));
    }
  }
  // A pair of roots closer than the grid spacing shows up as a local minimum
  // of |h| that does not change sign.
  for (std::size_t i = 1; i < n; ++i) {
    const double s = h[i] < 0.0 ? -1.0 : 1.0;
    if (h[i] == 0.0 || s * h[i - 1] <= 0.0 || s * h[i + 1] <= 0.0) continue;
    if (!(s * h[i] < s * h[i - 1] && s * h[i] <= s * h[i + 1])) continue;
    const double lo = x[i - 1], hi = x[i + 1];
    auto g = [&](double xi) { return s * f(xi); };
    const double xm = golden_minimum(g, lo, hi);
    const double gm = g(xm);
    if (gm == 0.0) {
      roots.push_back(xm);
    } else if (gm < 0.0) {
      roots.push_back(bisect(f, lo, xm, h[i - 1]));
      roots.push_back(bisect(f, xm, hi, s * gm));
    }
  }
  sort_unique(roots);
  return roots;
}

std::vector<State> solve_endemic_numeric(const Parameters& par, std::size_t grid_size) {
  std::vector<State> out;
  for (double x : scan_endemic_fractions(par, grid_size)) out.push_back(reconstruct_steady_state(par, x));
  return out;
}

EquilibriumReport classify_endemic(const Parameters& par, std::size_t oracle_grid) {
  par.validate();
  EquilibriumReport rep;
  rep.r0 = basic_reproduction_number(par);
  rep.Rp = kNaN;
  rep.p0 = kNaN;

  std::vector<double> roots;
  bool tangent = false;
  if (par.Lambda == 0.0) {
    // no recruitment: the only steady state is the empty population
  } else if (par.alpha == 0.0 && par.p > 0.0 && par.beta_c > 0.0) {
    const QuadraticCoefficients q = endemic_quadratic(par);
    rep.Rp = subthreshold_Rp(par);
    rep.p0 = reinfection_threshold_p0(par);
    const double tie = kThresholdTieTolerance * std::max(1.0, std::abs(rep.Rp));
    if (rep.r0 > 1.0) {
      roots = q.positive_roots();
    } else if (rep.r0 == 1.0) {
      if (q.P < 0.0) roots = {-q.P};
    } else if (std::abs(rep.r0 - rep.Rp) <= tie) {
      if (q.P < 0.0) {
        roots = {-q.P / 2.0};
        tangent = true;
      }
    } else if (rep.p0 && par.p > *rep.p0 && rep.r0 > rep.Rp) {
      roots = q.positive_roots();
    }
    std::erase_if(roots, [](double x) { return x > 1.0; });
    for (double x : roots) rep.points.push_back(alpha_zero_state(par, x));
  } else {
    for (const UnitRoot& r : unit_interval_roots(endemic_polynomial(par))) {
      roots.push_back(r.x);
      tangent = tangent || r.tangent;
    }
    for (double x : roots) rep.points.push_back(reconstruct_steady_state(par, x));
  }
  rep.fractions = roots;

  if (roots.empty()) {
    rep.classification = EndemicClass::NoEndemic;
  } else if (roots.size() == 1) {
    rep.classification = tangent ? EndemicClass::ThresholdEndemic : EndemicClass::UniqueEndemic;
  } else {
    rep.classification = EndemicClass::TwoEndemic;
  }

  for (const State& s : rep.points) rep.max_residual = std::max(rep.max_residual, steady_state_residual(s, par));

  const std::vector<double> oracle = scan_endemic_fractions(par, oracle_grid);
  rep.oracle_count = oracle.size();
  rep.oracle_agrees = oracle.size() == roots.size();
  for (std::size_t i = 0; rep.oracle_agrees && i < roots.size(); ++i) {
    rep.oracle_agrees = std::abs(oracle[i] - roots[i]) <= 1e-6 * std::abs(roots[i]);
  }
  return rep;
}

ClosedFormAudit audit_closed_forms(const Parameters& par) {
  require_alpha_zero(par, "audit_closed_forms");
  const double bc = par.beta_c, mu = par.mu, k = par.k, d = par.d, p = par.p;
  const double r0 = basic_reproduction_number(par);

  ClosedFormAudit a;
  a.exact = endemic_quadratic(par);
  a.exact_Rp = subthreshold_Rp(par);
  a.exact_p0 = reinfection_threshold_p0(par);

  a.quoted.P = 1.0 - 1.0 / (mu + d) * mu / bc + (mu + k) / (p * bc);
  a.quoted.Q = -(mu + k) * mu / (p * bc * bc) * (r0 - 1.0);
  a.quoted_Rp = 1.0 - p * bc * bc / ((mu + k) * mu) * a.quoted.P * a.quoted.P;
  const double under = (mu + k) * (mu + k) * mu * mu / (4.0 * std::pow(bc, 4)) * (r0 - 1.0) * (r0 - 1.0) -
                       (mu / ((mu + d) * bc) + (mu + k) / bc) * (mu + k) * mu / (bc * bc) * (r0 - 1.0);
  a.quoted_p0 = (under >= 0.0 ? std::sqrt(under) : kNaN) + (mu + k) * mu / (2.0 * bc * bc) * (r0 - 1.0) -
                mu / ((mu + d) * bc) + (mu + k) / bc;

  if (const auto roots = a.quoted.positive_roots(); !roots.empty()) {
    const double x = roots.back();
    a.quoted_root = x;
    const double n_star = par.Lambda / mu;
    const double I = x * n_star;
    const State s{par.Lambda / (mu + bc * x), (mu + d) * I / (k + p * bc * x), 0.0, I, 0.0};
    a.quoted_root_residual = steady_state_residual(s, par);
  }
  if (const auto roots = a.exact.positive_roots(); !roots.empty() && roots.back() <= 1.0) {
    a.exact_root = roots.back();
    a.exact_root_residual = steady_state_residual(alpha_zero_state(par, roots.back()), par);
  }
  return a;
}

}  // namespace tbx
