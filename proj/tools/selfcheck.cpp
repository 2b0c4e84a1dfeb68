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

#include "selfcheck.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "tbx/equilibria.hpp"
#include "tbx/integrate.hpp"
#include "tbx/sampling.hpp"

namespace tbx::tools {

namespace {

struct Tally {
  std::ostream& out;
  int failed = 0;

  void report(const char* name, int bad, int total, double worst) {
    out << (bad == 0 ? "ok   " : "FAIL ") << name << ": " << total - bad << "/" << total
        << " (worst " << worst << ")\n";
    if (bad) ++failed;
  }
};

}  // namespace

int run_selfcheck(std::uint64_t seed, int draws, std::ostream& out) {
  std::mt19937_64 rng(seed);
  Tally tally{out};
  out << "seed " << seed << ", " << draws << " draws\n";

  {
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Parameters par = sampling::parameters(rng);
      const State x = sampling::state(rng);
      const ControlVector u = sampling::controls(rng, par);
      const double want = population_balance(x, par);
      const double e = std::max(std::abs(rhs_base(x, par).sum() - want),
                                std::abs(rhs_controlled(x, u, par).sum() - want));
      const double rel = e / std::max(1.0, std::abs(want));
      worst = std::max(worst, rel);
      if (rel > 1e-10) ++bad;
    }
    tally.report("population balance", bad, draws, worst);
  }

  {
    int bad = 0;
    double worst = 0.0;
    const int runs = std::max(1, draws / 20);
    for (int i = 0; i < runs; ++i) {
      const Parameters par = sampling::parameters(rng);
      const ForwardResult f = integrate_forward(par, sampling::state(rng), TimeGrid{});
      worst = std::min(worst, f.min_component);
      if (f.min_component < -1e-9) ++bad;
    }
    tally.report("positivity", bad, runs, worst);
  }

  {
    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Parameters par = sampling::parameters(rng);
      const double e = sampling::adjoint_fd_error(sampling::positive_state(rng), sampling::controls(rng, par),
                                                  sampling::adjoint(rng), CostWeights{}, par);
      worst = std::max(worst, e);
      if (e > 1e-6) ++bad;
    }
    tally.report("adjoint vs finite differences", bad, draws, worst);
  }

  {
    int bad = 0;
    const int runs = std::max(1, draws / 10);
    for (int i = 0; i < runs; ++i) {
      const Parameters par = sampling::parameters(rng, i % 2 ? 1.0 : 0.0);
      if (!classify_endemic(par).oracle_agrees) ++bad;
    }
    tally.report("equilibrium classification vs scan", bad, runs, 0.0);
  }

  return tally.failed;
}

}  // namespace tbx::tools
