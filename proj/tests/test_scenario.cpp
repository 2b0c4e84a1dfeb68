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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tbx/scenario.hpp"

using namespace tbx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tbx_test_scenario" / name;
  fs::remove_all(dir);
  return dir;
}

double peak_time(const ResultTable& series) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series.number(i, "total_infected") > series.number(best, "total_infected")) best = i;
  }
  return series.number(best, "t");
}

}  // namespace

TEST_CASE("alpha sweep") {
  const ScenarioConfig cfg = parse_config("scenario.type = alpha_sweep\n");
  const ScenarioResult r = run_alpha_sweep(cfg);
  CHECK(r.summary.columns() ==
        std::vector<std::string>{"alpha", "R0", "E_tf", "I_S_tf", "I_N_tf", "T_tf", "S_tf", "N_tf"});
  REQUIRE(r.summary.size() == 6);
  CHECK(r.summary.number(0, "alpha") == 1.0);
  CHECK(r.summary.number(0, "R0") == doctest::Approx(3.053).epsilon(1e-3));
  CHECK(r.summary.number(5, "R0") == doctest::Approx(15.12).epsilon(1e-3));
  for (std::size_t i = 1; i < 6; ++i) CHECK(r.summary.number(i, "R0") > r.summary.number(i - 1, "R0"));

  REQUIRE(r.plots.size() == 6);
  for (const auto& p : r.plots) CHECK(p.table.columns() == std::vector<std::string>{"t", "total_infected"});

  SUBCASE("alpha = 0 leaves T without a source") {
    // I_S only drains, so T is fed by the initial I_S alone and then decays
    const ResultTable& s = r.series[5].table;
    CHECK(r.series[5].cell == "alpha_0");
    const double rate = cfg.params.mu + cfg.params.r + cfg.params.d;
    for (std::size_t i = 0; i < s.size(); i += 100) {
      CHECK(s.number(i, "I_S") == doctest::Approx(700 * std::exp(-rate * s.number(i, "t"))).epsilon(1e-9));
    }
    std::size_t peak = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s.number(i, "T") > s.number(peak, "T")) peak = i;
    }
    for (std::size_t i = peak + 1; i < s.size(); ++i) CHECK(s.number(i, "T") < s.number(i - 1, "T"));
    CHECK(r.summary.number(5, "T_tf") < 1e-2);
  }
  SUBCASE("higher R0 peaks earlier") {
    const double t_alpha1 = peak_time(r.series[0].table);
    const double t_alpha0 = peak_time(r.series[5].table);
    MESSAGE("peak at t=" << t_alpha1 << " (alpha 1), t=" << t_alpha0 << " (alpha 0)");
    CHECK(t_alpha0 < t_alpha1);
  }
  SUBCASE("plot files") {
    const fs::path dir = scratch("sweep");
    write_result(r, dir);
    std::size_t dat = 0;
    for (const auto& e : fs::directory_iterator(dir / "plot")) dat += e.path().extension() == ".dat";
    CHECK(dat == 6);
    CHECK(fs::exists(dir / "plot" / "alpha_0.8_total_infected.dat"));
    CHECK(read_csv(dir / "alpha_sweep.csv").size() == 6);
  }
}

TEST_CASE("control grid") {
  const ScenarioConfig cfg = parse_config("scenario.type = control_grid\n");
  const ScenarioResult r = run_control_grid(cfg);
  REQUIRE(r.summary.size() == 9);
  REQUIRE(r.plots.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(r.summary.number(i, "converged") == 1.0);
    CHECK(r.summary.number(i, "iterations") <= 500.0);
    CHECK(r.summary.number(i, "max_interior_dHdu") < 1e-2);
  }
  // rows are cost-major: (10, .3) (10, .5) (10, .7) (100, .3) ...
  CHECK(r.summary.number(4, "cost") == 100.0);
  CHECK(r.summary.number(4, "alpha") == 0.5);
  CHECK(r.plots[0].cell == "C_10_alpha_0.3");

  for (std::size_t a = 0; a < 3; ++a) {
    for (int k = 1; k <= 4; ++k) {
      const std::string col = "mean_u" + std::to_string(k);
      CHECK(r.summary.number(6 + a, col) <= r.summary.number(a, col) + 1e-12);
    }
  }

  SUBCASE("control series stay in their boxes") {
    for (std::size_t c = 0; c < 9; ++c) {
      Parameters par = cfg.params;
      par.alpha = r.summary.number(c, "alpha");
      const ControlBounds b = cfg.bounds_for(par);
      const ResultTable& u = r.plots[c].table;
      REQUIRE(u.columns().size() == 5);
      for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
          const double v = u.number(i, "u" + std::to_string(k + 1));
          CHECK(v >= b.lower[k]);
          CHECK(v <= b.upper[k]);
        }
      }
    }
    Parameters p03 = cfg.params;
    p03.alpha = 0.3;
    CHECK(cfg.bounds_for(p03).upper[0] == 1.0);
  }
}

TEST_CASE("subset comparison") {
  const ScenarioConfig cfg = parse_config("scenario.type = subset_comparison\nsubsets.masks = 1100, 0011, 1111, 0000\n");
  const ScenarioResult r = run_subset_comparison(cfg);
  REQUIRE(r.summary.size() == 5);
  const auto& rows = r.summary.rows();
  CHECK(std::get<std::string>(rows[0][0]) == "1100");
  CHECK(std::get<std::string>(rows[4][0]) == "0000");
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.summary.number(i, "converged") == 1.0);

  // all controls beat either subset
  const double all = r.summary.number(2, "total_infected_tf");
  CHECK(all <= r.summary.number(0, "total_infected_tf"));
  CHECK(all <= r.summary.number(1, "total_infected_tf"));
  CHECK(r.summary.number(1, "total_infected_tf") <= r.summary.number(0, "total_infected_tf"));

  // pinning every control reproduces the uncontrolled baseline
  for (const char* col : {"S_tf", "E_tf", "I_S_tf", "I_N_tf", "T_tf", "objective"}) {
    CHECK(r.summary.number(3, col) == doctest::Approx(r.summary.number(4, col)).epsilon(1e-12));
  }
}

TEST_CASE("scenario type must match the runner") {
  const ScenarioConfig cfg = parse_config("");
  CHECK_THROWS_AS(run_alpha_sweep(cfg), std::invalid_argument);
  CHECK_NOTHROW(run_single(cfg));
  CHECK(run_scenario(cfg).name == "simulate");
}

TEST_CASE("equilibria table") {
  const ScenarioConfig cfg = parse_config("params.alpha = 0\n");
  const ScenarioResult r = run_equilibria(cfg);
  REQUIRE(r.summary.size() == 2);
  CHECK(std::get<std::string>(r.summary.rows()[0][0]) == "disease_free");
  CHECK(r.summary.number(1, "x") == doctest::Approx(0.873897244496).epsilon(1e-10));
  CHECK(r.summary.number(1, "residual") < 1e-8);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series[0].cell == "closed_form_audit");

  const ScenarioResult one = run_equilibria(parse_config(""));
  CHECK(one.series.empty());
}

TEST_CASE("identical configs give byte-identical files") {
  const ScenarioConfig cfg = parse_config("scenario.type = subset_comparison\ngrid.tf = 10\n");
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const auto fa = write_result(run_scenario(cfg), a);
  const auto fb = write_result(run_scenario(cfg), b);
  REQUIRE(fa.size() == fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    CHECK(fs::relative(fa[i], a) == fs::relative(fb[i], b));
    CHECK(slurp(fa[i]) == slurp(fb[i]));
  }
}

TEST_CASE("labels") {
  CHECK(label_number(0.7) == "0.7");
  CHECK(label_number(1000.0) == "1000");
  CHECK(label_number(0.0) == "0");
}
