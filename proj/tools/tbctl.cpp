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

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "selfcheck.hpp"
#include "tbx/config.hpp"
#include "tbx/kernels/kernels.hpp"
#include "tbx/scenario.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
  cmd->add_option("--steps", c.steps, "RK4 steps over the horizon (overrides grid.steps)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "seed for randomized checks; the solver ignores it");
}

tbx::ScenarioConfig load(const Common& c, std::optional<tbx::ScenarioType> type) {
  tbx::ScenarioConfig cfg = tbx::load_config(c.config);
  if (type) cfg.scenario = *type;
  if (c.out) cfg.output_dir = *c.out;
  if (c.steps) cfg.grid.steps = *c.steps;
  cfg.validate();
  return cfg;
}

int emit(const tbx::ScenarioResult& r, const tbx::ScenarioConfig& cfg, bool print_summary) {
  if (print_summary) tbx::write_csv(r.summary, std::cout);
  for (const auto& p : tbx::write_result(r, cfg.output_dir)) std::cerr << "wrote " << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tbctl: TB transmission model with stigma and reinfection controls"};
  app.require_subcommand(1);

  Common simulate, sweep, optimize, subsets, equilibria;
  auto* c_sim = app.add_subcommand("simulate", "single uncontrolled run");
  add_common(c_sim, simulate);
  auto* c_sweep = app.add_subcommand("sweep-alpha", "uncontrolled runs over the stigma levels");
  add_common(c_sweep, sweep);
  auto* c_opt = app.add_subcommand("optimize", "forward-backward sweep over the cost x alpha grid");
  add_common(c_opt, optimize);
  auto* c_sub = app.add_subcommand("compare-subsets", "optimal control with subsets of the controls");
  add_common(c_sub, subsets);
  auto* c_eq = app.add_subcommand("equilibria", "equilibrium report as CSV on stdout");
  add_common(c_eq, equilibria);

  std::uint64_t check_seed = 1;
  int check_draws = 200;
  auto* c_check = app.add_subcommand("selfcheck", "randomized property checks");
  c_check->add_option("--seed", check_seed, "RNG seed");
  c_check->add_option("--draws", check_draws, "draws per property")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    std::cerr << "simd: " << tbx::kernels::to_string(tbx::kernels::active_level()) << '\n';
    if (*c_sim) {
      const auto cfg = load(simulate, tbx::ScenarioType::SingleRun);
      return emit(tbx::run_single(cfg), cfg, true);
    }
    if (*c_sweep) {
      const auto cfg = load(sweep, tbx::ScenarioType::AlphaSweep);
      return emit(tbx::run_alpha_sweep(cfg), cfg, true);
    }
    if (*c_opt) {
      const auto cfg = load(optimize, tbx::ScenarioType::ControlGrid);
      return emit(tbx::run_control_grid(cfg), cfg, true);
    }
    if (*c_sub) {
      const auto cfg = load(subsets, tbx::ScenarioType::SubsetComparison);
      return emit(tbx::run_subset_comparison(cfg), cfg, true);
    }
    if (*c_eq) {
      const auto cfg = load(equilibria, std::nullopt);
      return emit(tbx::run_equilibria(cfg), cfg, true);
    }
    if (*c_check) {
      const int failed = tbx::tools::run_selfcheck(check_seed, check_draws, std::cout);
      return failed == 0 ? 0 : 1;
    }
  } catch (const tbx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
