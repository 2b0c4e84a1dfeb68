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

#include "tbx/scenario.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tbx/integrate.hpp"
#include "tbx/model.hpp"
#include "tbx/optctl.hpp"

namespace tbx {

namespace {

const std::vector<std::string> kCompartments{"S", "E", "I_S", "I_N", "T"};

std::vector<std::string> endpoint_columns() {
  std::vector<std::string> c;
  for (const auto& n : kCompartments) c.push_back(n + "_tf");
  c.push_back("N_tf");
  c.push_back("total_infected_tf");
  return c;
}

void append_endpoints(std::vector<Cell>& row, const State& x) {
  for (double v : x.to_vec()) row.emplace_back(v);
  row.emplace_back(x.total());
  row.emplace_back(x.E + x.I_S + x.I_N);
}

double total_infected(const State& x) { return x.E + x.I_S + x.I_N; }

ResultTable state_series(const StateTrajectory& states, const ControlTrajectory* controls) {
  std::vector<std::string> cols{"t"};
  for (const auto& n : kCompartments) cols.push_back(n);
  cols.push_back("N");
  cols.push_back("total_infected");
  if (controls) {
    for (int i = 1; i <= 4; ++i) cols.push_back("u" + std::to_string(i));
  }
  ResultTable t(std::move(cols));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const State& x = states[i];
    std::vector<Cell> row{states.grid.time(i)};
    for (double v : x.to_vec()) row.emplace_back(v);
    row.emplace_back(x.total());
    row.emplace_back(total_infected(x));
    if (controls) {
      for (std::size_t k = 0; k < 4; ++k) row.emplace_back((*controls)[i][k]);
    }
    t.add_row(std::move(row));
  }
  return t;
}

/// Keeps the time column plus the named ones.
ResultTable select(const ResultTable& src, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx{0};
  std::vector<std::string> cols{src.columns()[0]};
  for (const auto& n : names) {
    idx.push_back(src.column_index(n));
    cols.push_back(n);
  }
  ResultTable out(std::move(cols));
  for (const auto& row : src.rows()) {
    std::vector<Cell> r;
    for (std::size_t j : idx) r.push_back(row[j]);
    out.add_row(std::move(r));
  }
  return out;
}

double time_average(const ControlTrajectory& u, std::size_t k) {
  const std::size_t n = u.size();
  if (n < 2) return n ? u[0][k] : 0.0;
  double s = 0.5 * (u[0][k] + u[n - 1][k]);
  for (std::size_t i = 1; i + 1 < n; ++i) s += u[i][k];
  return s / static_cast<double>(n - 1);
}

template <class F>
auto annotate(const std::string& cell, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const IntegrationError& e) {
    throw IntegrationError(cell + ": " + e.what(), e.time());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(cell + ": " + e.what());
  }
}

void require(const ScenarioConfig& cfg, ScenarioType t) {
  if (cfg.scenario != t) {
    throw std::invalid_argument("config scenario is " + std::string(to_string(cfg.scenario)) +
                                ", expected " + std::string(to_string(t)));
  }
}

ControlTrajectory zero_controls(const TimeGrid& grid) { return constant_controls(grid, ControlVector{}); }

}  // namespace

std::string label_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("label formatting failed");
  return std::string(buf, ptr);
}

ScenarioResult run_single(const ScenarioConfig& cfg) {
  ScenarioResult res;
  res.name = "simulate";
  const ForwardResult fwd = annotate("simulate", [&] {
    return integrate_forward(cfg.params, cfg.initial, cfg.grid);
  });
  std::vector<std::string> cols{"alpha", "R0"};
  for (auto& c : endpoint_columns()) cols.push_back(c);
  cols.push_back("min_component");
  res.summary = ResultTable(cols);
  std::vector<Cell> row{cfg.params.alpha, basic_reproduction_number(cfg.params)};
  append_endpoints(row, fwd.trajectory.back());
  row.emplace_back(fwd.min_component);
  res.summary.add_row(std::move(row));

  ResultTable series = state_series(fwd.trajectory, nullptr);
  res.plots.push_back({"single", select(series, {"S", "E", "I_S", "I_N", "T", "total_infected"})});
  res.series.push_back({"single", std::move(series)});
  return res;
}

ScenarioResult run_alpha_sweep(const ScenarioConfig& cfg) {
  require(cfg, ScenarioType::AlphaSweep);
  ScenarioResult res;
  res.name = "alpha_sweep";
  res.summary = ResultTable({"alpha", "R0", "E_tf", "I_S_tf", "I_N_tf", "T_tf", "S_tf", "N_tf"});
  for (double alpha : cfg.sweep_alphas) {
    const std::string cell = "alpha_" + label_number(alpha);
    Parameters par = cfg.params;
    par.alpha = alpha;
    const ForwardResult fwd = annotate(cell, [&] { return integrate_forward(par, cfg.initial, cfg.grid); });
    const State& end = fwd.trajectory.back();
    res.summary.add_row({alpha, basic_reproduction_number(par), end.E, end.I_S, end.I_N, end.T, end.S,
                         end.total()});
    ResultTable series = state_series(fwd.trajectory, nullptr);
    res.plots.push_back({cell, select(series, {"total_infected"})});
    res.series.push_back({cell, std::move(series)});
  }
  return res;
}

ScenarioResult run_control_grid(const ScenarioConfig& cfg) {
  require(cfg, ScenarioType::ControlGrid);
  ScenarioResult res;
  res.name = "control_grid";
  std::vector<std::string> cols{"cost", "alpha"};
  for (auto& c : endpoint_columns()) cols.push_back(c);
  for (const char* c : {"objective", "iterations", "converged", "max_interior_dHdu", "mean_u1",
                        "mean_u2", "mean_u3", "mean_u4"}) {
    cols.emplace_back(c);
  }
  res.summary = ResultTable(cols);

  for (double cost : cfg.grid_costs) {
    for (double alpha : cfg.grid_alphas) {
      const std::string cell = "C_" + label_number(cost) + "_alpha_" + label_number(alpha);
      Parameters par = cfg.params;
      par.alpha = alpha;
      const CostWeights w = CostWeights::uniform(cost);
      const ControlBounds b = cfg.bounds_for(par);
      const OptimalSolution sol = annotate(cell, [&] {
        return forward_backward_sweep(par, w, b, cfg.grid, cfg.initial, kAllControls, cfg.solver);
      });
      const StationarityReport st = stationarity_report(sol, w, b, par);

      std::vector<Cell> row{cost, alpha};
      append_endpoints(row, sol.states.back());
      row.emplace_back(sol.objective);
      row.emplace_back(static_cast<std::int64_t>(sol.iterations));
      row.emplace_back(static_cast<std::int64_t>(sol.converged ? 1 : 0));
      row.emplace_back(st.max_interior);
      for (std::size_t k = 0; k < 4; ++k) row.emplace_back(time_average(sol.controls, k));
      res.summary.add_row(std::move(row));

      ResultTable series = state_series(sol.states, &sol.controls);
      res.plots.push_back({cell, select(series, {"u1", "u2", "u3", "u4"})});
      res.series.push_back({cell, std::move(series)});
    }
  }
  return res;
}

ScenarioResult run_subset_comparison(const ScenarioConfig& cfg) {
  require(cfg, ScenarioType::SubsetComparison);
  ScenarioResult res;
  res.name = "subset_comparison";
  std::vector<std::string> cols{"mask"};
  for (auto& c : endpoint_columns()) cols.push_back(c);
  for (const char* c : {"objective", "iterations", "converged"}) cols.emplace_back(c);
  res.summary = ResultTable(cols);

  Parameters par = cfg.params;
  par.alpha = cfg.subset_alpha;
  const ControlBounds b = cfg.bounds_for(par);

  auto record = [&](const std::string& cell, const std::string& mask, const StateTrajectory& states,
                    const ControlTrajectory& controls, double J, std::size_t iterations, bool converged) {
    std::vector<Cell> row{mask};
    append_endpoints(row, states.back());
    row.emplace_back(J);
    row.emplace_back(static_cast<std::int64_t>(iterations));
    row.emplace_back(static_cast<std::int64_t>(converged ? 1 : 0));
    res.summary.add_row(std::move(row));
    ResultTable series = state_series(states, &controls);
    res.plots.push_back({cell, select(series, {"total_infected", "N", "u1", "u2", "u3", "u4"})});
    res.series.push_back({cell, std::move(series)});
  };

  for (const ActiveMask& mask : cfg.subset_masks) {
    const std::string m = mask_to_string(mask);
    const std::string cell = "mask_" + m;
    const OptimalSolution sol = annotate(cell, [&] {
      return forward_backward_sweep(par, cfg.weights, b, cfg.grid, cfg.initial, mask, cfg.solver);
    });
    record(cell, m, sol.states, sol.controls, sol.objective, sol.iterations, sol.converged);
  }

  const ControlTrajectory none = zero_controls(cfg.grid);
  const ForwardResult base = annotate("uncontrolled", [&] {
    return integrate_forward(par, cfg.initial, cfg.grid);
  });
  record("uncontrolled", "0000", base.trajectory, none, objective(base.trajectory, none, cfg.weights), 0,
         true);
  return res;
}

ScenarioResult run_equilibria(const ScenarioConfig& cfg) {
  const Parameters& par = cfg.params;
  const EquilibriumReport rep = classify_endemic(par);
  ScenarioResult res;
  res.name = "equilibria";
  res.summary = ResultTable({"kind", "classification", "alpha", "R0", "Rp", "p0", "oracle_count",
                             "oracle_agrees", "x", "S", "E", "I_S", "I_N", "T", "N", "residual"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double p0 = rep.p0 ? *rep.p0 : nan;
  auto add = [&](const std::string& kind, double x, const State& s) {
    res.summary.add_row({kind, std::string(to_string(rep.classification)), par.alpha, rep.r0, rep.Rp, p0,
                         static_cast<std::int64_t>(rep.oracle_count),
                         static_cast<std::int64_t>(rep.oracle_agrees ? 1 : 0), x, s.S, s.E, s.I_S, s.I_N, s.T,
                         s.total(), steady_state_residual(s, par)});
  };
  add("disease_free", 0.0, disease_free_equilibrium(par));
  for (std::size_t i = 0; i < rep.points.size(); ++i) add("endemic", rep.fractions[i], rep.points[i]);

  if (par.alpha == 0.0 && par.p > 0.0 && par.beta_c > 0.0) {
    const ClosedFormAudit a = audit_closed_forms(par);
    ResultTable audit({"quantity", "quoted", "exact"});
    audit.add_row({std::string("P"), a.quoted.P, a.exact.P});
    audit.add_row({std::string("Q"), a.quoted.Q, a.exact.Q});
    audit.add_row({std::string("Rp"), a.quoted_Rp, a.exact_Rp});
    audit.add_row({std::string("p0"), a.quoted_p0, a.exact_p0.value_or(nan)});
    audit.add_row({std::string("root"), a.quoted_root.value_or(nan), a.exact_root.value_or(nan)});
    audit.add_row({std::string("root_residual"), a.quoted_root_residual, a.exact_root_residual});
    res.series.push_back({"closed_form_audit", std::move(audit)});
  }
  return res;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  switch (cfg.scenario) {
    case ScenarioType::SingleRun: return run_single(cfg);
    case ScenarioType::AlphaSweep: return run_alpha_sweep(cfg);
    case ScenarioType::ControlGrid: return run_control_grid(cfg);
    case ScenarioType::SubsetComparison: return run_subset_comparison(cfg);
  }
  throw std::invalid_argument("unknown scenario");
}

std::vector<std::filesystem::path> write_result(const ScenarioResult& result,
                                                const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  out.push_back(dir / (result.name + ".csv"));
  emit_csv(result.summary, out.back());
  for (const auto& s : result.series) {
    out.push_back(dir / (result.name + "_" + s.cell + ".csv"));
    emit_csv(s.table, out.back());
  }
  for (const auto& p : result.plots) {
    for (auto& path : emit_plot_data(p.table, dir / "plot", p.cell)) out.push_back(std::move(path));
  }
  return out;
}

}  // namespace tbx
