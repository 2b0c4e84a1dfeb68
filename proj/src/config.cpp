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

#include "tbx/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace tbx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(key, "key '" + key + "': '" + std::string(text) + "' is not a finite number");
  }
  return v;
}

double ranged(const std::string& key, std::string_view text, double lo, double hi,
              bool open_lo = false) {
  const double v = parse_number(key, text);
  if (v < lo || v > hi || (open_lo && v == lo)) {
    std::ostringstream os;
    os << "key '" << key << "': value " << v << " out of range " << (open_lo ? "(" : "[") << lo
       << ", " << hi << "]";
    throw ConfigError(key, os.str());
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = text.find(',');
    items.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return items;
}

std::vector<double> ranged_list(const std::string& key, std::string_view text, double lo, double hi,
                                bool open_lo = false) {
  std::vector<double> out;
  for (std::string_view item : split_list(text)) out.push_back(ranged(key, item, lo, hi, open_lo));
  return out;
}

ActiveMask parse_mask(const std::string& key, std::string_view text) {
  if (text.size() != 4 || text.find_first_not_of("01") != std::string_view::npos) {
    throw ConfigError(key, "key '" + key + "': mask '" + std::string(text) +
                               "' must be four characters of 0/1 (u1..u4)");
  }
  return {text[0] == '1', text[1] == '1', text[2] == '1', text[3] == '1'};
}

struct Pending {
  std::optional<double> h;
  std::optional<double> steps;
};

using Setter = std::function<void(ScenarioConfig&, Pending&, const std::string&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = [] {
    std::vector<std::pair<std::string, Setter>> t;
    auto param = [&](const char* name, double Parameters::*field, double lo, double hi, bool open_lo) {
      t.emplace_back(std::string("params.") + name,
                     [=](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
                       c.params.*field = ranged(key, v, lo, hi, open_lo);
                     });
    };
    param("Lambda", &Parameters::Lambda, 0.0, kInf, false);
    param("beta_c", &Parameters::beta_c, 0.0, kInf, false);
    param("sigma", &Parameters::sigma, 0.0, 1.0, false);
    param("mu", &Parameters::mu, 0.0, kInf, true);
    param("k", &Parameters::k, 0.0, kInf, false);
    param("d", &Parameters::d, 0.0, kInf, false);
    param("r", &Parameters::r, 0.0, kInf, false);
    param("p", &Parameters::p, 0.0, kInf, false);
    param("alpha", &Parameters::alpha, 0.0, 1.0, false);

    auto init = [&](const char* name, double State::*field) {
      t.emplace_back(std::string("initial.") + name,
                     [=](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
                       c.initial.*field = ranged(key, v, 0.0, kInf);
                     });
    };
    init("S", &State::S);
    init("E", &State::E);
    init("I_S", &State::I_S);
    init("I_N", &State::I_N);
    init("T", &State::T);

    t.emplace_back("grid.t0", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.grid.t0 = parse_number(key, v);
    });
    t.emplace_back("grid.tf", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.grid.tf = parse_number(key, v);
    });
    t.emplace_back("grid.h", [](ScenarioConfig&, Pending& p, const std::string& key, std::string_view v) {
      p.h = ranged(key, v, 0.0, kInf, true);
    });
    t.emplace_back("grid.steps", [](ScenarioConfig&, Pending& p, const std::string& key, std::string_view v) {
      const double s = ranged(key, v, 1.0, 1e9);
      if (s != std::floor(s)) throw ConfigError(key, "key '" + key + "': steps must be an integer");
      p.steps = s;
    });

    t.emplace_back("weights.C", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.weights.C.fill(ranged(key, v, 0.0, kInf, true));
    });
    for (int i = 0; i < 4; ++i) {
      t.emplace_back("weights.C" + std::to_string(i + 1),
                     [i](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
                       c.weights.C[i] = ranged(key, v, 0.0, kInf, true);
                     });
    }
    t.emplace_back("bounds.lower", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.lower_bounds.fill(ranged(key, v, 0.0, 1.0));
    });
    for (int i = 0; i < 4; ++i) {
      t.emplace_back("bounds.lower" + std::to_string(i + 1),
                     [i](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
                       c.lower_bounds[i] = ranged(key, v, 0.0, 1.0);
                     });
    }
    for (int i = 0; i < 4; ++i) {
      t.emplace_back("bounds.upper" + std::to_string(i + 1),
                     [i](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
                       c.upper_bounds[i] = ranged(key, v, 0.0, 1.0);
                     });
    }

    t.emplace_back("solver.tolerance", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.solver.tolerance = ranged(key, v, 0.0, 1.0, true);
    });
    t.emplace_back("solver.relaxation", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.solver.relaxation = ranged(key, v, 0.0, 1.0, true);
    });
    t.emplace_back("solver.max_iterations", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      const double n = ranged(key, v, 1.0, 1e7);
      if (n != std::floor(n)) throw ConfigError(key, "key '" + key + "': must be an integer");
      c.solver.max_iterations = static_cast<std::size_t>(n);
    });

    t.emplace_back("scenario.type", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      static const std::map<std::string, ScenarioType, std::less<>> names{
          {"single_run", ScenarioType::SingleRun},
          {"alpha_sweep", ScenarioType::AlphaSweep},
          {"control_grid", ScenarioType::ControlGrid},
          {"subset_comparison", ScenarioType::SubsetComparison}};
      const auto it = names.find(v);
      if (it == names.end()) {
        throw ConfigError(key, "key '" + key + "': unknown scenario '" + std::string(v) +
                                   "' (expected single_run, alpha_sweep, control_grid or subset_comparison)");
      }
      c.scenario = it->second;
    });
    t.emplace_back("sweep.alphas", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.sweep_alphas = ranged_list(key, v, 0.0, 1.0);
    });
    t.emplace_back("control_grid.costs", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.grid_costs = ranged_list(key, v, 0.0, kInf, true);
    });
    t.emplace_back("control_grid.alphas", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.grid_alphas = ranged_list(key, v, 0.0, 1.0);
    });
    t.emplace_back("subsets.masks", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.subset_masks.clear();
      for (std::string_view item : split_list(v)) c.subset_masks.push_back(parse_mask(key, item));
    });
    t.emplace_back("subsets.alpha", [](ScenarioConfig& c, Pending&, const std::string& key, std::string_view v) {
      c.subset_alpha = ranged(key, v, 0.0, 1.0);
    });
    t.emplace_back("output.dir", [](ScenarioConfig& c, Pending&, const std::string&, std::string_view v) {
      c.output_dir = std::string(v);
    });
    return t;
  }();
  return table;
}

}  // namespace

std::string_view to_string(ScenarioType t) {
  switch (t) {
    case ScenarioType::SingleRun: return "single_run";
    case ScenarioType::AlphaSweep: return "alpha_sweep";
    case ScenarioType::ControlGrid: return "control_grid";
    case ScenarioType::SubsetComparison: return "subset_comparison";
  }
  return "unknown";
}

std::string mask_to_string(const ActiveMask& m) {
  std::string s;
  for (bool b : m) s += b ? '1' : '0';
  return s;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

ControlBounds ScenarioConfig::bounds_for(const Parameters& par) const {
  ControlBounds b = ControlBounds::defaults_for(par, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    if (upper_bounds[i]) {
      b.upper[i] = *upper_bounds[i];
      b.lower[i] = lower_bounds[i];
    } else {
      b.lower[i] = std::min(lower_bounds[i], b.upper[i]);
    }
  }
  return b;
}

void ScenarioConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (upper_bounds[i] && *upper_bounds[i] < lower_bounds[i]) {
      throw ConfigError("bounds.upper" + std::to_string(i + 1), "upper bound below lower bound for u" +
                                                                    std::to_string(i + 1));
    }
  }
  auto check_alpha_bounds = [&](double alpha, const std::string& key) {
    Parameters par = params;
    par.alpha = alpha;
    try {
      bounds_for(par).validate(par);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
  };
  if (sweep_alphas.empty()) throw ConfigError("sweep.alphas", "sweep.alphas must not be empty");
  if (grid_costs.empty()) throw ConfigError("control_grid.costs", "control_grid.costs must not be empty");
  if (grid_alphas.empty()) throw ConfigError("control_grid.alphas", "control_grid.alphas must not be empty");
  if (subset_masks.empty()) throw ConfigError("subsets.masks", "subsets.masks must not be empty");
  for (double a : grid_alphas) check_alpha_bounds(a, "control_grid.alphas");
  check_alpha_bounds(subset_alpha, "subsets.alpha");
  if (output_dir.empty()) throw ConfigError("output.dir", "output.dir must not be empty");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  Pending pending;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": missing value for key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    it->second(cfg, pending, key, value);
  }

  if (pending.steps) {
    cfg.grid.steps = static_cast<std::size_t>(*pending.steps);
  } else {
    const double h = pending.h.value_or(0.01);
    const double n = std::round((cfg.grid.tf - cfg.grid.t0) / h);
    if (!(n >= 1.0)) throw ConfigError("grid.h", "grid.h larger than the horizon");
    cfg.grid.steps = static_cast<std::size_t>(n);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace tbx
