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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbx/integrate.hpp"
#include "tbx/model.hpp"
#include "tbx/optctl.hpp"

namespace tbx {

enum class ScenarioType { SingleRun, AlphaSweep, ControlGrid, SubsetComparison };

std::string_view to_string(ScenarioType t);

/// Parse failure; key() names the offending key (empty for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ScenarioConfig {
  Parameters params;
  State initial = State::default_initial();
  TimeGrid grid;  // 30 years at h = 0.01
  CostWeights weights;
  std::array<double, 4> lower_bounds{0.01, 0.01, 0.01, 0.01};
  std::array<std::optional<double>, 4> upper_bounds;  // unset: derived from alpha and r
  SweepOptions solver{0.5, 1e-6, 500};
  ScenarioType scenario = ScenarioType::SingleRun;

  std::vector<double> sweep_alphas{1.0, 0.8, 0.6, 0.4, 0.2, 0.0};
  std::vector<double> grid_costs{10.0, 100.0, 1000.0};
  std::vector<double> grid_alphas{0.3, 0.5, 0.7};
  std::vector<ActiveMask> subset_masks{{true, true, false, false},
                                       {false, false, true, true},
                                       {true, true, true, true}};
  double subset_alpha = 0.7;

  std::string output_dir = "out";

  /// Box for a run with the given parameters (alpha and r drive the defaults).
  ControlBounds bounds_for(const Parameters& par) const;

  /// Throws ConfigError on any invariant violation.
  void validate() const;
};

/// Parses the flat `dotted.key = value` format. Blank lines and `#` comments
/// are ignored; an empty document yields the defaults.
ScenarioConfig parse_config(std::string_view text);

ScenarioConfig load_config(const std::string& path);

/// Every key parse_config accepts, in documentation order.
const std::vector<std::string>& config_keys();

std::string mask_to_string(const ActiveMask& m);

}  // namespace tbx
