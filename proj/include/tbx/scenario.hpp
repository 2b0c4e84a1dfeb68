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

#include <filesystem>
#include <string>
#include <vector>

#include "tbx/config.hpp"
#include "tbx/equilibria.hpp"
#include "tbx/table.hpp"

namespace tbx {

struct NamedTable {
  std::string cell;
  ResultTable table;
};

/// Everything one scenario family produces. `plots` tables have the time in
/// their first column; each other column becomes one plot-data file.
struct ScenarioResult {
  std::string name;
  ResultTable summary;
  std::vector<NamedTable> series;
  std::vector<NamedTable> plots;
};

/// Shortest round-trip spelling of v, for file and cell labels.
std::string label_number(double v);

ScenarioResult run_single(const ScenarioConfig& cfg);
ScenarioResult run_alpha_sweep(const ScenarioConfig& cfg);
ScenarioResult run_control_grid(const ScenarioConfig& cfg);
ScenarioResult run_subset_comparison(const ScenarioConfig& cfg);

/// Disease-free point first, then the endemic points. For alpha = 0 a second
/// table compares the exact quadratic with the closed form commonly quoted.
ScenarioResult run_equilibria(const ScenarioConfig& cfg);

/// Dispatches on cfg.scenario.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// <dir>/<name>.csv, <dir>/<name>_<cell>.csv per series and
/// <dir>/plot/<cell>_<column>.dat. Returns every path written, in order.
std::vector<std::filesystem::path> write_result(const ScenarioResult& result,
                                                const std::filesystem::path& dir);

}  // namespace tbx
