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

#include <cstdint>
#include <iosfwd>

namespace tbx::tools {

/// Randomized invariant checks (balance identity, positivity, adjoint against
/// finite differences, equilibrium classification against the scan).
/// Returns the number of failed checks.
int run_selfcheck(std::uint64_t seed, int draws, std::ostream& out);

}  // namespace tbx::tools
