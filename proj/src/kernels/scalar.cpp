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

#include <stdexcept>

#include "tbx/kernels/kernels.hpp"

namespace tbx::kernels {

void scan_residuals_scalar(const ScanConstants& c, std::span<const double> x, std::span<double> h) {
  if (x.size() != h.size()) throw std::invalid_argument("scan_residuals: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = scan_point(c, x[i]).h;
}

void update_controls_scalar(const ControlConstants& c, const NodeBatch& in, ControlColumns out) {
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = stationary_controls(c, in.S[i], in.E[i], in.I_S[i], in.I_N[i], in.T[i],
                                         in.l2[i], in.l3[i], in.l4[i], in.l5[i]);
    for (std::size_t j = 0; j < 4; ++j) out[j][i] = project(raw[j], c.lower[j], c.upper[j]);
  }
}

}  // namespace tbx::kernels
