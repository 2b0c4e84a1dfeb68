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

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define TBX_HAVE_AVX2_KERNELS 1
#define TBX_AVX2 __attribute__((target("avx2")))
#endif

namespace tbx::kernels {

#ifdef TBX_HAVE_AVX2_KERNELS

namespace {

// Operation order mirrors scan_point() exactly.
TBX_AVX2 __m256d scan_lane(const ScanConstants& c, __m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d beta_c = _mm256_set1_pd(c.beta_c);
  const __m256d sigma = _mm256_set1_pd(c.sigma);
  const __m256d mu = _mm256_set1_pd(c.mu);
  const __m256d k = _mm256_set1_pd(c.k);
  const __m256d r = _mm256_set1_pd(c.r);
  const __m256d p = _mm256_set1_pd(c.p);
  const __m256d alpha = _mm256_set1_pd(c.alpha);
  const __m256d m3 = _mm256_set1_pd(c.mu + c.r + c.d);
  const __m256d m4 = _mm256_set1_pd(c.mu + c.d);
  const __m256d r_alpha_m3 = _mm256_set1_pd(c.r * c.alpha / (c.mu + c.r + c.d));
  const __m256d one_minus_alpha = _mm256_set1_pd(1.0 - c.alpha);

  const __m256d lf = _mm256_mul_pd(beta_c, x);
  const __m256d shield = _mm256_add_pd(_mm256_mul_pd(sigma, lf), mu);
  const __m256d g = _mm256_add_pd(_mm256_mul_pd(p, lf), k);
  const __m256d S = _mm256_div_pd(one, _mm256_add_pd(mu, lf));
  const __m256d back_flow =
      _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(sigma, lf), r_alpha_m3), g), shield);
  // (p*lf + mu) + k, as in the scalar expression
  const __m256d denom = _mm256_sub_pd(
      _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(p, lf), mu), k), back_flow);
  const __m256d E = _mm256_div_pd(_mm256_mul_pd(lf, S), denom);
  const __m256d I_S = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(alpha, g), E), m3);
  const __m256d I_N = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(one_minus_alpha, g), E), m4);
  const __m256d T = _mm256_div_pd(_mm256_mul_pd(r, I_S), shield);
  const __m256d N = _mm256_add_pd(
      _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(S, E), I_S), I_N), T);
  const __m256d ratio = _mm256_div_pd(_mm256_add_pd(I_S, I_N), _mm256_mul_pd(x, N));
  return _mm256_sub_pd(ratio, one);
}

}  // namespace

TBX_AVX2 void scan_residuals_avx2(const ScanConstants& c, std::span<const double> x,
                                  std::span<double> h) {
  if (x.size() != h.size()) throw std::invalid_argument("scan_residuals: size mismatch");
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(h.data() + i, scan_lane(c, _mm256_loadu_pd(x.data() + i)));
  }
  for (; i < n; ++i) h[i] = scan_point(c, x[i]).h;
}

TBX_AVX2 void update_controls_avx2(const ControlConstants& c, const NodeBatch& in,
                                   ControlColumns out) {
  const std::size_t n = in.size();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d beta_c = _mm256_set1_pd(c.beta_c);
  const __m256d sigma = _mm256_set1_pd(c.sigma);
  const __m256d alpha_p = _mm256_set1_pd(c.alpha * c.p);
  const __m256d alpha_k = _mm256_set1_pd(c.alpha * c.k);
  const __m256d r = _mm256_set1_pd(c.r);
  __m256d weight[4], lower[4], upper[4];
  for (int j = 0; j < 4; ++j) {
    weight[j] = _mm256_set1_pd(c.weight[j]);
    lower[j] = _mm256_set1_pd(c.lower[j]);
    upper[j] = _mm256_set1_pd(c.upper[j]);
  }

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d S = _mm256_loadu_pd(in.S.data() + i);
    const __m256d E = _mm256_loadu_pd(in.E.data() + i);
    const __m256d I_S = _mm256_loadu_pd(in.I_S.data() + i);
    const __m256d I_N = _mm256_loadu_pd(in.I_N.data() + i);
    const __m256d T = _mm256_loadu_pd(in.T.data() + i);
    const __m256d l2 = _mm256_loadu_pd(in.l2.data() + i);
    const __m256d l3 = _mm256_loadu_pd(in.l3.data() + i);
    const __m256d l4 = _mm256_loadu_pd(in.l4.data() + i);
    const __m256d l5 = _mm256_loadu_pd(in.l5.data() + i);

    const __m256d N = _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(_mm256_add_pd(S, E), I_S), I_N), T);
    const __m256d F_raw = _mm256_div_pd(_mm256_mul_pd(beta_c, _mm256_add_pd(I_S, I_N)), N);
    const __m256d positive = _mm256_cmp_pd(N, zero, _CMP_GT_OQ);
    const __m256d F = _mm256_blendv_pd(zero, F_raw, positive);

    // alpha*p*F*E + alpha*k*E, left-associated like the scalar code
    const __m256d to_seeking = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(alpha_p, F), E),
                                             _mm256_mul_pd(alpha_k, E));
    const __m256d d43 = _mm256_sub_pd(l4, l3);
    __m256d raw[4];
    raw[0] = _mm256_div_pd(_mm256_mul_pd(d43, to_seeking), weight[0]);
    raw[1] = _mm256_div_pd(_mm256_mul_pd(d43, I_N), weight[1]);
    raw[2] = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_sub_pd(l3, l5), r), I_S), weight[2]);
    raw[3] = _mm256_div_pd(
        _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_sub_pd(l2, l5), sigma), F), T), weight[3]);
    for (int j = 0; j < 4; ++j) {
      // max(lower, v) then min(upper, .) reproduces std::min(std::max(v, lo), hi)
      const __m256d v = _mm256_min_pd(upper[j], _mm256_max_pd(lower[j], raw[j]));
      _mm256_storeu_pd(out[j].data() + i, v);
    }
  }
  for (; i < n; ++i) {
    const auto raw = stationary_controls(c, in.S[i], in.E[i], in.I_S[i], in.I_N[i], in.T[i],
                                         in.l2[i], in.l3[i], in.l4[i], in.l5[i]);
    for (std::size_t j = 0; j < 4; ++j) out[j][i] = project(raw[j], c.lower[j], c.upper[j]);
  }
}

bool avx2_compiled() { return true; }

#else

void scan_residuals_avx2(const ScanConstants&, std::span<const double>, std::span<double>) {
  throw std::logic_error("AVX2 kernels not compiled for this target");
}

void update_controls_avx2(const ControlConstants&, const NodeBatch&, ControlColumns) {
  throw std::logic_error("AVX2 kernels not compiled for this target");
}

bool avx2_compiled() { return false; }

#endif

}  // namespace tbx::kernels
