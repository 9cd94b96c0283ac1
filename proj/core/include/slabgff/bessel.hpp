// Copyright 2026 The slabgff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

namespace slabgff::bessel {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct QuadratureConfig {
  // Integration stops at r with t*(cosh(r) - 1) >= 40 + |log abs_tolerance|.
  // A positive value overrides that choice.
  double upper_cutoff = 0.0;
  double abs_tolerance = 1e-14;
  int max_subdivisions = 15;
};

// K_0(t) = int_0^inf exp(-t cosh r) dr by adaptive Gauss-Kronrod.
double k0_integral(double t, const QuadratureConfig& cfg = {});

// Ascending series, valid cross-check on (0, 2].
double k0_series(double t);

// Production K_0: series for t <= 2, quadrature above.
double k0(double t);

// K_nu(x) = int_0^inf exp(-x cosh r) cosh(nu r) dr, by quadrature.
double k_nu_integral(double nu, double x, const QuadratureConfig& cfg = {});

// K_{1/2}(x) = sqrt(pi / (2x)) e^{-x}.
double k_half(double x);

// sum_{k=1}^{R} K_0(k/N)
double k0_partial_sum(std::int64_t R, std::int64_t N);

// sum_{j=1}^{k} 4^j K_0(max(2^j, h)/N)
double k0_dyadic_sum(int k, std::int64_t h, std::int64_t N);

// out[n] = e^{-x} I_n(x) for n = 0..nmax. Entries below ~1e-280 are set to 0.
void scaled_bessel_i(double x, int nmax, double* out);
std::vector<double> scaled_bessel_i(double x, int nmax);

// Smallest order n >= 0 whose leading-order estimate of e^{-x} I_n(x) falls
// below exp(log_threshold).
int scaled_bessel_order_cutoff(double x, double log_threshold);

}  // namespace slabgff::bessel
