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

#include "slabgff/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include "slabgff/errors.hpp"

namespace slabgff::bessel {
namespace {

double cutoff_for(double t, const QuadratureConfig& cfg) {
  if (cfg.upper_cutoff > 0) return cfg.upper_cutoff;
  const double target = 40.0 + std::fabs(std::log(cfg.abs_tolerance));
  return std::acosh(1.0 + target / t);
}

// log(e^{-x} I_n(x)) from the leading Debye term, n >= 1.
double debye_log_scaled(double n, double x) {
  const double s = std::hypot(n, x);
  return s + n * std::log(x / (n + s)) - x - 0.5 * std::log(2 * std::numbers::pi * s);
}

}  // namespace

double k_nu_integral(double nu, double x, const QuadratureConfig& cfg) {
  if (!(x > 0)) throw PreconditionError("k_nu_integral: x must be positive");
  const double top = cutoff_for(x, cfg) + std::fabs(nu);
  // e^{-x} factored out: cosh r - 1 = 2 sinh^2(r/2)
  auto f = [x, nu](double r) {
    const double sh = std::sinh(0.5 * r);
    return std::exp(-2 * x * sh * sh) * std::cosh(nu * r);
  };
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, top, cfg.max_subdivisions, 1e-15, &err);
  const double scale = std::exp(-x);
  if (err * scale > std::max(cfg.abs_tolerance, 1e-13 * v * scale))
    throw NumericError("k_nu_integral: quadrature did not converge",
                       "x=" + std::to_string(x) + " err=" + std::to_string(err * scale));
  return v * scale;
}

double k0_integral(double t, const QuadratureConfig& cfg) {
  if (!(t > 0)) throw PreconditionError("k0_integral: t must be positive");
  return k_nu_integral(0.0, t, cfg);
}

double k0_series(double t) {
  if (!(t > 0) || t > 2) throw PreconditionError("k0_series: t must lie in (0, 2]");
  const double q = 0.25 * t * t;
  double term = 1.0;
  double psi = -kEulerGamma;  // psi(n+1)
  double i0 = 0, s = 0;
  for (int n = 0; n < 200; ++n) {
    if (n > 0) {
      term *= q / (double(n) * n);
      psi += 1.0 / n;
    }
    i0 += term;
    s += term * psi;
    if (n > 0 && term < 1e-16 * i0) break;
  }
  return std::log(2.0 / t) * i0 + s;
}

double k0(double t) { return t <= 2 ? k0_series(t) : k0_integral(t); }

double k_half(double x) {
  if (!(x > 0)) throw PreconditionError("k_half: x must be positive");
  return std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x);
}

double k0_partial_sum(std::int64_t R, std::int64_t N) {
  if (R < 1 || N < 1) throw PreconditionError("k0_partial_sum: R, N >= 1");
  double s = 0;
  for (std::int64_t k = R; k >= 1; --k) s += k0(double(k) / double(N));
  return s;
}

double k0_dyadic_sum(int k, std::int64_t h, std::int64_t N) {
  if (k < 1 || h < 1 || N < 1) throw PreconditionError("k0_dyadic_sum: k, h, N >= 1");
  double s = 0;
  for (int j = 1; j <= k; ++j) {
    const double arg = std::max(std::ldexp(1.0, j), double(h)) / double(N);
    s += std::ldexp(1.0, 2 * j) * k0(arg);
  }
  return s;
}

void scaled_bessel_i(double x, int nmax, double* out) {
  if (x < 0 || nmax < 0) throw PreconditionError("scaled_bessel_i: x >= 0, nmax >= 0");
  std::fill(out, out + nmax + 1, 0.0);
  if (x == 0) {
    out[0] = 1.0;
    return;
  }
  const double i0 = gsl_sf_bessel_I0_scaled(x);
  // Upward recurrence loses at most a factor ~e^{n^2/x}; accept it while n^2 <= 4x.
  if (double(nmax) * nmax <= 4.0 * x) {
    out[0] = i0;
    if (nmax >= 1) out[1] = gsl_sf_bessel_I1_scaled(x);
    for (int n = 1; n < nmax; ++n) out[n + 1] = out[n - 1] - (2.0 * n / x) * out[n];
    return;
  }
  // Miller's backward recurrence from deep in the underflow tail.
  const int start = std::max(nmax + 2, scaled_bessel_order_cutoff(x, -700.0) + 2);
  double up = 0.0, cur = 1e-300;
  if (start <= nmax) out[start] = cur;
  for (int n = start; n >= 1; --n) {
    double down = up + (2.0 * n / x) * cur;
    if (n - 1 <= nmax) out[n - 1] = down;
    if (down > 1e250) {
      for (int k = n - 1; k <= nmax; ++k) out[k] *= 1e-250;
      down *= 1e-250;
      cur *= 1e-250;
    }
    up = cur;
    cur = down;
  }
  const double scale = i0 / out[0];
  for (int k = 0; k <= nmax; ++k) out[k] *= scale;
}

std::vector<double> scaled_bessel_i(double x, int nmax) {
  std::vector<double> v(std::size_t(nmax) + 1);
  scaled_bessel_i(x, nmax, v.data());
  return v;
}

int scaled_bessel_order_cutoff(double x, double log_threshold) {
  if (x <= 0) return 1;
  if (debye_log_scaled(0.0, x) < log_threshold) return 0;
  std::int64_t lo = 0, hi = 1;
  while (debye_log_scaled(double(hi), x) >= log_threshold) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = (lo + hi) / 2;
    (debye_log_scaled(double(mid), x) < log_threshold ? hi : lo) = mid;
  }
  return int(hi);
}

}  // namespace slabgff::bessel
