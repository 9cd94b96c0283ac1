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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/fitted.hpp"
#include "slabgff/greens.hpp"

namespace {

using namespace slabgff::greens;
using slabgff::slab::Region;
using slabgff::slab::SlabParams;
using slabgff::slab::SlabPoint;

constexpr double kPi = std::numbers::pi;
constexpr double kWatson = 1.516386059151978;

// Jacobi iteration for (lambda - A/6) u = delta_0 on [-B, B]^2 x Z/h, zero
// outside. For N = 4 the truncation error at B = 48 is below e^{-25}.
struct BoxOracle {
  std::int64_t B;
  int h;
  std::vector<double> u;
  BoxOracle(std::int64_t N, int h_, std::int64_t B_) : B(B_), h(h_) {
    const std::int64_t w = 2 * B + 1;
    const double lam = 1.0 + 1.0 / double(N * N);
    auto idx = [&](std::int64_t a, std::int64_t b, int z) { return std::size_t(((a + B) * w + (b + B)) * h + z); };
    u.assign(std::size_t(w * w * h), 0.0);
    std::vector<double> next(u.size());
    for (int it = 0; it < 4000; ++it) {
      double delta = 0;
      for (std::int64_t a = -B; a <= B; ++a)
        for (std::int64_t b = -B; b <= B; ++b)
          for (int z = 0; z < h; ++z) {
            double s = (a == 0 && b == 0 && z == 0) ? 1.0 : 0.0;
            auto add = [&](std::int64_t aa, std::int64_t bb, int zz) {
              if (std::abs(aa) <= B && std::abs(bb) <= B) s += u[idx(aa, bb, zz)] / 6;
            };
            add(a + 1, b, z);
            add(a - 1, b, z);
            add(a, b + 1, z);
            add(a, b - 1, z);
            add(a, b, (z + 1) % h);
            add(a, b, (z + h - 1) % h);
            const double v = s / lam;
            delta = std::max(delta, std::fabs(v - u[idx(a, b, z)]));
            next[idx(a, b, z)] = v;
          }
      u.swap(next);
      if (delta < 1e-15) break;
    }
  }
  double at(std::int64_t a, std::int64_t b, int z) const {
    const std::int64_t w = 2 * B + 1;
    return u[std::size_t(((a + B) * w + (b + B)) * h + z)];
  }
};

TEST(Greens, WatsonConstant) {
  EXPECT_NEAR(g_z3_origin_closed_form(), kWatson, 1e-14);
  EXPECT_NEAR(g_z3_origin_time_integral(), kWatson, 1e-12);
  EXPECT_NEAR(g_z3(0, 0, 0), kWatson, 1e-12);
}

TEST(Greens, MatchesIndependentJacobiSolve) {
  for (int h : {1, 2, 3}) {
    const std::int64_t N = 4;
    const BoxOracle o(N, h, 48);
    const GreenEvaluator ev(SlabParams::make(N, h));
    for (std::int64_t a : {0, 1, 3, 7})
      for (std::int64_t b : {0, 2})
        for (int z = 0; z < h; ++z) {
          const double ref = o.at(a, b, z);
          EXPECT_NEAR(ev.g({a, b, z}) / ref, 1.0, 1e-9) << h << " " << a << " " << b << " " << z;
        }
  }
}

TEST(Greens, DecompositionAddsUp) {
  const GreenEvaluator ev(SlabParams::make(32, 4));
  for (const SlabPoint x : {SlabPoint{0, 0, 0}, SlabPoint{5, 2, 1}, SlabPoint{0, 9, 2}}) {
    const auto pr = ev.parts(x);
    EXPECT_GT(pr.g2, 0);
    EXPECT_GT(pr.g3, 0);
    EXPECT_DOUBLE_EQ(ev.g(x), pr.g2 + pr.g3);
    EXPECT_DOUBLE_EQ(g_slab(x, ev), pr.g2 + pr.g3);
  }
}

TEST(Greens, FourierPathAgrees) {
  const auto p = SlabParams::make(8, 3);
  const GreenEvaluator ev(p);
  for (const SlabPoint x : {SlabPoint{0, 0, 0}, SlabPoint{2, 1, 1}, SlabPoint{4, 0, 2}}) {
    EXPECT_NEAR(g3_fourier(x, p, 160) / ev.g3(x), 1.0, 1e-10);
    EXPECT_NEAR(g_slab_fourier(x, p, 160) / ev.g(x), 1.0, 1e-10);
  }
}

TEST(Greens, MatchesDirichletOracle) {
  const auto p = SlabParams::make(32, 4);
  const GreenEvaluator ev(p);
  const auto o = solve_oracle(p, 128, 1e-12);
  for (const SlabPoint x : {SlabPoint{0, 0, 0}, SlabPoint{3, 4, 1}, SlabPoint{10, 0, 2}, SlabPoint{9, 12, 3}})
    EXPECT_NEAR(o.at(x) / ev.g(x), 1.0, 1e-4);
}

TEST(Greens, Symmetries) {
  const GreenEvaluator ev(SlabParams::make(64, 5));
  const SlabPoint x{3, -2, 1};
  const double v = ev.g(x);
  EXPECT_NEAR(ev.g3({-3, 2, 4}), ev.g3(x), 1e-13 * v);
  for (const SlabPoint s : {SlabPoint{-3, -2, 1}, SlabPoint{2, 3, 1}, SlabPoint{-2, 3, 1}})
    EXPECT_NEAR(ev.g2(s), ev.g2(x), 1e-13 * v);
  EXPECT_NEAR(ev.g({1, 2, 0}, {4, 0, 1}), ev.g({4, 0, 1}, {1, 2, 0}), 1e-13 * v);
}

TEST(Greens, ThreeDimensionalLimit) {
  // The zero-winding part tends to the Z^3 value as the mass vanishes.
  const GreenEvaluator ev(SlabParams::make(1 << 20, 1 << 20));
  EXPECT_NEAR(ev.g3({}), kWatson, 1e-5);
}

TEST(Greens, ThreeDimensionalDecay) {
  const GreenEvaluator ev(SlabParams::make(1000, 1000));
  const double r = 20;
  const double ratio = ev.g3({20, 0, 0}) / (3 / (2 * kPi * r) * std::exp(-std::sqrt(6.0) * r / 1000));
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

TEST(Greens, WindingPartThinSlab) {
  const GreenEvaluator ev(SlabParams::make(256, 1));
  const double ratio = ev.g2({}) / (3 / kPi * slabgff::bessel::k0(std::sqrt(6.0) / 256));
  EXPECT_GE(ratio, 0.9);
  EXPECT_LE(ratio, 1.1);
}

TEST(Greens, WindingPartCubeIsSubleading) {
  double worst = 0;
  for (std::int64_t N : {16, 32, 64, 128}) {
    const GreenEvaluator ev(SlabParams::make(N, int(N)));
    worst = std::max(worst, ev.g2({}) * double(N));
  }
  EXPECT_LT(worst, 10.0);
}

TEST(Greens, KilledSingleSite) {
  const auto p = SlabParams::make(16, 3);
  const SlabPoint x{2, 1, 1};
  const auto kd = KilledDomain::explicit_domain(Region::make({x}, p));
  EXPECT_NEAR(killed_green(x, x, kd), 1 / p.vertex_weight(), 1e-14);
}

TEST(Greens, KilledBelowFree) {
  const auto p = SlabParams::make(64, 4);
  const GreenEvaluator ev(p);
  const auto kd = KilledDomain::complement_of_ball({}, 12, p);
  for (const SlabPoint x : {SlabPoint{0, 0, 0}, SlabPoint{3, 1, 2}, SlabPoint{8, 0, 1}}) {
    const double k = killed_green({}, x, kd);
    EXPECT_GT(k, 0);
    EXPECT_LT(k, ev.g(x));
  }
  const auto wider = KilledDomain::complement_of_ball({}, 24, p);
  EXPECT_LT(killed_green({}, {}, kd), killed_green({}, {}, wider));
  EXPECT_THROW(killed_green({}, {40, 0, 0}, kd), slabgff::PreconditionError);
}

TEST(Greens, KilledSymmetric) {
  const auto p = SlabParams::make(32, 3);
  const auto kd = KilledDomain::complement_of_ball({}, 9, p);
  const SlabPoint a{2, 1, 0}, b{-3, 4, 2};
  EXPECT_NEAR(killed_green(a, b, kd), killed_green(b, a, kd), 1e-10);
}

TEST(Greens, HarnackBounded) {
  const auto rep = harnack(16, 0.25, SlabParams::make(64, 4));
  EXPECT_GE(rep.ratio, 1.0);
  EXPECT_LE(rep.ratio, 20.0);
  EXPECT_LE(rep.max_harmonic_residual, 1e-8);
  EXPECT_THROW(harnack_ratio(2, 0.25, SlabParams::make(64, 4)), slabgff::PreconditionError);
}

TEST(Greens, HeatKernelBessel) {
  // One coordinate of the rate-r walk in d dimensions jumps at rate r/d. The
  // trapezoid sum cancels down to absolute roundoff, not relative.
  for (double t : {0.5, 3.0, 20.0})
    for (std::int64_t y : {0, 2, 7}) {
      const double x = t / 3;
      const double i0 = std::exp(-x) * std::cyl_bessel_i(0.0, x);
      const double ref = std::exp(-x) * std::cyl_bessel_i(double(y), x) * i0 * i0;
      EXPECT_NEAR(heat_kernel({y, 0, 0}, t, 1.0), ref, 1e-15 + 1e-12 * ref) << t << " " << y;
    }
  double total = 0;
  for (std::int64_t y = -60; y <= 60; ++y) total += heat_kernel({y}, 10.0, 1.0);
  EXPECT_NEAR(total, 1.0, 1e-13);
}

TEST(Greens, LocalLimitError) {
  const double base = lclt_error({8, 0, 0}, 0, 3, 1.0);
  EXPECT_GT(base, 0);
  EXPECT_LE(base * std::pow(8.0, 3), 10.0);
  EXPECT_LT(lclt_error({8, 0, 0}, 4, 3, 1.0), base);
  EXPECT_NEAR(gaussian_kernel({0, 0, 0}, 1.0, 1.0), std::pow(3 / (2 * kPi), 1.5), 1e-14);
}

TEST(Greens, VariancePredictionBranches) {
  const auto thin = variance_prediction(SlabParams::make(std::int64_t(1) << 40, 1));
  EXPECT_NEAR(thin.log_branch, 3 / kPi * 40 * std::log(2.0), 1e-9);
  EXPECT_EQ(thin.value, thin.log_branch);
  const auto cube = variance_prediction(SlabParams::make(4096, 4096));
  EXPECT_NEAR(cube.bulk_branch, kWatson + 3 / kPi * std::log(4096.0) / 4096, 1e-12);
  EXPECT_EQ(cube.value, cube.bulk_branch);
  EXPECT_NEAR(cube.value, 1.5164, 3e-3);
}

TEST(Greens, LimitSeries) {
  for (double c : {0.1, 0.5, 1.0})
    EXPECT_NEAR(k_limit_series(c, 0, 0), -std::log(1 - std::exp(-std::sqrt(6.0) * c)), 1e-14);
  EXPECT_NEAR(k_limit_series(1, 0, 0), 0.090294173650048, 1e-14);
  EXPECT_NEAR(k_limit_series(0.7, 0.3, 0.2), k_limit_series(0.7, 0.3, -0.2), 1e-15);
}

TEST(Greens, SandwichBand) {
  const auto& c = slabgff::fitted::Constants::defaults();
  const double lo = c.get("sandwich_c"), hi = c.get("sandwich_C");
  for (int h : {2, 8}) {
    const auto p = SlabParams::make(32, h);
    const GreenEvaluator ev(p);
    for (std::int64_t d : {0, 3, 17, 60}) {
      const SlabPoint x{d, 1, 0};
      const double q = ev.g(x) / sandwich_profile(x, p);
      EXPECT_GE(q, lo);
      EXPECT_LE(q, hi);
    }
  }
}

}  // namespace
