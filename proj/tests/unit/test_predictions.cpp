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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "slabgff/bessel.hpp"
#include "slabgff/capacity.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/predictions.hpp"

namespace {

using namespace slabgff::predictions;
constexpr double kPi = std::numbers::pi;

const slabgff::fitted::Constants& toy() {
  static const auto c = slabgff::fitted::Constants::parse(
      R"({"constants": {"onearm_c": {"value": 0.2}, "onearm_C": {"value": 0.8},
                        "killed_cap_c": 0.5, "killed_cap_C": 3}})");
  return c;
}

// (1/(2 pi sqrt g)) int_x^inf dt / (t sqrt(t - 1/g)), Simpson after t = x + w^2/(1-w)^2.
double tail_quadrature(double g, double x) {
  const int n = 200000;
  auto f = [&](double w) {
    if (w >= 1) return 2.0;  // limit 2 / w^2
    const double u = w / (1 - w);
    const double t = x + u * u;
    const double dt = 2 * u / ((1 - w) * (1 - w));
    return dt / (t * std::sqrt(t - 1 / g));
  };
  double s = f(0) + f(1);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(double(i) / n);
  return s / (3.0 * n) / (2 * kPi * std::sqrt(g));
}

TEST(Predictions, FInfinity) {
  EXPECT_NEAR(f_infty(2), 0.25, 1e-15);
  EXPECT_NEAR(f_infty(1 + 1e-12), 0.5, 1e-6);
  EXPECT_LE(std::fabs(std::sqrt(1e4) * f_infty(1e4) * kPi - 1), 0.01);
  EXPECT_THROW(f_infty(1.0), slabgff::PreconditionError);
}

TEST(Predictions, ArctanTail) {
  EXPECT_NEAR(arctan_tail(2.0, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(arctan_tail(1.0, 5.0), tail_quadrature(1.0, 5.0), 1e-10);
  EXPECT_NEAR(arctan_tail(0.7, 3.0), tail_quadrature(0.7, 3.0), 1e-10);
  EXPECT_GT(arctan_tail(1.0, 2.0), arctan_tail(1.0, 2.5));
  EXPECT_NEAR(arctan_tail(1.0, 1 + 1e-14), 0.5, 1e-6);
}

TEST(Predictions, SStar) {
  const std::int64_t N = 1 << 20;
  for (double s : {2.0, 3.0, 5.0}) {
    auto in = PredictionInput::make(N, 1, r_c(s, double(N)), 3 / kPi * std::log(double(N)));
    EXPECT_NEAR(s_star(in), s, 1e-12);
    in.g0 *= 2;
    EXPECT_NEAR(s_star(in), 2 * s, 1e-12);
  }
  const auto edge = PredictionInput::make(4096, 8, 64, 3 / kPi * std::log(4096.0 / 64) / 8);
  EXPECT_NEAR(s_star(edge), 1.0, 1e-12);
}

TEST(Predictions, CriticalRadius) {
  EXPECT_NEAR(r_c(2, 1e6), 1e3, 1e-9);
  EXPECT_NEAR(r_c(1e12, 1e6), 1e6, 1e-3);
  EXPECT_NEAR(arm_limit_constant(), std::sqrt(3 / std::pow(kPi, 3)), 1e-15);
}

TEST(Predictions, ArctanBand) {
  const auto in = PredictionInput::make(1 << 30, 1, 64, 5 * 3 / kPi * std::log(double(1 << 30) / 64));
  ASSERT_NEAR(s_star(in), 5.0, 1e-12);
  ASSERT_TRUE(flatness_holds(in));
  const auto b = theta_band(in, BandKind::kThm41);
  EXPECT_NEAR(b.lo, std::atan(1 / std::sqrt(4.5)) / kPi, 1e-14);
  EXPECT_NEAR(b.hi, std::atan(1 / std::sqrt(3.5)) / kPi, 1e-14);
  auto steep = PredictionInput::make(64, 8, 16, 1.0);
  EXPECT_FALSE(flatness_holds(steep));
  EXPECT_THROW(theta_band(steep, BandKind::kThm41), slabgff::PreconditionError);
}

TEST(Predictions, ConstantBand) {
  auto in = PredictionInput::make(1024, 4, 1024, 2.0);
  in.constants = &toy();
  const auto b = theta_band(in, BandKind::kThm11);
  const double scale = 1 / std::sqrt(2.0 * 4 / slabgff::bessel::k0(1.0));
  EXPECT_NEAR(b.lo, 0.2 * scale, 1e-14);
  EXPECT_NEAR(b.hi, 0.8 * scale, 1e-14);
}

TEST(Predictions, Plateau) {
  const std::int64_t N = 1 << 16;
  const int L = int(std::floor(std::log(double(N))));
  const auto rows = plateau_table(N, {1, L, int(N)}, toy());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].second, rows[1].second);
  EXPECT_NEAR(rows[2].second / rows[0].second, std::sqrt(double(N) / std::log(double(N))), 1e-9);
  const auto at = plateau_table(N, {L, L + 1}, toy());
  EXPECT_LT(at[1].second / at[0].second, 1.1);
}

TEST(Predictions, ArctanInequalities) {
  std::vector<double> grid{0, 0.5, 1, 2, 10, 1e3, 1e8};
  const auto rep = arctan_inequalities_check(grid);
  EXPECT_TRUE(rep.ok());
  EXPECT_NEAR(rep.min_lower_slack, 0, 1e-15);
}

TEST(Predictions, KilledBandContainsCapacity) {
  const auto& fc = slabgff::fitted::Constants::defaults();
  const auto p = slabgff::slab::SlabParams::make(256, 4);
  const auto kd = slabgff::greens::KilledDomain::complement_of_ball({}, 16, p);
  const double cap = slabgff::capacity::equilibrium(slabgff::slab::ball({}, 8, p), &kd, p).capacity;
  const auto b = killed_capacity_band(8, 16, 4, fc);
  EXPECT_GE(cap, b.lo);
  EXPECT_LE(cap, b.hi);
  EXPECT_THROW(killed_capacity_band(8, 4, 4, fc), slabgff::PreconditionError);
}

}  // namespace
