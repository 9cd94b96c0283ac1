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
#include <string>
#include <utility>
#include <vector>

#include "slabgff/fitted.hpp"

namespace slabgff::predictions {

struct PredictionInput {
  std::int64_t N = 1;
  int h = 1;
  double R = 1;
  double g0 = 0;                               // g_N(0)
  const fitted::Constants* constants = nullptr;  // nullptr: fitted::Constants::defaults()
  double epsilon = 0.1;                        // flatness / arctan band width

  static PredictionInput make(std::int64_t N, int h, double R, double g0);
  const fitted::Constants& fitted() const;
};

// (1/pi) arctan(1 / sqrt(s - 1)).
double f_infty(double s);
// (pi/3) g0 h / log(N / (R v h)).
double s_star(const PredictionInput& in);
// I_g(x) = (1/pi) arctan(1 / sqrt(g x - 1)).
double arctan_tail(double g, double x);
// N^{1 - 1/s}.
double r_c(double s, double N);
// sqrt(3 / pi^3).
double arm_limit_constant();

// (log R)/R <= eps log(N/(R v h)) / h.
bool flatness_holds(const PredictionInput& in);

enum class BandKind { kThm11, kThm41 };

struct Band {
  double lo = 0;
  double hi = 0;
  std::string label;
};

// kThm11: [c, C] (g0 F(R))^{-1/2} with the fitted onearm constants.
// kThm41: the arctan bracket at (1 -+ eps) s_star; requires flatness.
Band theta_band(const PredictionInput& in, BandKind kind);

// Rows (h, 1/theta) of the two-regime curve sqrt(max(log N, h)) scaled by the
// fitted one-arm constants.
std::vector<std::pair<int, double>> plateau_table(std::int64_t N, const std::vector<int>& h_grid,
                                                  const fitted::Constants& constants);

struct InequalityReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  double min_lower_slack = 0;  // min arctan(x) - (pi/4)(1 ^ x)
  double max_outer_ratio = 0;  // max arctan(1/sqrt(x-1)) / arctan(1/sqrt x)
  bool ok() const { return failures.empty(); }
};

// (pi/4)(1 ^ x) <= arctan x <= (pi/2)(1 ^ x) on x >= 0 and
// arctan(x^{-1/2}) <= arctan((x-1)^{-1/2}) <= 2 sqrt2 arctan(x^{-1/2}) on x > 1.
InequalityReport arctan_inequalities_check(const std::vector<double>& grid);

// Killed ball capacity band: [c, C] (r ^ h / log(2r'/(r v h))) if r' >= h,
// [c, C] r otherwise, with the fitted killed_cap constants.
Band killed_capacity_band(double r, double r_prime, int h, const fitted::Constants& constants);

}  // namespace slabgff::predictions
