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

#include "slabgff/predictions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"

namespace slabgff::predictions {
namespace {
constexpr double kPi = 3.14159265358979323846;

double f_box(double R, std::int64_t N, int h) {
  const double a = std::max(R, double(h)) / double(N);
  return std::min(R, double(h) / bessel::k0(a));
}
}  // namespace

PredictionInput PredictionInput::make(std::int64_t N, int h, double R, double g0) {
  if (N < 1 || h < 1 || !(R >= 1)) throw PreconditionError("prediction input: need N, h, R >= 1");
  if (!(g0 > 0)) throw PreconditionError("prediction input: need g0 > 0");
  PredictionInput in;
  in.N = N;
  in.h = h;
  in.R = R;
  in.g0 = g0;
  return in;
}

const fitted::Constants& PredictionInput::fitted() const {
  return constants ? *constants : fitted::Constants::defaults();
}

double f_infty(double s) {
  if (!(s > 1)) throw PreconditionError("f_infty: need s > 1");
  return std::atan(1.0 / std::sqrt(s - 1.0)) / kPi;
}

double s_star(const PredictionInput& in) {
  const double ratio = double(in.N) / std::max(in.R, double(in.h));
  if (!(ratio > 1)) throw PreconditionError("s_star: need R v h < N");
  return kPi / 3.0 * in.g0 * double(in.h) / std::log(ratio);
}

double arctan_tail(double g, double x) {
  if (!(g > 0) || !(g * x > 1)) throw PreconditionError("arctan_tail: need g > 0 and g x > 1");
  return std::atan(1.0 / std::sqrt(g * x - 1.0)) / kPi;
}

double r_c(double s, double N) {
  if (!(s > 1)) throw PreconditionError("r_c: need s > 1");
  return std::pow(N, 1.0 - 1.0 / s);
}

double arm_limit_constant() { return std::sqrt(3.0 / (kPi * kPi * kPi)); }

bool flatness_holds(const PredictionInput& in) {
  const double rv = std::max(in.R, double(in.h));
  if (!(double(in.N) > rv)) return false;
  return std::log(in.R) / in.R <= in.epsilon * std::log(double(in.N) / rv) / double(in.h);
}

Band theta_band(const PredictionInput& in, BandKind kind) {
  Band b;
  if (kind == BandKind::kThm11) {
    const auto& fc = in.fitted();
    const double scale = 1.0 / std::sqrt(in.g0 * f_box(in.R, in.N, in.h));
    b.lo = fc.get("onearm_c") * scale;
    b.hi = fc.get("onearm_C") * scale;
    b.label = "up-to-constants band (fitted c, C)";
    return b;
  }
  if (!flatness_holds(in)) {
    std::ostringstream os;
    os << "theta_band: flatness condition log(R)/R <= eps log(N/(R v h))/h fails: "
       << std::log(in.R) / in.R << " > " << in.epsilon << " * "
       << std::log(double(in.N) / std::max(in.R, double(in.h))) / double(in.h);
    throw PreconditionError(os.str());
  }
  const double s = s_star(in);
  const double up = (1.0 + in.epsilon) * s, dn = (1.0 - in.epsilon) * s;
  b.lo = f_infty(up);
  b.hi = dn > 1 ? f_infty(dn) : 0.5;
  b.label = "arctan band (heuristic thresholds)";
  return b;
}

std::vector<std::pair<int, double>> plateau_table(std::int64_t N, const std::vector<int>& h_grid,
                                                  const fitted::Constants& constants) {
  const double c = std::sqrt(constants.get("onearm_c") * constants.get("onearm_C"));
  // theta(N) ~ c (g0 F(N))^{-1/2} with g0 F(N) ~ (3/pi) max(log N, h) / K0(1)
  const double k = std::sqrt(3.0 / kPi / bessel::k0(1.0)) / c;
  std::vector<std::pair<int, double>> rows;
  for (int h : h_grid) {
    if (h < 1) throw PreconditionError("plateau_table: heights must be positive");
    rows.emplace_back(h, k * std::sqrt(std::max(std::log(double(N)), double(h))));
  }
  return rows;
}

InequalityReport arctan_inequalities_check(const std::vector<double>& grid) {
  InequalityReport rep;
  rep.min_lower_slack = HUGE_VAL;
  constexpr double tol = 1e-15;
  for (double x : grid) {
    if (x >= 0) {
      const double a = std::atan(x), m = std::min(1.0, x);
      ++rep.checked;
      rep.min_lower_slack = std::min(rep.min_lower_slack, a - kPi / 4 * m);
      if (a < kPi / 4 * m - tol || a > kPi / 2 * m + tol) {
        std::ostringstream os;
        os << "first chain fails at x=" << x;
        rep.failures.push_back(os.str());
      }
    }
    if (x > 1) {
      const double lo = std::atan(1.0 / std::sqrt(x)), mid = std::atan(1.0 / std::sqrt(x - 1.0));
      ++rep.checked;
      rep.max_outer_ratio = std::max(rep.max_outer_ratio, mid / lo);
      if (lo > mid + tol || mid > 2 * std::sqrt(2.0) * lo + tol) {
        std::ostringstream os;
        os << "second chain fails at x=" << x;
        rep.failures.push_back(os.str());
      }
    }
  }
  return rep;
}

Band killed_capacity_band(double r, double r_prime, int h, const fitted::Constants& constants) {
  if (!(r >= 1) || r_prime < r) throw PreconditionError("killed_capacity_band: need r' >= r >= 1");
  double base = r;
  if (r_prime >= double(h)) base = std::min(r, double(h) / std::log(2.0 * r_prime / std::max(r, double(h))));
  Band b;
  b.lo = constants.get("killed_cap_c") * base;
  b.hi = constants.get("killed_cap_C") * base;
  b.label = r_prime >= double(h) ? "r' >= h" : "r' < h";
  return b;
}

}  // namespace slabgff::predictions
