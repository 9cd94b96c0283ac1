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
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "slabgff/capacity.hpp"
#include "slabgff/errors.hpp"

namespace {

using namespace slabgff::capacity;
using slabgff::slab::SlabPoint;

// cap(A) = 1^T G^{-1} 1 by Gaussian elimination with partial pivoting.
double cap_gram(const Region& A, const GreenEvaluator& ev) {
  const std::size_t n = A.size();
  std::vector<double> m(n * (n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i * (n + 1) + j] = ev.g(A.points[i], A.points[j]);
    m[i * (n + 1) + n] = 1.0;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r * (n + 1) + c]) > std::fabs(m[piv * (n + 1) + c])) piv = r;
    for (std::size_t k = 0; k <= n; ++k) std::swap(m[c * (n + 1) + k], m[piv * (n + 1) + k]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r * (n + 1) + c] / m[c * (n + 1) + c];
      for (std::size_t k = c; k <= n; ++k) m[r * (n + 1) + k] -= f * m[c * (n + 1) + k];
    }
  }
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += m[i * (n + 1) + n] / m[i * (n + 1) + i];
  return s;
}

Region random_set(std::mt19937_64& gen, std::size_t n, std::int64_t r, const SlabParams& p) {
  std::uniform_int_distribution<std::int64_t> d(-r, r);
  std::uniform_int_distribution<int> dz(0, p.h - 1);
  std::set<SlabPoint> s;
  while (s.size() < n) s.insert({d(gen), d(gen), dz(gen)});
  return Region::make({s.begin(), s.end()}, p);
}

TEST(Capacity, SinglePoint) {
  const auto p = SlabParams::make(16, 2);
  const GreenEvaluator ev(p);
  const auto A = Region::make({{0, 0, 0}}, p);
  const double g0 = ev.g({});
  EXPECT_NEAR(equilibrium(A, nullptr, p).capacity * g0, 1.0, 1e-8);
  EXPECT_NEAR(equilibrium_green(A, ev).capacity * g0, 1.0, 1e-12);
  const auto v = cap_variational(A, Kernel::g(), ev);
  EXPECT_NEAR(v.value * g0, 1.0, 1e-12);
  EXPECT_EQ(v.argmin.weights, std::vector<double>{1.0});
}

TEST(Capacity, TwoPoints) {
  const auto p = SlabParams::make(32, 4);
  const GreenEvaluator ev(p);
  const SlabPoint a{0, 0, 0}, b{7, 3, 2};
  const auto v = cap_variational(Region::make({a, b}, p), Kernel::g(), ev);
  EXPECT_NEAR(v.value, 2 / (ev.g({}) + ev.g(a, b)), 1e-10);
  EXPECT_NEAR(v.argmin.weights[0], 0.5, 1e-6);
}

TEST(Capacity, InteriorWeightOfSolidBox) {
  const auto p = SlabParams::make(8, 3);
  std::vector<SlabPoint> pts;
  for (std::int64_t a = -3; a <= 3; ++a)
    for (std::int64_t b = -3; b <= 3; ++b)
      for (int z = 0; z < 3; ++z) pts.push_back({a, b, z});
  const auto e = equilibrium(Region::make(pts, p), nullptr, p);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::max(std::abs(pts[i].y1), std::abs(pts[i].y2)) <= 2)
      EXPECT_NEAR(e.eq_measure.weights[i], 1.0 / 64, 1e-10);
  EXPECT_NEAR(e.capacity, e.eq_measure.mass(), 1e-10);
}

TEST(Capacity, MethodsAgreeWithGramOracle) {
  std::mt19937_64 gen(17);
  for (int h : {1, 3, 5}) {
    const auto p = SlabParams::make(16, h);
    const GreenEvaluator ev(p);
    for (std::size_t n : {2, 9, 30}) {
      const auto A = random_set(gen, n, 5, p);
      const double ref = cap_gram(A, ev);
      EXPECT_NEAR(equilibrium(A, nullptr, p).capacity / ref, 1.0, 1e-6);
      EXPECT_NEAR(equilibrium_green(A, ev).capacity / ref, 1.0, 1e-9);
      EXPECT_NEAR(cap_variational(A, Kernel::g(), ev).value / ref, 1.0, 1e-6);
    }
  }
}

TEST(Capacity, EquilibriumSupportedOnTarget) {
  const auto p = SlabParams::make(16, 2);
  const auto A = slabgff::slab::ball({}, 3, p);
  const auto e = equilibrium(A, nullptr, p);
  EXPECT_EQ(e.eq_measure.support.points, A.points);
  for (double w : e.eq_measure.weights) EXPECT_GE(w, 0);
}

TEST(Capacity, Energy) {
  const auto p = SlabParams::make(32, 4);
  const GreenEvaluator ev(p);
  EXPECT_NEAR(energy(DiscreteMeasure::point_mass({}, p), Kernel::g(), ev), ev.g({}), 1e-14);
  const auto A = slabgff::slab::line(6, p);
  const auto mu = DiscreteMeasure::uniform(A);
  double quad = 0;
  for (const auto& x : A.points)
    for (const auto& y : A.points) quad += ev.g(x, y) / 36;
  EXPECT_NEAR(energy(mu, Kernel::g(), ev), quad, 1e-13);
  // Quadratic form of a mixture.
  DiscreteMeasure mix{A, std::vector<double>(6, 0.5 / 6)};
  mix.weights[0] += 0.5;
  double cross = 0;
  for (const auto& y : A.points) cross += ev.g({}, y) / 6;
  const double expect = 0.25 * quad + 0.25 * ev.g({}) + 0.5 * cross;
  EXPECT_NEAR(energy(mix, Kernel::g(), ev), expect, 1e-13);
}

TEST(Capacity, VariationalThreeDimensionalLine) {
  // Uniform measure on a line segment; the zero-winding kernel on a horizontal
  // line does not depend on h. The next-order term is about 0.21 of the
  // leading one at R = 256, so the band uses eps = 0.15.
  const auto p = SlabParams::make(4096, 1);
  const GreenEvaluator ev(p);
  const std::int64_t R = 256;
  const double e = energy(DiscreteMeasure::uniform(slabgff::slab::line(R, p)), Kernel{KernelKind::kG3}, ev);
  const double ref = 3 / std::numbers::pi * std::log(double(R)) / double(R);
  EXPECT_GE(e, ref * 0.85);
  EXPECT_LE(e, ref * 1.3);
}

TEST(Capacity, SimplexProjection) {
  const auto x = project_simplex({0.2, -1.0, 3.0});
  EXPECT_NEAR(x[0] + x[1] + x[2], 1.0, 1e-15);
  EXPECT_EQ(x[1], 0.0);
  const auto y = project_simplex({0.25, 0.25, 0.5});
  EXPECT_NEAR(y[2], 0.5, 1e-15);
}

TEST(Capacity, MinimiseEnergyDiagonal) {
  // Diagonal Gram: the minimiser is proportional to 1/G_ii.
  const std::vector<double> G{1, 0, 0, 0, 2, 0, 0, 0, 4};
  const auto r = minimize_energy(G, 3);
  EXPECT_NEAR(r.value, 1 + 0.5 + 0.25, 1e-9);
  EXPECT_NEAR(r.argmin.weights[0], 4.0 / 7, 1e-6);
}

TEST(Capacity, HittingIdentity) {
  const auto p = SlabParams::make(64, 4);
  const GreenEvaluator ev(p);
  const auto B4 = slabgff::slab::ball({}, 4, p);
  EXPECT_LE(hitting_identity_residual({1, 0, 0}, B4, ev), 1e-8);
  EXPECT_LE(hitting_identity_residual({32, 0, 0}, B4, ev), 1e-8);
  const auto single = Region::make({{0, 0, 0}}, p);
  EXPECT_LE(hitting_identity_residual({20, 5, 2}, single, ev), 1e-8);
}

TEST(Capacity, MonotoneAndSubadditive) {
  std::mt19937_64 gen(5);
  const auto p = SlabParams::make(16, 3);
  const GreenEvaluator ev(p);
  for (int rep = 0; rep < 4; ++rep) {
    const auto A = random_set(gen, 12, 4, p);
    auto pts = A.points;
    const auto extra = random_set(gen, 10, 6, p);
    std::set<SlabPoint> u(pts.begin(), pts.end());
    u.insert(extra.points.begin(), extra.points.end());
    const auto AB = Region::make({u.begin(), u.end()}, p);
    const double ca = equilibrium_green(A, ev).capacity;
    const double cb = equilibrium_green(extra, ev).capacity;
    const double cu = equilibrium_green(AB, ev).capacity;
    EXPECT_LE(ca, cu * (1 + 1e-12));
    EXPECT_LE(cu, (ca + cb) * (1 + 1e-12));
  }
}

TEST(Capacity, ShapesOrdered) {
  const GreenEvaluator ev(SlabParams::make(64, 4));
  for (std::int64_t R : {2, 5, 9}) {
    EXPECT_LE(cap_ball(R, ev), cap_disk(R, ev) * (1 + 1e-9));
    EXPECT_LE(cap_line(R, ev), cap_disk(R, ev) * (1 + 1e-9));
  }
}

TEST(Capacity, KilledAboveFree) {
  const auto p = SlabParams::make(64, 2);
  const GreenEvaluator ev(p);
  const auto A = slabgff::slab::ball({}, 4, p);
  const auto kd = KilledDomain::complement_of_ball({}, 10, p);
  const double killed = equilibrium(A, &kd, p).capacity;
  EXPECT_GT(killed, equilibrium_green(A, ev).capacity);
  const auto vk = cap_variational(A, Kernel::killed_by(kd), ev);
  EXPECT_NEAR(vk.value / killed, 1.0, 1e-6);
  const auto bad = slabgff::slab::ball({}, 12, p);
  EXPECT_THROW(equilibrium(bad, &kd, p), slabgff::PreconditionError);
}

TEST(Capacity, RangeTail) {
  const GreenEvaluator ev(SlabParams::make(64, 2));
  RangeTailOptions o;
  o.c2 = 4.0;
  const auto free = range_capacity_tail(8, {2, 3, 4}, ev, 200, 11, o);
  o.killed = true;
  const auto killed = range_capacity_tail(8, {2, 3, 4}, ev, 200, 11, o);
  ASSERT_EQ(free.table.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_GE(free.table[i].second, 0.0);
    EXPECT_LE(free.table[i].second, 1.0);
    if (i > 0) EXPECT_LE(free.table[i].second, free.table[i - 1].second);
  }
  for (double c : free.capacities) EXPECT_GT(c, 0);
  EXPECT_GT(killed.reference_capacity, free.reference_capacity);
  EXPECT_THROW(range_capacity_tail(8, {5}, ev, 10, 1, o), slabgff::PreconditionError);
}

}  // namespace
