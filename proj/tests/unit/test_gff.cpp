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

#include <gtest/gtest.h>

#include "slabgff/errors.hpp"
#include "slabgff/gff.hpp"
#include "slabgff/predictions.hpp"
#include "slabgff/rng.hpp"

namespace {

using namespace slabgff::gff;
using slabgff::greens::GreenEvaluator;

TEST(Rng, PhiloxKnownAnswers) {
  using slabgff::rng::philox4x32;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (slabgff::rng::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (slabgff::rng::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (slabgff::rng::Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Rng, StreamsIndependentOfOrder) {
  slabgff::rng::Stream a(1, slabgff::rng::Domain::kTest, 3), b(1, slabgff::rng::Domain::kTest, 4);
  const auto a0 = a.next_u64();
  slabgff::rng::Stream c(1, slabgff::rng::Domain::kTest, 4), d(1, slabgff::rng::Domain::kTest, 3);
  EXPECT_EQ(c.next_u64(), b.next_u64());
  EXPECT_EQ(d.next_u64(), a0);
  slabgff::rng::Stream e(1, slabgff::rng::Domain::kField, 3);
  EXPECT_NE(e.next_u64(), a0);
}

TEST(Rng, NormalMoments) {
  slabgff::rng::Stream s(9, slabgff::rng::Domain::kTest, 0);
  const int n = 200000;
  double m = 0, v = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m += x;
    v += x * x;
  }
  m /= n;
  v = v / n - m * m;
  EXPECT_NEAR(m, 0, 5 / std::sqrt(double(n)));
  EXPECT_NEAR(v, 1, 5 * std::sqrt(2.0 / n));
}

TEST(Gff, OpenProbability) {
  EXPECT_NEAR(open_probability(3, 3, 1.0 / 6), 1 - std::exp(-3.0), 1e-15);
  EXPECT_EQ(open_probability(-0.1, 3, 1.0 / 6), 0.0);
  EXPECT_EQ(open_probability(0, 3, 1.0 / 6), 0.0);
}

TEST(Gff, TorusBoxPrecondition) {
  const auto p = SlabParams::make(8, 2);
  EXPECT_THROW(TorusBox::make(32, p), slabgff::PreconditionError);
  EXPECT_EQ(TorusBox::make(64, p).sites(), 64u * 64u * 2u);
}

TEST(Gff, TorusGreenNearSlabGreen) {
  // Wrap corrections at M = 8N are of order e^{-8 sqrt 6}.
  const auto p = SlabParams::make(4, 3);
  const auto box = TorusBox::make(32, p);
  const GreenEvaluator ev(p);
  for (const SlabPoint x : {SlabPoint{0, 0, 0}, SlabPoint{1, 2, 1}, SlabPoint{3, 0, 2}})
    EXPECT_NEAR(torus_green(box, x) / ev.g(x), 1.0, 1e-6);
}

TEST(Gff, SampleDeterministic) {
  const auto box = TorusBox::make(32, SlabParams::make(4, 2));
  const auto a = sample_field(box, 99, 7);
  const auto b = sample_field(box, 99, 7);
  const auto c = sample_field(box, 99, 8);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}

TEST(Gff, CovarianceSelfTest) {
  const auto box = TorusBox::make(32, SlabParams::make(4, 2));
  const auto chk = covariance_self_test(box, 10000, 3);
  EXPECT_EQ(chk.pairs.size(), 20u);
  EXPECT_LE(chk.max_z, 5.0);
  EXPECT_LE(std::fabs(chk.mean_origin), 5 * chk.mean_origin_sigma);
}

TEST(Gff, EdgeIndicatorsIndependentGivenField) {
  const auto box = TorusBox::make(32, SlabParams::make(4, 2));
  auto f = sample_field(box, 4, 0);
  std::fill(f.values.begin(), f.values.end(), 1.0);
  const std::size_t e1 = edge_id(box, box.index({0, 0, 0}), 0);
  const std::size_t e2 = edge_id(box, box.index({5, 5, 1}), 1);
  const int n = 4000;
  int a = 0, b = 0, ab = 0;
  for (int s = 0; s < n; ++s) {
    const auto bm = percolate(f, std::uint64_t(s));
    a += bm.open[e1];
    b += bm.open[e2];
    ab += bm.open[e1] & bm.open[e2];
  }
  const double pa = double(a) / n, pb = double(b) / n, pab = double(ab) / n;
  const double q = 1 - std::exp(-2 * edge_conductance(box, 0));
  EXPECT_NEAR(pa, q, 5 * std::sqrt(q * (1 - q) / n));
  EXPECT_NEAR(pab, pa * pb, 5 * std::sqrt(pa * pb * (1 - pa * pb) / n));
}

TEST(Gff, OriginClusterHalfProbability) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 2));
  const std::size_t n = 2000;
  const auto r = origin_reaches(box, 21, 0, n, 4);
  const double nonempty = double(std::count_if(r.begin(), r.end(), [](double v) { return v != kNoCluster; })) / n;
  EXPECT_NEAR(nonempty, 0.5, 5 * std::sqrt(0.25 / n));
}

TEST(Gff, ThreadCountIndependence) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 2));
  const auto one = origin_reaches(box, 5, 10, 64, 16, 1);
  const auto many = origin_reaches(box, 5, 10, 64, 16, 3);
  EXPECT_EQ(one, many);
  const auto part = origin_reaches(box, 5, 42, 32, 16, 2);
  EXPECT_TRUE(std::equal(part.begin(), part.end(), one.begin() + 32));
}

TEST(Gff, OneArmMonotoneInRadius) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 2));
  const auto est = one_arm_radii(8, 2, {2, 4, 8}, box, 600, 13);
  ASSERT_EQ(est.size(), 3u);
  for (std::size_t i = 1; i < est.size(); ++i) EXPECT_LE(est[i].theta_hat, est[i - 1].theta_hat);
  for (const auto& e : est) {
    EXPECT_GT(e.theta_hat, 0);
    EXPECT_LT(e.theta_hat, 0.5);
  }
}

TEST(Gff, ReachesReproduceOneArm) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 1));
  const auto reach = origin_reaches(box, 8, 0, 300, 8);
  const auto a = one_arm_from_reaches(box, {4, 8}, reach);
  const auto b = one_arm_radii(8, 1, {4, 8}, box, 300, 8);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(a[i].theta_hat, b[i].theta_hat);
}

TEST(Gff, CapLawTableShape) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 2));
  CapLawOptions o;
  o.grid_points = 8;
  o.max_flagged_fraction = 1.0;
  const auto r = cluster_cap_law(8, 2, box, 200, 31, o);
  EXPECT_EQ(r.rows.size(), 8u);
  EXPECT_EQ(r.nsamples, 200u);
  EXPECT_EQ(r.valid + r.empty + r.flagged, r.nsamples);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(slabgff::predictions::arctan_tail(r.g, row.x),
                std::atan(1 / std::sqrt(r.g * row.x - 1)) / std::numbers::pi, 1e-14);
    EXPECT_GE(row.raw_tail, 0);
    EXPECT_LE(row.raw_tail, 1);
  }
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LE(r.rows[i].raw_tail, r.rows[i - 1].raw_tail);
}

TEST(Gff, CappedCrossingBelowTheta) {
  const auto box = TorusBox::make(64, SlabParams::make(8, 2));
  MonteCarloOptions o;
  o.max_flagged_fraction = 1.0;
  const auto j = capped_crossing_joint(8, 2, 6, {1.0, 2.0, 1e6}, box, 300, 17, o);
  ASSERT_EQ(j.rows.size(), 3u);
  EXPECT_LE(j.rows[0].probability, j.rows[1].probability);
  EXPECT_LE(j.rows[1].probability, j.theta_hat);
  EXPECT_EQ(j.rows[2].probability, j.theta_hat);
}

TEST(Gff, LogFits) {
  const std::vector<double> x{1, 2, 3, 4};
  std::vector<double> p;
  for (double v : x) p.push_back(0.3 * std::exp(-0.7 * v));
  const auto ols = ols_log_probability(x, p);
  EXPECT_NEAR(ols.slope, -0.7, 1e-12);
  EXPECT_NEAR(ols.intercept, std::log(0.3), 1e-12);
  EXPECT_NEAR(ols.slope_stderr, 0, 1e-10);
  const auto w = fit_log_probability(x, p, 1000);
  EXPECT_NEAR(w.slope, -0.7, 1e-12);
  EXPECT_EQ(w.used, 4u);
  p[3] = 0;
  EXPECT_EQ(ols_log_probability(x, p).used, 3u);
}

}  // namespace
