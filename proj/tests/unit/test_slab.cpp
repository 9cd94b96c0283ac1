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
#include <iterator>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/slab.hpp"

namespace {

using namespace slabgff::slab;
using slabgff::PreconditionError;

// Brute force over the box |y| <= ceil(R), all layers. Disks are a horizontal
// ball times the layers with |z| < R.
std::set<SlabPoint> enumerate(double R, int h, bool disk) {
  std::set<SlabPoint> out;
  const auto r = std::int64_t(std::ceil(R));
  for (std::int64_t a = -r; a <= r; ++a)
    for (std::int64_t b = -r; b <= r; ++b)
      for (int z = 0; z < h; ++z) {
        const int zz = std::min(z, h - z);
        const bool in = disk ? std::sqrt(double(a * a + b * b)) < R && zz < R
                             : std::sqrt(double(a * a + b * b + zz * zz)) < R;
        if (in) out.insert({a, b, z});
      }
  return out;
}

std::set<SlabPoint> as_set(const Region& r) { return {r.points.begin(), r.points.end()}; }

TEST(Slab, Params) {
  const auto p = SlabParams::make(32, 4);
  EXPECT_EQ(p.vertex_weight(), 6 * SlabParams::edge_weight() + p.killing());
  EXPECT_DOUBLE_EQ(p.killing(), 1.0 / 1024);
  EXPECT_THROW(SlabParams::make(4, 5), PreconditionError);
  EXPECT_THROW(SlabParams::make(4, 0), PreconditionError);
}

TEST(Slab, HatZ) {
  EXPECT_EQ(hat_z(0, 7), 0);
  EXPECT_EQ(hat_z(3, 4), -1);
  EXPECT_EQ(hat_z(2, 4), 2);
  EXPECT_EQ(hat_z(0, 1), 0);
  for (int h = 1; h <= 9; ++h)
    for (int z = 0; z < h; ++z) {
      const int r = hat_z(z, h);
      EXPECT_EQ(((r % h) + h) % h, z);
      EXPECT_LE(2 * std::abs(r), h);
    }
}

TEST(Slab, PointReduction) {
  EXPECT_EQ(SlabPoint::make(1, 2, -1, 4), (SlabPoint{1, 2, 3}));
  EXPECT_EQ(SlabPoint::make(0, 0, 9, 4), (SlabPoint{0, 0, 1}));
}

TEST(Slab, Norm) {
  EXPECT_EQ(slab_norm({0, 0, 0}, 4), 0.0);
  EXPECT_EQ(slab_norm({3, 4, 0}, 4), 5.0);
  EXPECT_EQ(slab_norm({0, 0, 3}, 4), 1.0);
  EXPECT_EQ(slab_norm(difference({0, 0, 0}, {0, 0, 3}, 4), 4), 1.0);
}

TEST(Slab, Neighbours) {
  for (int h : {1, 2, 5}) {
    const auto nb = neighbours({0, 0, 0}, h);
    int vertical_self = 0;
    for (const auto& q : nb) {
      EXPECT_EQ(slab_norm(difference(q, {0, 0, 0}, h), h), h == 1 && q == SlabPoint{} ? 0.0 : 1.0);
      if (q == SlabPoint{}) ++vertical_self;
    }
    EXPECT_EQ(vertical_self, h == 1 ? 2 : 0);
  }
}

TEST(Slab, BallMatchesEnumeration) {
  const auto p = SlabParams::make(16, 4);
  // Open ball: the sqrt(2) shell lies inside radius 1.5.
  EXPECT_EQ(ball({}, 1.5, p).size(), 19u);
  const auto unit = as_set(ball({}, 1.01, p));
  const std::set<SlabPoint> seven{{0, 0, 0}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, 3}};
  EXPECT_EQ(unit, seven);
  for (int h : {1, 2, 3, 8})
    for (double R : {1.0, 2.5, 4.0, 6.3})
      EXPECT_EQ(as_set(ball({}, R, SlabParams::make(16, h))), enumerate(R, h, false)) << h << " " << R;
}

TEST(Slab, DiskAndLine) {
  const auto p1 = SlabParams::make(8, 1);
  EXPECT_EQ(disk({}, 2, p1).size(), 9u);
  EXPECT_EQ(as_set(disk({}, 2, p1)), enumerate(2, 1, true));
  for (int h : {3, 8})
    for (double R : {1.0, 2.0, 3.2})
      EXPECT_EQ(as_set(disk({}, R, SlabParams::make(8, h))), enumerate(R, h, true)) << h << " " << R;
  for (double R : {1.5, 3.0, 4.5}) {
    const auto b = as_set(ball({}, R, SlabParams::make(8, 5)));
    const auto d = as_set(disk({}, R, SlabParams::make(8, 5)));
    EXPECT_TRUE(std::includes(d.begin(), d.end(), b.begin(), b.end()));
  }
  const auto p = SlabParams::make(8, 3);
  const std::set<SlabPoint> l3{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  EXPECT_EQ(as_set(line(3, p)), l3);
}

TEST(Slab, Annulus) {
  const auto p = SlabParams::make(32, 2);
  const auto a = as_set(annulus(0.1, 0.5, 10, p));
  const auto outer = enumerate(9, 2, false);
  const auto inner = enumerate(5, 2, false);
  std::set<SlabPoint> diff;
  std::set_difference(outer.begin(), outer.end(), inner.begin(), inner.end(), std::inserter(diff, diff.end()));
  EXPECT_EQ(a, diff);
}

TEST(Slab, RegionValidation) {
  const auto p = SlabParams::make(8, 2);
  EXPECT_THROW(Region::make({{0, 0, 0}, {0, 0, 0}}, p), PreconditionError);
  EXPECT_THROW(Region::make({{0, 0, 2}}, p), PreconditionError);
  EXPECT_EQ(Region::make({{4, -3, 1}}, p).horizontal_extent(), 4);
}

TEST(Slab, RegionRoundTrip) {
  const auto p = SlabParams::make(16, 3);
  const auto r = ball({2, -1, 1}, 3.5, p);
  std::stringstream ss;
  write_region(ss, r);
  const auto back = read_region(ss, p);
  EXPECT_EQ(back.points, r.points);
  std::istringstream bad("1 2\n");
  EXPECT_THROW(read_region(bad, p), PreconditionError);
  std::istringstream commented("# header\n0 0 0\n1 0 2 # trailing\n");
  EXPECT_EQ(read_region(commented, p).size(), 2u);
}

TEST(Slab, RenormAnchors) {
  EXPECT_EQ(renorm_anchors(4, 10), (std::vector<int>{4, 9}));
  EXPECT_EQ(renorm_anchors(8, 4), (std::vector<int>{3}));
  for (int h = 1; h <= 40; ++h)
    for (std::int64_t L : {4, 5, 8}) {
      const auto s = renorm_anchors(L, h);
      ASSERT_EQ(s.size(), std::size_t(std::max<std::int64_t>(1, h / L)));
      EXPECT_EQ(s.back(), h - 1);
      EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    }
}

// Every window point within distance L of some anchor, checked by brute force.
bool covers(std::int64_t L, int h, std::int64_t window) {
  const auto p = SlabParams::make(4 * window, h);
  const auto lat = renorm_lattice(L, window + L, p);
  for (std::int64_t a = -window; a <= window; ++a)
    for (std::int64_t b = -window; b <= window; ++b)
      for (int z = 0; z < h; ++z) {
        bool hit = false;
        for (const auto& q : lat.points)
          if (slab_norm(difference({a, b, z}, q, h), h) <= double(L)) {
            hit = true;
            break;
          }
        if (!hit) return false;
      }
  return true;
}

TEST(Slab, RenormCoverage) {
  EXPECT_TRUE(covers(4, 10, 8));
  EXPECT_TRUE(covers(8, 4, 16));
  EXPECT_TRUE(covers(4, 8, 8));
  EXPECT_TRUE(covers(5, 12, 10));
  // Gaps of L + 3 leave a hole: h = 7, L = 4 has a single gap of 7.
  EXPECT_FALSE(covers(4, 7, 8));
}

TEST(Slab, FBox) {
  const double k1 = slabgff::bessel::k0(1.0);
  EXPECT_DOUBLE_EQ(f_box(64, SlabParams::make(64, 64)), 64.0);
  const auto p = SlabParams::make(256, 8);
  EXPECT_NEAR(f_box(256, p), 8 / k1, 1e-12);
  EXPECT_NEAR(f_box(256, p) / 8, 2.375, 1e-3);
  double prev = 0;
  for (double R = 1; R <= 256; R *= 1.3) {
    const double f = f_box(R, p);
    EXPECT_GE(f, prev);
    EXPECT_LE(f, R);
    prev = f;
  }
}

}  // namespace
