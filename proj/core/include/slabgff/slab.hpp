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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace slabgff::slab {

// Slab Z^2 x (Z/hZ) with unit total jump rate and killing N^{-2}.
struct SlabParams {
  std::int64_t N = 1;
  int h = 1;

  static SlabParams make(std::int64_t N, int h);

  static constexpr double edge_weight() { return 1.0 / 6.0; }
  double killing() const { return 1.0 / (double(N) * double(N)); }
  double vertex_weight() const { return 1.0 + killing(); }
  std::string describe() const;
};

struct SlabPoint {
  std::int64_t y1 = 0;
  std::int64_t y2 = 0;
  int z = 0;

  static SlabPoint make(std::int64_t y1, std::int64_t y2, std::int64_t z, int h);
  auto operator<=>(const SlabPoint&) const = default;
};

struct SlabPointHash {
  std::size_t operator()(const SlabPoint& p) const noexcept {
    std::uint64_t k = std::uint64_t(p.y1) * 0x9E3779B97F4A7C15ULL;
    k ^= std::uint64_t(p.y2) * 0xC2B2AE3D27D4EB4FULL + (k << 6) + (k >> 2);
    k ^= std::uint64_t(p.z) * 0x165667B19E3779F9ULL + (k << 6) + (k >> 2);
    return std::size_t(k ^ (k >> 31));
  }
};

// Representative of z in (-h/2, h/2]; z = h/2 maps to +h/2.
int hat_z(int z, int h);
double slab_norm(const SlabPoint& x, int h);

// a - b with the vertical coordinate reduced mod h.
SlabPoint difference(const SlabPoint& a, const SlabPoint& b, int h);

// The six neighbours with adjacency multiplicity: for h = 1 the two vertical
// entries are x itself, for h = 2 both are the other layer.
std::array<SlabPoint, 6> neighbours(const SlabPoint& x, int h);

struct Region {
  std::vector<SlabPoint> points;
  SlabParams params;

  static Region make(std::vector<SlabPoint> pts, const SlabParams& p);
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  // Maximal |y1|, |y2| over the points, relative to the origin.
  std::int64_t horizontal_extent() const;
};

class PointIndex {
 public:
  explicit PointIndex(const std::vector<SlabPoint>& pts);
  // -1 if absent.
  std::int64_t find(const SlabPoint& p) const;
  bool contains(const SlabPoint& p) const { return find(p) >= 0; }

 private:
  std::unordered_map<SlabPoint, std::int64_t, SlabPointHash> map_;
};

Region ball(const SlabPoint& center, double R, const SlabParams& p);
Region disk(const SlabPoint& center, double R, const SlabParams& p);
Region line(std::int64_t R, const SlabParams& p);
// B_{(1-a)R} minus B_{(1-b)R}, centred at the origin.
Region annulus(double a, double b, double R, const SlabParams& p);

// Vertical anchors s_0 < ... < s_{m-1} = h-1 with m = max(1, floor(h/L)).
std::vector<int> renorm_anchors(std::int64_t L, int h);
// L Z^2 x anchors, restricted to |y1|, |y2| <= window.
Region renorm_lattice(std::int64_t L, std::int64_t window, const SlabParams& p);

// F(R) = min(R, h / K_0(max(R, h) / N)).
double f_box(double R, const SlabParams& p);

// Text format: one "y1 y2 z" triple per line; '#' starts a comment.
void write_region(std::ostream& os, const Region& r);
Region read_region(std::istream& is, const SlabParams& p);
Region read_region_file(const std::string& path, const SlabParams& p);

}  // namespace slabgff::slab
