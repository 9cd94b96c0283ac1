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

#include "slabgff/slab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"

namespace slabgff::slab {

SlabParams SlabParams::make(std::int64_t N, int h) {
  if (N < 1) throw PreconditionError("SlabParams: N must be >= 1");
  if (h < 1 || h > N) throw PreconditionError("SlabParams: need 1 <= h <= N");
  return SlabParams{N, h};
}

std::string SlabParams::describe() const {
  std::ostringstream os;
  os << "N=" << N << " h=" << h;
  return os.str();
}

SlabPoint SlabPoint::make(std::int64_t y1, std::int64_t y2, std::int64_t z, int h) {
  if (h < 1) throw PreconditionError("SlabPoint: h must be >= 1");
  std::int64_t r = z % h;
  if (r < 0) r += h;
  return SlabPoint{y1, y2, int(r)};
}

int hat_z(int z, int h) {
  if (h < 1 || z < 0 || z >= h) throw PreconditionError("hat_z: need 0 <= z < h");
  return 2 * z > h ? z - h : z;
}

double slab_norm(const SlabPoint& x, int h) {
  const double a = double(x.y1), b = double(x.y2), c = double(hat_z(x.z, h));
  return std::sqrt(a * a + b * b + c * c);
}

SlabPoint difference(const SlabPoint& a, const SlabPoint& b, int h) {
  return SlabPoint::make(a.y1 - b.y1, a.y2 - b.y2, std::int64_t(a.z) - b.z, h);
}

std::array<SlabPoint, 6> neighbours(const SlabPoint& x, int h) {
  const int up = x.z + 1 == h ? 0 : x.z + 1;
  const int dn = x.z == 0 ? h - 1 : x.z - 1;
  return {SlabPoint{x.y1 + 1, x.y2, x.z}, SlabPoint{x.y1 - 1, x.y2, x.z},
          SlabPoint{x.y1, x.y2 + 1, x.z}, SlabPoint{x.y1, x.y2 - 1, x.z},
          SlabPoint{x.y1, x.y2, up},      SlabPoint{x.y1, x.y2, dn}};
}

Region Region::make(std::vector<SlabPoint> pts, const SlabParams& p) {
  for (const auto& q : pts) {
    if (q.z < 0 || q.z >= p.h) throw PreconditionError("Region: z out of range");
  }
  std::vector<SlabPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("Region: duplicate point");
  return Region{std::move(pts), p};
}

std::int64_t Region::horizontal_extent() const {
  std::int64_t e = 0;
  for (const auto& q : points) e = std::max({e, std::abs(q.y1), std::abs(q.y2)});
  return e;
}

PointIndex::PointIndex(const std::vector<SlabPoint>& pts) {
  map_.reserve(pts.size() * 2);
  for (std::size_t i = 0; i < pts.size(); ++i) map_.emplace(pts[i], std::int64_t(i));
}

std::int64_t PointIndex::find(const SlabPoint& p) const {
  auto it = map_.find(p);
  return it == map_.end() ? -1 : it->second;
}

namespace {

template <class Pred>
Region enumerate(const SlabPoint& c, std::int64_t reach, const SlabParams& p, Pred keep) {
  std::vector<SlabPoint> pts;
  for (std::int64_t a = -reach; a <= reach; ++a)
    for (std::int64_t b = -reach; b <= reach; ++b)
      for (int dz = 0; dz < p.h; ++dz) {
        const int zh = hat_z(dz, p.h);
        if (keep(a, b, zh)) pts.push_back(SlabPoint::make(c.y1 + a, c.y2 + b, c.z + dz, p.h));
      }
  return Region{std::move(pts), p};
}

}  // namespace

Region ball(const SlabPoint& center, double R, const SlabParams& p) {
  if (!(R >= 1)) throw PreconditionError("ball: R must be >= 1");
  const double R2 = R * R;
  return enumerate(center, std::int64_t(std::ceil(R)), p, [R2](auto a, auto b, int zh) {
    return double(a * a + b * b) + double(zh) * zh < R2;
  });
}

Region disk(const SlabPoint& center, double R, const SlabParams& p) {
  if (!(R >= 1)) throw PreconditionError("disk: R must be >= 1");
  const double R2 = R * R;
  return enumerate(center, std::int64_t(std::ceil(R)), p, [R, R2](auto a, auto b, int zh) {
    return double(a * a + b * b) < R2 && std::abs(zh) < R;
  });
}

Region line(std::int64_t R, const SlabParams& p) {
  if (R < 1) throw PreconditionError("line: R must be >= 1");
  std::vector<SlabPoint> pts;
  pts.reserve(std::size_t(R));
  for (std::int64_t k = 0; k < R; ++k) pts.push_back(SlabPoint{k, 0, 0});
  return Region{std::move(pts), p};
}

Region annulus(double a, double b, double R, const SlabParams& p) {
  if (!(0 < a && a < b && b < 1) || !(R > 0))
    throw PreconditionError("annulus: need 0 < a < b < 1 and R > 0");
  const double ro = (1 - a) * R, ri = (1 - b) * R;
  return enumerate(SlabPoint{}, std::int64_t(std::ceil(ro)), p, [=](auto u, auto v, int zh) {
    const double n2 = double(u * u + v * v) + double(zh) * zh;
    return n2 < ro * ro && n2 >= ri * ri;
  });
}

std::vector<int> renorm_anchors(std::int64_t L, int h) {
  if (L <= 3) throw PreconditionError("renorm_lattice: L must exceed 3");
  const int m = std::max<std::int64_t>(1, h / L);
  std::vector<int> s(std::size_t(m), 0);
  const int base = h / m, extra = h % m;
  int acc = 0;
  for (int j = 0; j < m; ++j) {
    acc += base + (j < extra ? 1 : 0);
    s[std::size_t(j)] = acc - 1;
  }
  return s;
}

Region renorm_lattice(std::int64_t L, std::int64_t window, const SlabParams& p) {
  const auto anchors = renorm_anchors(L, p.h);
  if (window < 0) throw PreconditionError("renorm_lattice: window must be >= 0");
  std::vector<SlabPoint> pts;
  const std::int64_t k = window / L;
  for (std::int64_t a = -k; a <= k; ++a)
    for (std::int64_t b = -k; b <= k; ++b)
      for (int s : anchors) pts.push_back(SlabPoint{a * L, b * L, s});
  return Region{std::move(pts), p};
}

double f_box(double R, const SlabParams& p) {
  if (!(R > 0)) throw PreconditionError("f_box: R must be positive");
  const double h = p.h;
  return std::min(R, h / bessel::k0(std::max(R, h) / double(p.N)));
}

void write_region(std::ostream& os, const Region& r) {
  for (const auto& q : r.points) os << q.y1 << ' ' << q.y2 << ' ' << q.z << '\n';
}

Region read_region(std::istream& is, const SlabParams& p) {
  std::vector<SlabPoint> pts;
  std::string ln;
  int lineno = 0;
  while (std::getline(is, ln)) {
    ++lineno;
    const auto hash = ln.find('#');
    if (hash != std::string::npos) ln.resize(hash);
    if (ln.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(ln);
    std::int64_t a, b, c;
    if (!(ss >> a >> b >> c))
      throw PreconditionError("read_region: malformed line " + std::to_string(lineno));
    pts.push_back(SlabPoint::make(a, b, c, p.h));
  }
  return Region::make(std::move(pts), p);
}

Region read_region_file(const std::string& path, const SlabParams& p) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("read_region: cannot open " + path);
  return read_region(in, p);
}

}  // namespace slabgff::slab
