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
#include <vector>

#include "slabgff/slab.hpp"

namespace slabgff::lattice {

// Axis-aligned block [x0, x0 + nx) x [y0, y0 + ny) x Z/h of the slab.
struct Box {
  std::int64_t x0 = 0, y0 = 0, nx = 0, ny = 0;
  int h = 1;

  static Box centred(const slab::SlabPoint& c, std::int64_t radius, int h);
  static Box bounding(const std::vector<slab::SlabPoint>& pts, std::int64_t margin, int h);

  std::size_t size() const { return std::size_t(nx) * std::size_t(ny) * std::size_t(h); }
  bool contains(const slab::SlabPoint& p) const {
    return p.y1 >= x0 && p.y1 < x0 + nx && p.y2 >= y0 && p.y2 < y0 + ny;
  }
  std::size_t index(const slab::SlabPoint& p) const {
    return (std::size_t(p.y1 - x0) * std::size_t(ny) + std::size_t(p.y2 - y0)) * std::size_t(h) +
           std::size_t(p.z);
  }
  slab::SlabPoint point(std::size_t i) const {
    const int z = int(i % std::size_t(h));
    i /= std::size_t(h);
    return {x0 + std::int64_t(i / std::size_t(ny)), y0 + std::int64_t(i % std::size_t(ny)), z};
  }
};

struct CgStats {
  int iterations = 0;
  double rel_residual = 0;
  bool converged = false;
};

// out = (lambda I - A/6) u on the box, u = 0 outside.
void apply(const Box& box, const std::vector<double>& u, std::vector<double>& out, double lambda);

// Solves (L u)(x) = f(x) at sites with free[x] != 0; other sites keep the
// values already in u; u = 0 outside the box. Conjugate gradients, stopping
// at relative residual rel_tol. extra, if given, is added to the diagonal.
CgStats solve(const Box& box, const std::vector<std::uint8_t>& free, std::vector<double>& u,
              const std::vector<double>& f, double lambda, double rel_tol, int max_iter,
              const std::vector<double>* extra = nullptr);

}  // namespace slabgff::lattice
