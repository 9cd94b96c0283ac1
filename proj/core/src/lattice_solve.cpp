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

#include "slabgff/errors.hpp"
#include "slabgff/lattice.hpp"

namespace slabgff::lattice {

Box Box::centred(const slab::SlabPoint& c, std::int64_t radius, int h) {
  return Box{c.y1 - radius, c.y2 - radius, 2 * radius + 1, 2 * radius + 1, h};
}

Box Box::bounding(const std::vector<slab::SlabPoint>& pts, std::int64_t margin, int h) {
  if (pts.empty()) throw PreconditionError("Box::bounding: empty point set");
  std::int64_t a0 = pts[0].y1, a1 = a0, b0 = pts[0].y2, b1 = b0;
  for (const auto& p : pts) {
    a0 = std::min(a0, p.y1);
    a1 = std::max(a1, p.y1);
    b0 = std::min(b0, p.y2);
    b1 = std::max(b1, p.y2);
  }
  return Box{a0 - margin, b0 - margin, a1 - a0 + 1 + 2 * margin, b1 - b0 + 1 + 2 * margin, h};
}

void apply(const Box& box, const std::vector<double>& u, std::vector<double>& out, double lambda) {
  const std::size_t h = std::size_t(box.h), ny = std::size_t(box.ny), nx = std::size_t(box.nx);
  const std::size_t sy = h, sx = ny * h;
  out.resize(u.size());
  constexpr double w = 1.0 / 6.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t base = i * sx + j * sy;
      for (std::size_t z = 0; z < h; ++z) {
        const std::size_t k = base + z;
        double s = 0;
        if (i > 0) s += u[k - sx];
        if (i + 1 < nx) s += u[k + sx];
        if (j > 0) s += u[k - sy];
        if (j + 1 < ny) s += u[k + sy];
        s += u[base + (z + 1 == h ? 0 : z + 1)];
        s += u[base + (z == 0 ? h - 1 : z - 1)];
        out[k] = lambda * u[k] - w * s;
      }
    }
  }
}

CgStats solve(const Box& box, const std::vector<std::uint8_t>& free, std::vector<double>& u,
              const std::vector<double>& f, double lambda, double rel_tol, int max_iter,
              const std::vector<double>* extra) {
  const std::size_t n = box.size();
  if (u.size() != n || free.size() != n || f.size() != n || (extra && extra->size() != n))
    throw PreconditionError("lattice::solve: size mismatch");
  auto op = [&](const std::vector<double>& v, std::vector<double>& out) {
    apply(box, v, out, lambda);
    if (extra)
      for (std::size_t k = 0; k < n; ++k) out[k] += (*extra)[k] * v[k];
  };
  std::vector<double> r(n), p(n, 0.0), Ap(n);
  for (std::size_t k = 0; k < n; ++k)
    if (free[k]) u[k] = 0.0;
  op(u, Ap);
  double bnorm = 0;
  for (std::size_t k = 0; k < n; ++k) {
    r[k] = free[k] ? f[k] - Ap[k] : 0.0;
    bnorm += r[k] * r[k];
  }
  bnorm = std::sqrt(bnorm);
  CgStats st;
  if (bnorm == 0) {
    st.converged = true;
    return st;
  }
  std::vector<double> x(n, 0.0);
  p = r;
  double rr = bnorm * bnorm;
  for (int it = 1; it <= max_iter; ++it) {
    op(p, Ap);
    double pAp = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!free[k]) Ap[k] = 0.0;
      pAp += p[k] * Ap[k];
    }
    const double alpha = rr / pAp;
    double rr_new = 0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
      rr_new += r[k] * r[k];
    }
    st.iterations = it;
    st.rel_residual = std::sqrt(rr_new) / bnorm;
    if (st.rel_residual <= rel_tol) {
      st.converged = true;
      break;
    }
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  for (std::size_t k = 0; k < n; ++k)
    if (free[k]) u[k] = x[k];
  return st;
}

}  // namespace slabgff::lattice
