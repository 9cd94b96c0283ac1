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
#include <numeric>
#include <unordered_map>

#include "kernel_system.hpp"
#include "slabgff/capacity.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/gff.hpp"
#include "slabgff/lattice.hpp"
#include "slabgff/rng.hpp"

namespace slabgff::gff {
namespace {

constexpr double kVariance = 2.0;  // per unit cable length
constexpr std::size_t kDenseCable = 2000;

// First zero of a Brownian bridge from a > 0 to -|b| (or to 0) over [0, T].
double bridge_hit(double a, double b, double T, double normal, double u) {
  const double shape = a * a / kVariance;
  double s;
  const double ab = std::fabs(b);
  if (ab == 0 || a * T / ab >= 1e6 * std::max(T, shape)) {
    s = shape / (normal * normal);
  } else {
    s = rng::inverse_gaussian(a * T / ab, shape, normal, u);
  }
  if (!std::isfinite(s)) return T;
  return s * T / (T + s);
}

struct Draw {
  double normal, u;
};

Draw reach_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t item) {
  const auto a = rng::uniforms_at(seed, rng::Domain::kReach, sample, item, 0);
  const auto b = rng::uniforms_at(seed, rng::Domain::kReach, sample, item, 1);
  return {rng::box_muller(a[0], a[1]), b[0]};
}

// Extra conductance c' - c of a cable of conductance c covered up to d.
double extra_conductance(double c, double d) {
  const double rho = 1.0 / (2.0 * c);
  const double rest = rho - d;
  if (!(rest > 1e-14 * rho)) return 1e300;
  return 1.0 / (2.0 * rest) - c;
}

}  // namespace

double cable_reach(double a, double b, double rho, double normal, double u) {
  if (!(a > 0) || !(rho > 0)) throw PreconditionError("cable_reach: need a > 0 and rho > 0");
  return bridge_hit(a, b, rho, normal, u);
}

CableCapacity cable_capacity(const ClusterResult& c, const FieldSample& field, std::uint64_t seed,
                             const greens::GreenEvaluator& ev, bool with_vertex) {
  CableCapacity out;
  if (!c.contains_origin || c.vertices.empty()) return out;
  if (c.stopped_early || c.wrap_flagged)
    throw PreconditionError("cable_capacity: cluster was not fully explored");
  const auto& p = ev.params();
  const auto& box = field.box;
  const std::size_t n = c.vertices.size();
  const double kappa = p.killing();
  const double Lk = 1.0 / (2.0 * kappa);

  // Killing cables.
  double killing_extra = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = c.phi[i];
    if (!(a > 0)) continue;
    const std::uint64_t item = 3 * std::uint64_t(box.sites()) + box.index(c.vertices.points[i]);
    const auto dr = reach_draw(seed, field.sample, item);
    const double d = bridge_hit(a, 0.0, Lk, dr.normal, dr.u);
    killing_extra += extra_conductance(kappa, d);
  }

  // Partially covered boundary cables.
  std::unordered_map<slab::SlabPoint, double, slab::SlabPointHash> delta;
  std::vector<slab::SlabPoint> outer;
  for (const auto& e : c.boundary) {
    const double a = e.phi_inner;
    if (!(a > 0)) continue;
    const auto dr = reach_draw(seed, field.sample, e.edge);
    const double rho = 1.0 / (2.0 * e.conductance);
    const double d = bridge_hit(a, e.phi_outer, rho, dr.normal, dr.u);
    auto [it, fresh] = delta.emplace(e.outer, 0.0);
    if (fresh) outer.push_back(e.outer);
    it->second = std::min(1e300, it->second + extra_conductance(e.conductance, d));
  }

  if (with_vertex) out.vertex = capacity::capacity_of(c.vertices.points, ev);

  std::vector<slab::SlabPoint> T = c.vertices.points;
  T.insert(T.end(), outer.begin(), outer.end());
  out.system_size = T.size();
  if (T.size() <= kDenseCable) {
    std::vector<double> diag(T.size(), 0.0);
    for (std::size_t k = 0; k < outer.size(); ++k) diag[n + k] = 1.0 / delta[outer[k]];
    detail::SystemStats st;
    const auto m = detail::solve_green_system(T, ev, diag, std::vector<double>(T.size(), 1.0), 1e-12, &st);
    out.cable = std::accumulate(m.begin(), m.end(), 0.0) + killing_extra;
    out.solver = st.solver;
    return out;
  }

  // Large clusters: Dirichlet problem with the modified conductances on a
  // truncated box.
  const auto lbox = lattice::Box::bounding(T, 4 * p.N, p.h);
  std::vector<std::uint8_t> free(lbox.size(), 1);
  std::vector<double> u(lbox.size(), 0.0), f(lbox.size(), 0.0), extra(lbox.size(), 0.0);
  for (const auto& x : c.vertices.points) {
    free[lbox.index(x)] = 0;
    u[lbox.index(x)] = 1.0;
  }
  for (const auto& y : outer) {
    const double dl = std::min(delta[y], 1e12);
    extra[lbox.index(y)] = dl;
    f[lbox.index(y)] = dl;
  }
  const double lambda = p.vertex_weight();
  const auto st = lattice::solve(lbox, free, u, f, lambda, 1e-12, 200000, &extra);
  if (!st.converged) throw NumericError("cable_capacity: lattice solve did not converge");
  double cap = killing_extra;
  for (const auto& x : c.vertices.points) {
    double s = 0;
    for (const auto& q : slab::neighbours(x, p.h))
      if (lbox.contains(q)) s += u[lbox.index(q)];
    cap += lambda - s / 6.0;
  }
  for (const auto& y : outer) cap += extra[lbox.index(y)] * (1.0 - u[lbox.index(y)]);
  out.cable = cap;
  out.solver = "lattice-cg";
  return out;
}

}  // namespace slabgff::gff
