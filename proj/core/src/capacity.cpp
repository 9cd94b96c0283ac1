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

#include "slabgff/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "kernel_system.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/fitted.hpp"
#include "slabgff/lattice.hpp"
#include "slabgff/parallel.hpp"
#include "slabgff/rng.hpp"

namespace slabgff::capacity {

double DiscreteMeasure::mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

DiscreteMeasure DiscreteMeasure::point_mass(const SlabPoint& x, const SlabParams& p) {
  return {Region::make({x}, p), {1.0}};
}

DiscreteMeasure DiscreteMeasure::uniform(const Region& r) {
  if (r.empty()) throw PreconditionError("uniform measure on an empty set");
  return {r, std::vector<double>(r.size(), 1.0 / double(r.size()))};
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  const double m = mass();
  if (!(m > 0)) throw PreconditionError("cannot normalise a measure of zero mass");
  DiscreteMeasure out = *this;
  for (auto& w : out.weights) w /= m;
  return out;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kHittingSolve: return "hitting-solve";
    case Method::kVariational: return "variational";
    case Method::kGreenSystem: return "green-system";
  }
  return "?";
}

EquilibriumSolution equilibrium(const Region& A, const KilledDomain* kd, const SlabParams& p,
                                std::int64_t box_radius) {
  if (A.empty()) throw PreconditionError("equilibrium: empty target set");
  lattice::Box box;
  std::vector<std::uint8_t> free;
  std::int64_t margin = 0;
  if (kd) {
    for (const auto& x : A.points)
      if (!kd->contains(x)) throw PreconditionError("equilibrium: target set intersects the killing set");
    box = kd->box();
    free = kd->mask();
  } else {
    margin = box_radius > 0 ? box_radius : 4 * p.N;
    box = lattice::Box::bounding(A.points, margin, p.h);
    free.assign(box.size(), 1);
  }
  std::vector<double> u(box.size(), 0.0), f(box.size(), 0.0);
  for (const auto& x : A.points) {
    free[box.index(x)] = 0;
    u[box.index(x)] = 1.0;
  }
  const double lambda = p.vertex_weight();
  const auto st = lattice::solve(box, free, u, f, lambda, 1e-14, 200000);
  if (!st.converged) {
    std::ostringstream os;
    os << "iterations=" << st.iterations << " residual=" << st.rel_residual;
    throw NumericError("equilibrium: hitting-function solve did not converge", os.str());
  }
  EquilibriumSolution sol;
  sol.target = A;
  sol.killing = kd ? kd->describe() : std::string();
  sol.method = Method::kHittingSolve;
  sol.eq_measure.support = A;
  sol.eq_measure.weights.reserve(A.size());
  for (const auto& x : A.points) {
    double s = 0;
    for (const auto& q : slab::neighbours(x, p.h))
      if (box.contains(q)) s += u[box.index(q)];
    // lambda P_x(escape) = lambda - sum_q u(q) / 6, clipped at solver noise
    sol.eq_measure.weights.push_back(std::max(0.0, lambda - s / 6.0));
  }
  sol.capacity = sol.eq_measure.mass();
  sol.residuals.iterations = st.iterations;
  sol.residuals.solver_residual = st.rel_residual;
  sol.residuals.box_margin = margin;
  sol.residuals.solver = "lattice-cg";
  return sol;
}

EquilibriumSolution equilibrium_green(const Region& A, const GreenEvaluator& ev, double rel_tol) {
  if (A.empty()) throw PreconditionError("equilibrium: empty target set");
  detail::SystemStats st;
  auto e = detail::solve_green_system(A.points, ev, {}, std::vector<double>(A.size(), 1.0), rel_tol, &st);
  for (double v : e)
    if (v < -1e-9) throw NumericError("equilibrium: negative equilibrium weight", "w=" + std::to_string(v));
  for (double& v : e) v = std::max(v, 0.0);
  EquilibriumSolution sol;
  sol.target = A;
  sol.method = Method::kGreenSystem;
  sol.eq_measure = {A, std::move(e)};
  sol.capacity = sol.eq_measure.mass();
  sol.residuals.iterations = st.iterations;
  sol.residuals.solver_residual = st.rel_residual;
  sol.residuals.solver = st.solver;
  return sol;
}

double capacity_of(const std::vector<SlabPoint>& pts, const GreenEvaluator& ev) {
  if (pts.empty()) return 0.0;
  const auto e = detail::solve_green_system(pts, ev, {}, std::vector<double>(pts.size(), 1.0), 1e-12);
  return std::accumulate(e.begin(), e.end(), 0.0);
}

std::vector<double> gram_matrix(const Region& A, const Kernel& k, const GreenEvaluator& ev) {
  const std::size_t n = A.size();
  std::vector<double> G(n * n);
  if (k.kind == KernelKind::kGK) {
    if (!k.killed) throw PreconditionError("gram_matrix: killed kernel without a killing set");
    const auto& kd = *k.killed;
    for (const auto& x : A.points)
      if (!kd.contains(x)) throw PreconditionError("gram_matrix: support intersects the killing set");
    parallel_for(n, 0, [&](std::size_t j) {
      std::vector<double> f(kd.box().size(), 0.0);
      f[kd.box().index(A.points[j])] = 1.0;
      const auto u = greens::solve_killed(kd, f, 1e-13);
      for (std::size_t i = 0; i < n; ++i) G[i * n + j] = u[kd.box().index(A.points[i])];
    });
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) G[i * n + j] = G[j * n + i] = 0.5 * (G[i * n + j] + G[j * n + i]);
    return G;
  }
  std::int64_t W = 0;
  for (const auto& a : A.points)
    for (const auto& b : A.points) W = std::max({W, std::abs(a.y1 - b.y1), std::abs(a.y2 - b.y2)});
  const auto t = ev.table(W);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = A.points[i];
      const auto& b = A.points[j];
      int dz = a.z - b.z;
      if (dz < 0) dz += A.params.h;
      const auto q = t->parts(a.y1 - b.y1, a.y2 - b.y2, dz);
      G[i * n + j] = k.kind == KernelKind::kG2 ? q.g2 : k.kind == KernelKind::kG3 ? q.g3 : q.g();
    }
  return G;
}

double energy(const DiscreteMeasure& mu, const Kernel& k, const GreenEvaluator& ev) {
  if (mu.weights.size() != mu.support.size()) throw PreconditionError("energy: weights not aligned with support");
  for (double w : mu.weights)
    if (!(w >= 0)) throw PreconditionError("energy: negative weight");
  if (std::fabs(mu.mass() - 1.0) > 1e-10) throw PreconditionError("energy: not a probability measure");
  const std::size_t n = mu.weights.size();
  const auto G = gram_matrix(mu.support, k, ev);
  double e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += G[i * n + j] * mu.weights[j];
    e += mu.weights[i] * s;
  }
  return e;
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return {};
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0, theta = 0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / double(k + 1);
    if (s[k] - t > 0) theta = t;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

namespace {

void matvec(const std::vector<double>& G, std::size_t n, const std::vector<double>& x, std::vector<double>& y) {
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &G[i * n];
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double kkt(const std::vector<double>& mu, const std::vector<double>& Gmu, double E) {
  std::vector<double> v(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) v[i] = mu[i] - (Gmu[i] - E) / E;
  const auto p = project_simplex(v);
  double r = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) r = std::max(r, std::fabs(mu[i] - p[i]));
  return r;
}

}  // namespace

VariationalResult minimize_energy(const std::vector<double>& G, std::size_t n, const OptConfig& cfg) {
  if (n == 0 || G.size() != n * n) throw PreconditionError("cap_variational: bad Gram matrix");
  std::vector<double> mu(n, 1.0 / double(n)), Gmu, d(n), Gd, trial(n);
  matvec(G, n, mu, Gmu);
  double E = dot(mu, Gmu);
  double diag_max = 0;
  for (std::size_t i = 0; i < n; ++i) diag_max = std::max(diag_max, G[i * n + i]);
  double alpha = 1.0 / (2.0 * diag_max);  // step on the gradient 2 G mu
  VariationalResult res;
  double r = kkt(mu, Gmu, E);
  int it = 0;
  while (r > cfg.tol) {
    if (it >= cfg.max_iterations) {
      std::ostringstream os;
      os << "iterations=" << it << " kkt=" << r << " best_value=" << 1.0 / E;
      throw NumericError("cap_variational: iteration limit reached", os.str());
    }
    ++it;
    // gradient 2 G mu, shifted by the constant 2E (invisible on the simplex)
    for (std::size_t i = 0; i < n; ++i) trial[i] = mu[i] - alpha * 2.0 * (Gmu[i] - E);
    const auto proj = project_simplex(trial);
    for (std::size_t i = 0; i < n; ++i) d[i] = proj[i] - mu[i];
    matvec(G, n, d, Gd);
    double slope = 0;
    for (std::size_t i = 0; i < n; ++i) slope += 2.0 * (Gmu[i] - E) * d[i];
    const double curv = dot(d, Gd);
    if (!(slope < 0) || !(curv > 0)) break;  // no descent left at machine precision
    double t = 1.0;
    while (t * slope + t * t * curv > cfg.armijo * t * slope && t > 1e-12) t *= 0.5;
    for (std::size_t i = 0; i < n; ++i) {
      mu[i] = std::max(mu[i] + t * d[i], 0.0);
      Gmu[i] += t * Gd[i];
    }
    if (it % 64 == 0) matvec(G, n, mu, Gmu);
    E = dot(mu, Gmu);
    // Barzilai-Borwein: s = t d, y = 2 G s
    alpha = std::clamp(dot(d, d) / (2.0 * t * curv), 1e-12, 1e12);
    r = kkt(mu, Gmu, E);
  }
  matvec(G, n, mu, Gmu);
  E = dot(mu, Gmu);
  res.min_energy = E;
  res.value = 1.0 / E;
  res.iterations = it;
  res.kkt_residual = kkt(mu, Gmu, E);
  res.argmin.weights = std::move(mu);
  return res;
}

VariationalResult cap_variational(const Region& A, const Kernel& k, const GreenEvaluator& ev,
                                  const OptConfig& cfg) {
  if (A.empty()) throw PreconditionError("cap_variational: empty set");
  auto res = minimize_energy(gram_matrix(A, k, ev), A.size(), cfg);
  res.argmin.support = A;
  return res;
}

double hitting_identity_residual(const SlabPoint& x0, const Region& A, const GreenEvaluator& ev,
                                 std::int64_t box_radius) {
  const auto& p = ev.params();
  if (A.empty()) throw PreconditionError("hitting_identity_residual: empty set");
  const SlabPoint x = SlabPoint::make(x0.y1, x0.y2, x0.z, p.h);
  const auto eq = equilibrium_green(A, ev, 1e-14);
  double rhs = 0;
  for (std::size_t i = 0; i < A.size(); ++i) rhs += ev.g(x, A.points[i]) * eq.eq_measure.weights[i];

  auto pts = A.points;
  pts.push_back(x);
  const std::int64_t margin = box_radius > 0 ? box_radius : 4 * p.N;
  const auto box = lattice::Box::bounding(pts, margin, p.h);
  std::vector<std::uint8_t> free(box.size(), 1);
  std::vector<double> u(box.size(), 0.0), f(box.size(), 0.0);
  for (const auto& a : A.points) {
    free[box.index(a)] = 0;
    u[box.index(a)] = 1.0;
  }
  const auto st = lattice::solve(box, free, u, f, p.vertex_weight(), 1e-14, 200000);
  if (!st.converged) throw NumericError("hitting_identity_residual: Dirichlet solve did not converge");
  return std::fabs(u[box.index(x)] - rhs);
}

namespace {
void check_radius(std::int64_t R, const SlabParams& p) {
  if (R < 1 || R > 4 * p.N) throw PreconditionError("capacity: need 1 <= R <= 4N");
}
}  // namespace

double cap_line(std::int64_t R, const GreenEvaluator& ev) {
  check_radius(R, ev.params());
  return equilibrium_green(slab::line(R, ev.params()), ev).capacity;
}

double cap_ball(std::int64_t R, const GreenEvaluator& ev) {
  check_radius(R, ev.params());
  return equilibrium_green(slab::ball(SlabPoint{}, double(R), ev.params()), ev).capacity;
}

double cap_disk(std::int64_t R, const GreenEvaluator& ev) {
  check_radius(R, ev.params());
  return equilibrium_green(slab::disk(SlabPoint{}, double(R), ev.params()), ev).capacity;
}

namespace {

// Distinct sites visited before (and including) the first site outside B(0, R).
std::vector<SlabPoint> walk_range(std::int64_t R, const SlabParams& p, rng::Stream& s) {
  const double kill = p.killing() / p.vertex_weight();
  std::unordered_set<SlabPoint, slab::SlabPointHash> seen;
  std::vector<SlabPoint> out;
  SlabPoint x{};
  seen.insert(x);
  out.push_back(x);
  while (slab::slab_norm(x, p.h) < double(R)) {
    if (s.uniform() < kill) break;
    x = slab::neighbours(x, p.h)[s.below(6)];
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

}  // namespace

RangeTailResult range_capacity_tail(std::int64_t R, const std::vector<double>& s_values,
                                    const GreenEvaluator& ev, std::size_t nsamples,
                                    std::uint64_t seed, const RangeTailOptions& opt) {
  const auto& p = ev.params();
  if (R < 4) throw PreconditionError("range_capacity_tail: need R >= 4");
  for (double s : s_values)
    if (s < 2 || s > double(R) / 2) throw PreconditionError("range_capacity_tail: need 2 <= s <= R/2");
  if (nsamples == 0) throw PreconditionError("range_capacity_tail: no samples");

  RangeTailResult res;
  res.c2 = opt.c2 > 0 ? opt.c2 : fitted::Constants::defaults().get("range_c2");
  const Region ballR = slab::ball(SlabPoint{}, double(R), p);
  std::optional<KilledDomain> kd;
  if (opt.killed) {
    kd = KilledDomain::complement_of_ball(SlabPoint{}, 2.0 * double(R), p);
    res.reference_capacity = equilibrium(ballR, &*kd, p).capacity;
  } else {
    res.reference_capacity = equilibrium_green(ballR, ev).capacity;
  }

  res.capacities.assign(nsamples, 0.0);
  std::vector<std::uint8_t> coarse(nsamples, 0);
  parallel_for(nsamples, opt.threads, [&](std::size_t i) {
    rng::Stream s(seed, rng::Domain::kWalk, i);
    auto pts = walk_range(R, p, s);
    if (pts.size() > opt.max_points) {
      const std::size_t j = (pts.size() + opt.max_points - 1) / opt.max_points;
      std::vector<SlabPoint> sub;
      for (std::size_t k = 0; k < pts.size(); k += j) sub.push_back(pts[k]);
      pts.swap(sub);
      coarse[i] = 1;
    }
    if (kd) {
      const Region A{std::move(pts), p};
      res.capacities[i] = equilibrium(A, &*kd, p).capacity;
    } else {
      res.capacities[i] = capacity_of(pts, ev);
    }
  });
  res.coarsened = std::size_t(std::count(coarse.begin(), coarse.end(), 1));
  for (double s : s_values) {
    const double thr = res.c2 / s * res.reference_capacity;
    const auto c = std::count_if(res.capacities.begin(), res.capacities.end(), [&](double v) { return v <= thr; });
    res.table.emplace_back(s, double(c) / double(nsamples));
  }
  return res;
}

}  // namespace slabgff::capacity
