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
#include <deque>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/greens.hpp"

namespace slabgff::greens {
namespace {

constexpr double kPi = std::numbers::pi;

void check_connected(const lattice::Box& box, const std::vector<std::uint8_t>& mask) {
  std::size_t first = mask.size(), count = 0;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) {
      if (first == mask.size()) first = k;
      ++count;
    }
  if (count == 0) throw PreconditionError("KilledDomain: empty domain");
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::deque<std::size_t> q{first};
  seen[first] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const auto p = box.point(q.front());
    q.pop_front();
    for (const auto& nb : slab::neighbours(p, box.h)) {
      if (!box.contains(nb)) continue;
      const std::size_t k = box.index(nb);
      if (mask[k] && !seen[k]) {
        seen[k] = 1;
        ++reached;
        q.push_back(k);
      }
    }
  }
  if (reached != count) throw PreconditionError("KilledDomain: domain is not connected");
}

}  // namespace

OracleSolution::OracleSolution(const SlabParams& p, std::int64_t box_radius,
                               std::vector<double> values, SolveStats stats)
    : p_(p), B_(box_radius), v_(std::move(values)), stats_(stats) {}

double OracleSolution::at(const SlabPoint& x) const {
  const auto box = lattice::Box::centred(SlabPoint{}, B_, p_.h);
  const SlabPoint q = SlabPoint::make(x.y1, x.y2, x.z, p_.h);
  if (!box.contains(q)) return 0.0;
  return v_[box.index(q)];
}

OracleSolution solve_oracle(const SlabParams& p, std::int64_t box_radius, double rel_tol) {
  if (box_radius < 1) throw PreconditionError("g_oracle: box_radius must be >= 1");
  const auto box = lattice::Box::centred(SlabPoint{}, box_radius, p.h);
  std::vector<std::uint8_t> free(box.size(), 1);
  std::vector<double> u(box.size(), 0.0), f(box.size(), 0.0);
  f[box.index(SlabPoint{})] = 1.0;
  const auto st = lattice::solve(box, free, u, f, p.vertex_weight(), rel_tol, 100000);
  if (!st.converged) {
    std::ostringstream os;
    os << "iterations=" << st.iterations << " residual=" << st.rel_residual;
    throw NumericError("g_oracle: conjugate gradients did not converge", os.str());
  }
  return OracleSolution(p, box_radius, std::move(u), SolveStats{st.iterations, st.rel_residual});
}

double g_oracle(const SlabPoint& x, const SlabParams& p, std::int64_t box_radius) {
  if (box_radius <= 0)
    box_radius = std::max<std::int64_t>(4 * p.N, std::int64_t(std::ceil(2 * slab::slab_norm(x, p.h))));
  return solve_oracle(p, box_radius).at(x);
}

KilledDomain::KilledDomain(Kind k, Region d, lattice::Box box, std::vector<std::uint8_t> mask,
                           std::string desc)
    : kind_(k), domain_(std::move(d)), box_(box), mask_(std::move(mask)), desc_(std::move(desc)) {}

KilledDomain KilledDomain::explicit_domain(const Region& domain) {
  const auto box = lattice::Box::bounding(domain.points, 0, domain.params.h);
  std::vector<std::uint8_t> mask(box.size(), 0);
  for (const auto& q : domain.points) mask[box.index(q)] = 1;
  check_connected(box, mask);
  return KilledDomain(Kind::kExplicit, domain, box, std::move(mask), "explicit");
}

KilledDomain KilledDomain::complement_of_ball(const SlabPoint& x0, double r, const SlabParams& p) {
  Region d = slab::ball(x0, r, p);
  const auto box = lattice::Box::bounding(d.points, 0, p.h);
  std::vector<std::uint8_t> mask(box.size(), 0);
  for (const auto& q : d.points) mask[box.index(q)] = 1;
  check_connected(box, mask);
  std::ostringstream os;
  os << "complement-of-ball(" << x0.y1 << "," << x0.y2 << "," << x0.z << ";r=" << r << ")";
  return KilledDomain(Kind::kComplementOfBall, std::move(d), box, std::move(mask), os.str());
}

KilledDomain KilledDomain::empty(const SlabPoint& x0, std::int64_t box_radius, const SlabParams& p) {
  if (box_radius < 1) throw PreconditionError("KilledDomain::empty: box_radius must be >= 1");
  const auto box = lattice::Box::centred(x0, box_radius, p.h);
  std::vector<std::uint8_t> mask(box.size(), 1);
  std::vector<SlabPoint> pts;
  pts.reserve(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) pts.push_back(box.point(k));
  std::ostringstream os;
  os << "empty(box_radius=" << box_radius << ")";
  return KilledDomain(Kind::kEmpty, Region{std::move(pts), p}, box, std::move(mask), os.str());
}

std::vector<double> solve_killed(const KilledDomain& kd, const std::vector<double>& f,
                                 double rel_tol, SolveStats* stats) {
  std::vector<double> u(kd.box().size(), 0.0);
  const auto st = lattice::solve(kd.box(), kd.mask(), u, f, kd.params().vertex_weight(), rel_tol, 100000);
  if (!st.converged) {
    std::ostringstream os;
    os << "iterations=" << st.iterations << " residual=" << st.rel_residual;
    throw NumericError("killed Green's function: solver did not converge", os.str());
  }
  if (stats) *stats = SolveStats{st.iterations, st.rel_residual};
  return u;
}

double killed_green(const SlabPoint& x1, const SlabPoint& x2, const KilledDomain& kd) {
  const int h = kd.params().h;
  const SlabPoint a = SlabPoint::make(x1.y1, x1.y2, x1.z, h);
  const SlabPoint b = SlabPoint::make(x2.y1, x2.y2, x2.z, h);
  if (!kd.contains(a) || !kd.contains(b))
    throw PreconditionError("killed_green: points must lie in the domain");
  std::vector<double> f(kd.box().size(), 0.0);
  f[kd.box().index(b)] = 1.0;
  const auto u = solve_killed(kd, f);
  return u[kd.box().index(a)];
}

HarnackReport harnack(std::int64_t R, double t, const SlabParams& p) {
  if (R < 4 || !(t > 0) || t > 0.5) throw PreconditionError("harnack_ratio: need R >= 4, 0 < t <= 1/2");
  const auto kd = KilledDomain::complement_of_ball(SlabPoint{}, 2.0 * double(R), p);
  const auto& box = kd.box();
  const auto inner = slab::ball(SlabPoint{}, std::max(1.0, t * double(R)), p);
  HarnackReport rep;
  rep.ratio = 1.0;
  for (int k = 0; k < 8; ++k) {
    const double th = 2 * kPi * k / 8;
    SlabPoint w;
    for (double rho = 2.0 * double(R) - 0.5; rho > 0; rho -= 0.5) {
      w = SlabPoint{std::int64_t(std::lround(rho * std::cos(th))), std::int64_t(std::lround(rho * std::sin(th))), 0};
      if (kd.contains(w)) break;
    }
    rep.sources.push_back(w);
    std::vector<double> f(box.size(), 0.0);
    f[box.index(w)] = 1.0;
    const auto u = solve_killed(kd, f, 1e-14);
    std::vector<double> Lu;
    lattice::apply(box, u, Lu, p.vertex_weight());
    double lo = HUGE_VAL, hi = 0, umax = 0;
    for (const auto& q : inner.points) {
      const double v = u[box.index(q)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      umax = std::max(umax, v);
    }
    for (const auto& q : inner.points)
      rep.max_harmonic_residual = std::max(rep.max_harmonic_residual, std::fabs(Lu[box.index(q)]) / umax);
    rep.ratio = std::max(rep.ratio, hi / lo);
  }
  return rep;
}

double harnack_ratio(std::int64_t R, double t, const SlabParams& p) { return harnack(R, t, p).ratio; }

double gaussian_kernel(const std::vector<std::int64_t>& y, double t, double r) {
  const double d = double(y.size());
  double y2 = 0;
  for (auto v : y) y2 += double(v) * double(v);
  return std::pow(d / (2 * kPi * r * t), d / 2) * std::exp(-d * y2 / (2 * r * t));
}

double heat_kernel(const std::vector<std::int64_t>& y, double t, double r) {
  const double d = double(y.size());
  const double x = r * t / d;
  double prod = 1.0;
  for (auto yi : y) {
    const double a = std::fabs(double(yi));
    const int n = int(2 * a + 24 * std::sqrt(x) + 96);
    double s = 0;
    for (int m = 0; m < n; ++m) {
      const double k = 2 * kPi * m / n;
      s += std::cos(k * a) * std::exp(-x * (1 - std::cos(k)));
    }
    prod *= s / n;
  }
  return prod;
}

double lclt_error(const std::vector<std::int64_t>& y, double M, int d, double r) {
  if (int(y.size()) != d || (d != 2 && d != 3)) throw PreconditionError("lclt_error: need y in Z^d, d in {2,3}");
  if (!(r > 0) || r > 1) throw PreconditionError("lclt_error: rate must lie in (0, 1]");
  double ny = 0;
  for (auto v : y) ny += double(v) * double(v);
  ny = std::sqrt(ny);
  if (ny == 0 && M < 1) throw PreconditionError("lclt_error: y = 0 requires M >= 1");
  if (M < 0) throw PreconditionError("lclt_error: M must be >= 0");
  const double scale = std::max({M, ny, 1.0});
  const double T = 1e4 * scale * scale;
  auto f = [&](double t) { return std::fabs(heat_kernel(y, t, r) - gaussian_kernel(y, t, r)); };
  using G = boost::math::quadrature::gauss<double, 15>;
  double s = 0;
  if (M < 1) s += G::integrate(f, M, 1.0);
  const double u0 = std::log(std::max(M, 1.0)), u1 = std::log(T);
  const int panels = std::max(1, int(std::ceil((u1 - u0) / 0.125)));
  const double du = (u1 - u0) / panels;
  for (int k = 0; k < panels; ++k)
    s += G::integrate([&](double u) { const double t = std::exp(u); return f(t) * t; },
                      u0 + k * du, u0 + (k + 1) * du);
  return s;
}

VariancePrediction variance_prediction(const SlabParams& p) {
  const double lam = std::log(double(p.N)) / p.h;
  VariancePrediction v;
  v.log_branch = 3.0 / kPi * lam;
  v.bulk_branch = g_z3_origin_closed_form() + 3.0 / kPi * lam;
  v.value = lam > 1.0 ? v.log_branch : v.bulk_branch;
  return v;
}

double k_limit_series(double c, double ly, double lz) {
  if (!(c > 0)) throw PreconditionError("k_limit_series: c_h must be positive");
  const double s6 = std::sqrt(6.0);
  auto term = [&](double k) {
    const double rk = std::hypot(ly, lz + c * k);
    return std::exp(-s6 * rk) / rk;
  };
  double s = 0;
  for (std::int64_t k = 1; k < 100000000; ++k) {
    const double a = term(double(k)), b = term(-double(k));
    s += a + b;
    if (a + b < 1e-16 * s && c * double(k) > std::fabs(lz)) break;
  }
  return 0.5 * c * s;
}

double asymptotic_profile(const SlabPoint& x, const SlabParams& p) {
  const double yn = std::hypot(double(x.y1), double(x.y2));
  const double arg = std::sqrt(6.0) * std::max(yn, double(p.h)) / double(p.N);
  const int zh = slab::hat_z(x.z, p.h);
  return 3.0 / kPi * bessel::k0(arg) / p.h +
         g_z3(x.y1, x.y2, zh) * std::exp(-std::sqrt(6.0) * slab::slab_norm(x, p.h) / double(p.N));
}

double sandwich_profile(const SlabPoint& x, const SlabParams& p) {
  const double yn = std::hypot(double(x.y1), double(x.y2));
  return 1.0 / std::max(slab::slab_norm(x, p.h), 1.0) +
         bessel::k0(std::max(yn, double(p.h)) / double(p.N)) / p.h;
}

}  // namespace slabgff::greens
