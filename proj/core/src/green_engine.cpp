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
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "slabgff/bessel.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/greens.hpp"
#include "slabgff/parallel.hpp"

namespace slabgff::greens {
namespace {

constexpr double kPi = std::numbers::pi;
// Orders whose scaled Bessel value is below e^{-45} relative are dropped.
constexpr double kLogNegligible = -45.0;

template <int P>
void append_gauss(double a, double b, std::vector<double>& t, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, P>;
  const auto& x = G::abscissa();
  const auto& v = G::weights();
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) {
      t.push_back(m);
      w.push_back(r * v[i]);
    } else {
      t.push_back(m - r * x[i]);
      w.push_back(r * v[i]);
      t.push_back(m + r * x[i]);
      w.push_back(r * v[i]);
    }
  }
}

// Vertical factor at one time node: v3[c] = P(Z_t = c) on Z, v2[c] = the
// winding sum over k != 0, for c = 0..h/2.
struct Vertical {
  std::vector<double> v3, v2;
};

Vertical vertical_factor(double x, int h, std::int64_t kmax) {
  const int hz = h / 2 + 1;
  Vertical out{std::vector<double>(std::size_t(hz), 0.0), std::vector<double>(std::size_t(hz), 0.0)};
  const int n_eff = bessel::scaled_bessel_order_cutoff(x, kLogNegligible);
  const std::int64_t k_terms = std::min<std::int64_t>(kmax, n_eff / h + 1);
  const double arg = 1.0 - 40.0 / std::max(x, 1e-300);
  const std::int64_t J = arg <= -1.0 ? h / 2 : std::int64_t(double(h) / (2 * kPi) * std::acos(arg)) + 1;
  const std::int64_t fourier_cost = std::min<std::int64_t>(h, 2 * J + 1);
  const std::int64_t winding_cost = 2 * k_terms + 1;

  const int nb_needed = std::min<std::int64_t>(n_eff, std::int64_t(h / 2) + (fourier_cost < winding_cost ? 0 : k_terms * h + h));
  std::vector<double> B(std::size_t(nb_needed) + 1);
  bessel::scaled_bessel_i(x, nb_needed, B.data());
  auto Bn = [&](std::int64_t n) { n = std::abs(n); return n <= nb_needed ? B[std::size_t(n)] : 0.0; };

  for (int c = 0; c < hz; ++c) out.v3[std::size_t(c)] = Bn(c);
  if (fourier_cost < winding_cost) {
    const std::int64_t jmax = std::min<std::int64_t>(J, h / 2);
    for (int c = 0; c < hz; ++c) {
      double q = 1.0;
      for (std::int64_t j = 1; j <= jmax; ++j) {
        const double th = 2 * kPi * double(j) / h;
        const double e = std::exp(-x * (1.0 - std::cos(th)));
        const double f = (2 * j == h) ? 1.0 : 2.0;
        q += f * e * std::cos(th * c);
      }
      q /= h;
      out.v2[std::size_t(c)] = std::max(0.0, q - out.v3[std::size_t(c)]);
    }
  } else {
    for (int c = 0; c < hz; ++c) {
      double s = 0;
      for (std::int64_t k = k_terms; k >= 1; --k) s += Bn(c + k * h) + Bn(c - k * h);
      out.v2[std::size_t(c)] = s;
    }
  }
  return out;
}

std::uint64_t memo_key(std::int64_t a, std::int64_t b, int c) {
  return (std::uint64_t(a) << 40) ^ (std::uint64_t(b) << 16) ^ std::uint64_t(c);
}

}  // namespace

double g_z3_origin_closed_form() {
  using boost::math::tgamma;
  return std::sqrt(6.0) / (32 * kPi * kPi * kPi) * tgamma(1.0 / 24) * tgamma(5.0 / 24) *
         tgamma(7.0 / 24) * tgamma(11.0 / 24);
}

double g_z3(std::int64_t a, std::int64_t b, std::int64_t c) {
  const double T = 1e12;
  const auto q = TimeQuadrature::build(0.0, 1e-14, T);
  const std::int64_t m = std::max({std::abs(a), std::abs(b), std::abs(c)});
  std::vector<double> B(std::size_t(m) + 1);
  double s = 0;
  for (std::size_t i = 0; i < q.t.size(); ++i) {
    bessel::scaled_bessel_i(q.t[i] / 3, int(m), B.data());
    s += q.w[i] * B[std::size_t(std::abs(a))] * B[std::size_t(std::abs(b))] * B[std::size_t(std::abs(c))];
  }
  return s + std::pow(3.0 / (2 * kPi), 1.5) * 2.0 / std::sqrt(T);
}

double g_z3_origin_time_integral() { return g_z3(0, 0, 0); }

TimeQuadrature TimeQuadrature::build(double kappa, double rel_tolerance, double t_max) {
  if (kappa < 0 || !(rel_tolerance > 0)) throw PreconditionError("TimeQuadrature: bad parameters");
  if (t_max <= 0) {
    if (kappa == 0) throw PreconditionError("TimeQuadrature: massless rule needs t_max");
    t_max = (std::fabs(std::log(kappa)) + std::fabs(std::log(rel_tolerance)) + 10.0) / kappa;
  }
  TimeQuadrature q;
  q.kappa = kappa;
  q.t_max = t_max;
  append_gauss<20>(0.0, 0.25, q.t, q.w);
  append_gauss<20>(0.25, 1.0, q.t, q.w);
  const double U = std::log(std::max(t_max, 1.0));
  const int panels = std::max(1, int(std::ceil(U / 0.5)));
  const double du = U / panels;
  std::vector<double> u, wu;
  for (int k = 0; k < panels; ++k) append_gauss<15>(k * du, (k + 1) * du, u, wu);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = std::exp(u[i]);
    q.t.push_back(t);
    q.w.push_back(wu[i] * t);
  }
  for (std::size_t i = 0; i < q.t.size(); ++i) q.w[i] *= std::exp(-kappa * q.t[i]);
  return q;
}

GreenTable::GreenTable(std::int64_t W, int h, std::vector<double> g2, std::vector<double> g3)
    : W_(W), h_(h), hz_(h / 2 + 1), g2_(std::move(g2)), g3_(std::move(g3)) {}

std::shared_ptr<const GreenTable> build_table(const SlabParams& p, const TimeQuadrature& q,
                                              std::int64_t W, int threads, std::int64_t kmax) {
  if (W < 0) throw PreconditionError("build_table: W must be >= 0");
  const int h = p.h, hz = h / 2 + 1;
  const std::size_t nodes = q.t.size();
  const std::size_t row = std::size_t(W + 1);
  if (kmax <= 0) kmax = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<double>> B(nodes);
  std::vector<Vertical> V(nodes);
  parallel_for(nodes, threads, [&](std::size_t i) {
    const double x = q.t[i] / 3;
    const int n_eff = bessel::scaled_bessel_order_cutoff(x, kLogNegligible);
    const int nb = int(std::min<std::int64_t>(W, n_eff));
    B[i].assign(row, 0.0);
    bessel::scaled_bessel_i(x, nb, B[i].data());
    V[i] = vertical_factor(x, h, kmax);
  });
  std::vector<double> g2(row * row * std::size_t(hz), 0.0), g3(g2.size(), 0.0);
  parallel_for(row, threads, [&](std::size_t a) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const double wa = q.w[i] * B[i][a];
      if (wa == 0) continue;
      const double* v3 = V[i].v3.data();
      const double* v2 = V[i].v2.data();
      for (std::size_t b = 0; b < row; ++b) {
        const double c0 = wa * B[i][b];
        if (c0 == 0) continue;
        double* o3 = &g3[(a * row + b) * std::size_t(hz)];
        double* o2 = &g2[(a * row + b) * std::size_t(hz)];
        for (int c = 0; c < hz; ++c) {
          o3[c] += c0 * v3[c];
          o2[c] += c0 * v2[c];
        }
      }
    }
  });
  return std::make_shared<const GreenTable>(W, h, std::move(g2), std::move(g3));
}

GreenEvaluator::GreenEvaluator(const SlabParams& p, EvaluatorConfig cfg)
    : params_(p), cfg_(cfg), quad_(TimeQuadrature::build(p.killing(), cfg.rel_tolerance)) {
  if (cfg_.winding_cutoff > 0) {
    kmax_ = cfg_.winding_cutoff;
  } else {
    const double k = double(p.N) / (std::sqrt(6.0) * p.h) * (40.0 + std::fabs(std::log(cfg_.rel_tolerance)));
    kmax_ = std::min<std::int64_t>(1000000, std::int64_t(std::ceil(k)));
  }
}

GreenParts GreenEvaluator::compute(std::int64_t a, std::int64_t b, int c) const {
  const int h = params_.h;
  const std::int64_t m = std::max(a, b);
  std::vector<double> B(std::size_t(m) + 1);
  GreenParts out;
  for (std::size_t i = 0; i < quad_.t.size(); ++i) {
    const double x = quad_.t[i] / 3;
    bessel::scaled_bessel_i(x, int(m), B.data());
    const double c0 = quad_.w[i] * B[std::size_t(a)] * B[std::size_t(b)];
    if (c0 == 0) continue;
    const Vertical v = vertical_factor(x, h, kmax_);
    out.g3 += c0 * v.v3[std::size_t(c)];
    out.g2 += c0 * v.v2[std::size_t(c)];
  }
  // Certify the winding truncation against the decay at scale N.
  const double zc = c;
  const double dk = std::hypot(std::hypot(double(a), double(b)), zc + double(kmax_ + 1) * h - 2.0 * zc);
  const double tail = 2.0 * 3.0 / (2 * kPi * dk) * std::exp(-std::sqrt(6.0) * dk / double(params_.N)) /
                      (1.0 - std::exp(-std::sqrt(6.0) * h / double(params_.N)));
  if (tail > cfg_.rel_tolerance * out.g()) {
    std::ostringstream os;
    os << "winding tail bound " << tail << " exceeds tolerance at (" << a << "," << b << "," << c
       << "); increase winding_cutoff beyond " << kmax_;
    throw NumericError("g2: winding tail not certified", os.str());
  }
  return out;
}

GreenParts GreenEvaluator::parts(const SlabPoint& x) const {
  const int h = params_.h;
  int c = std::abs(slab::hat_z(((x.z % h) + h) % h, h));
  std::int64_t a = std::abs(x.y1), b = std::abs(x.y2);
  if (a < b) std::swap(a, b);
  {
    std::shared_ptr<const GreenTable> t;
    {
      std::lock_guard<std::mutex> lk(table_mu_);
      t = table_;
    }
    if (t && t->covers(a, b)) return t->parts(a, b, c);
  }
  const std::uint64_t key = memo_key(a, b, c);
  {
    std::shared_lock lk(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const GreenParts v = compute(a, b, c);
  std::unique_lock lk(mu_);
  return memo_.emplace(key, v).first->second;
}

std::size_t GreenEvaluator::memo_size() const {
  std::shared_lock lk(mu_);
  return memo_.size();
}

std::shared_ptr<const GreenTable> GreenEvaluator::table(std::int64_t W) const {
  std::lock_guard<std::mutex> lk(table_mu_);
  if (table_ && table_->extent() >= W) return table_;
  table_ = build_table(params_, quad_, W, cfg_.threads, kmax_);
  return table_;
}

double g3(const SlabPoint& x, const GreenEvaluator& ev) { return ev.g3(x); }
double g2(const SlabPoint& x, const GreenEvaluator& ev) { return ev.g2(x); }
double g_slab(const SlabPoint& x, const GreenEvaluator& ev) { return ev.g(x); }

double g3_fourier(const SlabPoint& x, const SlabParams& p, int n) {
  if (n <= 0) n = int(12 * p.N + 64);
  const double kappa = p.killing(), cc = 1.0 / 3.0;
  const std::int64_t a = std::abs(x.y1);
  const double zh = slab::hat_z(x.z, p.h);
  std::vector<double> cs(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) cs[std::size_t(m)] = std::cos(2 * kPi * m / n);
  double s = 0;
  for (int m = 0; m < n; ++m) {
    const double k2 = 2 * kPi * m / n;
    const double cy = std::cos(k2 * double(x.y2));
    for (int l = 0; l < n; ++l) {
      const double k3 = 2 * kPi * l / n;
      const double b = kappa + 1.0 - (cs[std::size_t(m)] + cs[std::size_t(l)]) / 3.0;
      const double root = std::sqrt((b - cc) * (b + cc));
      const double r = cc / (b + root);
      s += std::pow(r, double(a)) / root * cy * std::cos(k3 * zh);
    }
  }
  return s / (double(n) * n);
}

double g_slab_fourier(const SlabPoint& x, const SlabParams& p, int n) {
  if (n <= 0) n = int(12 * p.N + 64);
  const double kappa = p.killing(), cc = 1.0 / 3.0;
  const std::int64_t a = std::abs(x.y1);
  double s = 0;
  for (int j = 0; j < p.h; ++j) {
    const double k3 = 2 * kPi * j / p.h;
    const double c3 = std::cos(k3), cz = std::cos(k3 * x.z);
    double inner = 0;
    for (int m = 0; m < n; ++m) {
      const double k2 = 2 * kPi * m / n;
      const double b = kappa + 1.0 - (std::cos(k2) + c3) / 3.0;
      const double root = std::sqrt((b - cc) * (b + cc));
      inner += std::pow(cc / (b + root), double(a)) / root * std::cos(k2 * double(x.y2));
    }
    s += inner / n * cz;
  }
  return s / p.h;
}

}  // namespace slabgff::greens
