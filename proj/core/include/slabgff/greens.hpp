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
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "slabgff/lattice.hpp"
#include "slabgff/slab.hpp"

namespace slabgff::greens {

using slab::Region;
using slab::SlabParams;
using slab::SlabPoint;

// g_{Z^3}(0) for the rate-one walk, from the closed form
// sqrt(6)/(32 pi^3) Gamma(1/24) Gamma(5/24) Gamma(7/24) Gamma(11/24).
double g_z3_origin_closed_form();
// The same constant from the massless time integral int_0^inf (e^{-t/3} I_0(t/3))^3 dt.
double g_z3_origin_time_integral();

// Massless Z^3 Green's function at (a, b, c).
double g_z3(std::int64_t a, std::int64_t b, std::int64_t c);

// Nodes and weights for int_0^inf e^{-kappa t} f(t) dt where f is bounded by 1.
struct TimeQuadrature {
  std::vector<double> t;
  std::vector<double> w;  // includes e^{-kappa t}
  double kappa = 0;
  double t_max = 0;

  static TimeQuadrature build(double kappa, double rel_tolerance, double t_max = 0);
};

struct GreenParts {
  double g2 = 0;  // windings k != 0
  double g3 = 0;  // zero winding
  double g() const { return g2 + g3; }
};

// Tabulated g2, g3 for displacements |dy1|, |dy2| <= W and all heights.
class GreenTable {
 public:
  GreenTable(std::int64_t W, int h, std::vector<double> g2, std::vector<double> g3);
  std::int64_t extent() const { return W_; }
  int height() const { return h_; }
  bool covers(std::int64_t dy1, std::int64_t dy2) const {
    return std::abs(dy1) <= W_ && std::abs(dy2) <= W_;
  }
  // Displacement with dz in [0, h).
  GreenParts parts(std::int64_t dy1, std::int64_t dy2, int dz) const {
    const std::size_t i = index(std::abs(dy1), std::abs(dy2), zfold(dz));
    return {g2_[i], g3_[i]};
  }
  double g(std::int64_t dy1, std::int64_t dy2, int dz) const {
    const std::size_t i = index(std::abs(dy1), std::abs(dy2), zfold(dz));
    return g2_[i] + g3_[i];
  }
  double g(const SlabPoint& a, const SlabPoint& b) const {
    int dz = a.z - b.z;
    if (dz < 0) dz += h_;
    return g(a.y1 - b.y1, a.y2 - b.y2, dz);
  }

 private:
  int zfold(int dz) const { return 2 * dz > h_ ? h_ - dz : dz; }
  std::size_t index(std::int64_t a, std::int64_t b, int c) const {
    return (std::size_t(a) * std::size_t(W_ + 1) + std::size_t(b)) * std::size_t(hz_) + std::size_t(c);
  }
  std::int64_t W_;
  int h_, hz_;
  std::vector<double> g2_, g3_;
};

struct EvaluatorConfig {
  double rel_tolerance = 1e-12;
  // Resolution of the Fourier cross-check path; 0 picks 12 N + 64.
  int quad_points_per_dim = 0;
  // Winding cutoff; 0 derives it from the exponential decay at scale N.
  std::int64_t winding_cutoff = 0;
  int threads = 0;
};

// Green's function g = (lambda I - A/6)^{-1} of the killed slab walk, split by
// vertical winding. Immutable except for a thread-safe memo.
class GreenEvaluator {
 public:
  explicit GreenEvaluator(const SlabParams& p, EvaluatorConfig cfg = {});

  const SlabParams& params() const { return params_; }
  const EvaluatorConfig& config() const { return cfg_; }
  const TimeQuadrature& quadrature() const { return quad_; }
  std::int64_t winding_cutoff() const { return kmax_; }

  GreenParts parts(const SlabPoint& x) const;
  double g3(const SlabPoint& x) const { return parts(x).g3; }
  double g2(const SlabPoint& x) const { return parts(x).g2; }
  double g(const SlabPoint& x) const { return parts(x).g(); }
  double g(const SlabPoint& a, const SlabPoint& b) const {
    return g(slab::difference(a, b, params_.h));
  }

  // Table covering horizontal displacements up to W; reused when a cached
  // table is already large enough.
  std::shared_ptr<const GreenTable> table(std::int64_t W) const;

  std::size_t memo_size() const;

 private:
  GreenParts compute(std::int64_t a, std::int64_t b, int c) const;

  SlabParams params_;
  EvaluatorConfig cfg_;
  TimeQuadrature quad_;
  std::int64_t kmax_ = 0;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::uint64_t, GreenParts> memo_;
  mutable std::mutex table_mu_;
  mutable std::shared_ptr<const GreenTable> table_;
};

// Builds a table directly (used by the evaluator and benchmarks).
std::shared_ptr<const GreenTable> build_table(const SlabParams& p, const TimeQuadrature& q,
                                              std::int64_t W, int threads = 0,
                                              std::int64_t winding_cutoff = 0);

// Fourier cross-checks. g3 integrates the 3-D lattice symbol with the first
// frequency done in closed form and a trapezoid rule in the other two; the
// slab version sums the vertical frequencies exactly.
double g3_fourier(const SlabPoint& x, const SlabParams& p, int n_quad);
double g_slab_fourier(const SlabPoint& x, const SlabParams& p, int n_quad);

// Free functions mirroring the evaluator.
double g3(const SlabPoint& x, const GreenEvaluator& ev);
double g2(const SlabPoint& x, const GreenEvaluator& ev);
double g_slab(const SlabPoint& x, const GreenEvaluator& ev);

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0;
};

// Dirichlet oracle: g on [-B, B]^2 x Z/h with zero outside, by CG.
class OracleSolution {
 public:
  OracleSolution(const SlabParams& p, std::int64_t box_radius, std::vector<double> values,
                 SolveStats stats);
  // Value at displacement x from the source.
  double at(const SlabPoint& x) const;
  std::int64_t box_radius() const { return B_; }
  const SolveStats& stats() const { return stats_; }

 private:
  SlabParams p_;
  std::int64_t B_;
  std::vector<double> v_;
  SolveStats stats_;
};

OracleSolution solve_oracle(const SlabParams& p, std::int64_t box_radius, double rel_tol = 1e-10);
double g_oracle(const SlabPoint& x, const SlabParams& p, std::int64_t box_radius = 0);

// Finite domain complementary to a killing set K.
class KilledDomain {
 public:
  enum class Kind { kComplementOfBall, kExplicit, kEmpty };

  static KilledDomain complement_of_ball(const SlabPoint& x0, double r, const SlabParams& p);
  static KilledDomain explicit_domain(const Region& domain);
  // No killing set: the truncated box of half-width box_radius around x0.
  static KilledDomain empty(const SlabPoint& x0, std::int64_t box_radius, const SlabParams& p);

  Kind kind() const { return kind_; }
  const Region& domain() const { return domain_; }
  const lattice::Box& box() const { return box_; }
  // 1 on domain sites of box().
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  bool contains(const SlabPoint& x) const {
    return box_.contains(x) && mask_[box_.index(x)] != 0;
  }
  const SlabParams& params() const { return domain_.params; }
  const std::string& describe() const { return desc_; }

 private:
  KilledDomain(Kind k, Region d, lattice::Box box, std::vector<std::uint8_t> mask, std::string desc);
  Kind kind_;
  Region domain_;
  lattice::Box box_;
  std::vector<std::uint8_t> mask_;
  std::string desc_;
};

// Solves L u = f on the domain with u = 0 on K; vectors live on box().
std::vector<double> solve_killed(const KilledDomain& kd, const std::vector<double>& f,
                                 double rel_tol = 1e-12, SolveStats* stats = nullptr);

double killed_green(const SlabPoint& x1, const SlabPoint& x2, const KilledDomain& kd);

struct HarnackReport {
  double ratio = 0;
  double max_harmonic_residual = 0;
  std::vector<SlabPoint> sources;
};
HarnackReport harnack(std::int64_t R, double t, const SlabParams& p);
double harnack_ratio(std::int64_t R, double t, const SlabParams& p);

// Gaussian kernel (d / (2 pi r t))^{d/2} exp(-d |y|^2 / (2 r t)).
double gaussian_kernel(const std::vector<std::int64_t>& y, double t, double r);
// P(Y_t = y) for the rate-r walk on Z^d, by periodic trapezoid quadrature of
// each coordinate's characteristic function.
double heat_kernel(const std::vector<std::int64_t>& y, double t, double r);
// int_M^inf |P(Y_t = y) - p(y, t)| dt.
double lclt_error(const std::vector<std::int64_t>& y, double M, int d, double r);

struct VariancePrediction {
  double log_branch = 0;    // (3/pi) log N / h
  double bulk_branch = 0;   // C1 + (3/pi) log N / h
  double value = 0;         // the branch selected by log N / h
};
VariancePrediction variance_prediction(const SlabParams& p);

// (c/2) sum_{k != 0} r_k^{-1} exp(-sqrt(6) r_k), r_k = sqrt(ly^2 + (lz + c k)^2).
double k_limit_series(double c_h, double ly, double lz);

// Asymptotic comparison profile: (3/pi) K0(sqrt6 (|y| v h)/N)/h + g_Z3-like
// decay with the 3-D Green's function approximated by 3/(2 pi |x|).
double asymptotic_profile(const SlabPoint& x, const SlabParams& p);
// Sandwich denominator 1/(|x| v 1) + K0((|y| v h)/N)/h.
double sandwich_profile(const SlabPoint& x, const SlabParams& p);

}  // namespace slabgff::greens
