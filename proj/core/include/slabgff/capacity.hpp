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
#include <string>
#include <utility>
#include <vector>

#include "slabgff/greens.hpp"
#include "slabgff/slab.hpp"

namespace slabgff::capacity {

using greens::GreenEvaluator;
using greens::KilledDomain;
using slab::Region;
using slab::SlabParams;
using slab::SlabPoint;

struct DiscreteMeasure {
  Region support;
  std::vector<double> weights;

  double mass() const;
  static DiscreteMeasure point_mass(const SlabPoint& x, const SlabParams& p);
  static DiscreteMeasure uniform(const Region& r);
  // Same support, weights divided by the mass.
  DiscreteMeasure normalized() const;
};

enum class Method { kHittingSolve, kVariational, kGreenSystem };
const char* method_name(Method m);

struct Residuals {
  int iterations = 0;
  double solver_residual = 0;
  // |capacity - total mass| (zero by construction; kept for reports)
  double mass_defect = 0;
  // truncation margin of the hitting solve, 0 when not truncated
  std::int64_t box_margin = 0;
  std::string solver;
};

struct EquilibriumSolution {
  Region target;
  std::string killing;  // empty: no killing set
  DiscreteMeasure eq_measure;
  double capacity = 0;
  Method method = Method::kHittingSolve;
  Residuals residuals;
};

// Escape probabilities from the Dirichlet problem for the hitting function,
// e(x) = lambda P_x(escape). Without a killing set the walk is truncated at
// box_radius beyond the extent of A (0 selects 4N); with one, the domain of kd.
EquilibriumSolution equilibrium(const Region& A, const KilledDomain* kd, const SlabParams& p,
                                std::int64_t box_radius = 0);

// Same measure from sum_{x'} g(x, x') e(x') = 1 on A, solved in the infinite slab.
EquilibriumSolution equilibrium_green(const Region& A, const GreenEvaluator& ev,
                                      double rel_tol = 1e-12);

enum class KernelKind { kG, kG2, kG3, kGK };
struct Kernel {
  KernelKind kind = KernelKind::kG;
  const KilledDomain* killed = nullptr;  // required for kGK

  static Kernel g() { return {}; }
  static Kernel killed_by(const KilledDomain& kd) { return {KernelKind::kGK, &kd}; }
};

// Row-major |A| x |A| kernel matrix.
std::vector<double> gram_matrix(const Region& A, const Kernel& k, const GreenEvaluator& ev);

double energy(const DiscreteMeasure& mu, const Kernel& k, const GreenEvaluator& ev);

struct OptConfig {
  // Bound on max_i |mu_i - P(mu - G mu / E)_i| with P the simplex projection.
  double tol = 1e-10;
  int max_iterations = 200000;
  double armijo = 1e-4;
};

struct VariationalResult {
  double value = 0;  // 1 / min energy
  DiscreteMeasure argmin;
  double min_energy = 0;
  int iterations = 0;
  double kkt_residual = 0;
};

VariationalResult cap_variational(const Region& A, const Kernel& k, const GreenEvaluator& ev,
                                  const OptConfig& cfg = {});
// The minimisation itself on a dense positive definite matrix; argmin support
// is left empty.
VariationalResult minimize_energy(const std::vector<double>& gram, std::size_t n,
                                  const OptConfig& cfg = {});

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(const std::vector<double>& v);

// |P_x(H_A < inf) - sum g(x, x') e_A(x')| with the hitting probability from a
// truncated Dirichlet solve and e_A from the infinite-slab system.
double hitting_identity_residual(const SlabPoint& x, const Region& A, const GreenEvaluator& ev,
                                 std::int64_t box_radius = 0);

double cap_line(std::int64_t R, const GreenEvaluator& ev);
double cap_ball(std::int64_t R, const GreenEvaluator& ev);
double cap_disk(std::int64_t R, const GreenEvaluator& ev);

struct RangeTailOptions {
  // Killing set B(x, 2R)^c instead of none.
  bool killed = false;
  // Threshold constant; 0 reads range_c2 from the fitted constants.
  double c2 = 0;
  std::size_t max_points = 10000;
  int threads = 0;
};

struct RangeTailResult {
  std::vector<std::pair<double, double>> table;  // (s, empirical probability)
  std::vector<double> capacities;                 // per walk
  double reference_capacity = 0;                  // cap^K(B(x, R))
  double c2 = 0;
  std::size_t coarsened = 0;                      // walks whose range was subsampled
};

// Walk ranges from the origin up to the exit from B(0, R); probability that
// the range capacity is at most (c2 / s) cap^K(B(0, R)).
RangeTailResult range_capacity_tail(std::int64_t R, const std::vector<double>& s_values,
                                    const GreenEvaluator& ev, std::size_t nsamples,
                                    std::uint64_t seed, const RangeTailOptions& opt = {});

// Capacity of an arbitrary finite set in the infinite slab (green system).
double capacity_of(const std::vector<SlabPoint>& pts, const GreenEvaluator& ev);

}  // namespace slabgff::capacity
