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
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slabgff/greens.hpp"
#include "slabgff/slab.hpp"

namespace slabgff::gff {

using slab::Region;
using slab::SlabParams;
using slab::SlabPoint;

// Periodic M x M x h box standing in for the slab.
struct TorusBox {
  std::int64_t M = 0;
  int h = 1;
  SlabParams params;

  // Requires M >= 8 N.
  static TorusBox make(std::int64_t M, const SlabParams& p);
  std::size_t sites() const { return std::size_t(M) * std::size_t(M) * std::size_t(h); }
  std::size_t index(std::int64_t y1, std::int64_t y2, int z) const;
  std::size_t index(const SlabPoint& x) const { return index(x.y1, x.y2, x.z); }
};

struct FieldSample {
  std::vector<double> values;  // row-major (y1, y2, z), y in [0, M)
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  TorusBox box;

  double at(const SlabPoint& x) const { return values[box.index(x)]; }
};

// Spectral sampler for the massive field with covariance (lambda I - A/6)^{-1}
// on the torus. The noise comes from stream (seed, field, sample).
FieldSample sample_field(const TorusBox& box, std::uint64_t seed, std::uint64_t sample = 0);

// Eigenvalue of lambda I - A/6 at frequency (k1, k2, k3).
double torus_eigenvalue(const TorusBox& box, std::int64_t k1, std::int64_t k2, int k3);

// Torus Green's function at displacement x by direct spectral summation.
double torus_green(const TorusBox& box, const SlabPoint& x);

// Edges of the torus: three per site (+y1, +y2, +z). For h = 1 the vertical
// slot is the self-loop and is never used; for h = 2 only layer 0 carries the
// single vertical edge of weight 1/3.
std::size_t edge_id(const TorusBox& box, std::size_t site, int dir);
bool edge_exists(const TorusBox& box, std::size_t site, int dir);
double edge_conductance(const TorusBox& box, int dir);

// 1 - exp(-2 c phi1 phi2) when both values are nonnegative, else 0.
double open_probability(double phi1, double phi2, double c);

struct EdgeBitmap {
  std::vector<std::uint8_t> open;  // indexed by edge_id
};

// Opens every edge independently with open_probability, using the uniform of
// stream (seed, edge, field.sample) at item edge_id.
EdgeBitmap percolate(const FieldSample& field, std::uint64_t seed);

// A closed edge from a cluster vertex to a vertex outside the cluster.
struct BoundaryEdge {
  std::size_t inner = 0;  // index into ClusterResult::vertices
  SlabPoint outer;        // unwrapped coordinates
  double phi_inner = 0;
  double phi_outer = 0;
  double conductance = 0;
  std::size_t edge = 0;   // torus edge id
};

struct ClusterResult {
  bool contains_origin = false;
  Region vertices;                     // unwrapped, origin first
  std::vector<double> phi;             // field values aligned with vertices
  std::vector<BoundaryEdge> boundary;  // only filled on full exploration
  double max_norm_reached = 0;
  double cap_estimate = 0;  // filled by the callers that need it
  bool wrap_flagged = false;
  bool stopped_early = false;
};

// Component of the origin among open edges between nonnegative vertices,
// from a precomputed bitmap.
ClusterResult origin_cluster(const FieldSample& field, const EdgeBitmap& edges);

// Same cluster, sampling edges lazily from the same streams as percolate.
// Exploration stops once a vertex of norm >= stop_norm is found.
ClusterResult explore_origin_cluster(const FieldSample& field, std::uint64_t seed,
                                     double stop_norm = std::numeric_limits<double>::infinity());

// Cable reach from a vertex with value a > 0 along a cable of length rho whose
// other end has value b, conditioned on the cable not being open: the distance
// to the first zero of the Brownian bridge (variance 2 per unit length).
double cable_reach(double a, double b, double rho, double normal, double u);

struct CableCapacity {
  double vertex = 0;  // capacity of the vertex trace, when requested
  double cable = 0;   // capacity of the cable cluster
  std::size_t system_size = 0;
  std::string solver;
};

// Capacity of the cable cluster spanned by a fully explored cluster: the
// vertex trace plus the partially covered closed boundary cables and killing
// cables, with reaches drawn from stream (seed, reach, sample).
CableCapacity cable_capacity(const ClusterResult& c, const FieldSample& field, std::uint64_t seed,
                             const greens::GreenEvaluator& ev, bool with_vertex = false);

struct Band {
  double lo = 0;
  double hi = 0;
  std::string label;
};

struct OneArmEstimate {
  double theta_hat = 0;
  double stderr_ = 0;
  std::size_t nsamples = 0;  // valid samples
  std::size_t flagged = 0;
  std::int64_t N = 0;
  int h = 0;
  std::int64_t R = 0;
  std::int64_t M = 0;
  double g0 = 0;
  Band prediction_band;                // Thm 1.1 band
  std::optional<Band> flat_band;       // arctan band when the flatness condition holds
};

struct MonteCarloOptions {
  int threads = 0;
  // Largest tolerated fraction of wrap-flagged samples.
  double max_flagged_fraction = 0.01;
};

inline constexpr double kNoCluster = -1.0;
inline constexpr double kWrapFlagged = -2.0;

// Reach of the origin cluster in samples first, ..., first + count - 1: the
// largest norm seen before exploration stopped at stop_norm, or kNoCluster /
// kWrapFlagged.
std::vector<double> origin_reaches(const TorusBox& box, std::uint64_t seed, std::uint64_t first,
                                   std::size_t count, double stop_norm, int threads = 0);

// One-arm estimates from precomputed reaches.
std::vector<OneArmEstimate> one_arm_from_reaches(const TorusBox& box, const std::vector<std::int64_t>& radii,
                                                 const std::vector<double>& reaches,
                                                 const MonteCarloOptions& opt = {});

OneArmEstimate one_arm(std::int64_t N, int h, std::int64_t R, const TorusBox& box,
                       std::size_t nsamples, std::uint64_t seed, const MonteCarloOptions& opt = {});

// Several radii on common samples.
std::vector<OneArmEstimate> one_arm_radii(std::int64_t N, int h, const std::vector<std::int64_t>& radii,
                                          const TorusBox& box, std::size_t nsamples,
                                          std::uint64_t seed, const MonteCarloOptions& opt = {});

struct CapLawRow {
  double x = 0;
  double empirical_tail = 0;  // normalised at the reference point
  double arctan_tail = 0;     // normalised at the reference point
  double raw_tail = 0;        // P(cap > x | phi_0 >= 0)
};

struct CapLawResult {
  std::vector<CapLawRow> rows;
  double g = 0;
  double reference_x = 0;
  double sup_rel_deviation = 0;
  std::size_t nsamples = 0;
  std::size_t empty = 0;    // phi_0 < 0
  std::size_t flagged = 0;
  std::size_t valid = 0;    // nonempty, not flagged
  bool cable = true;
  std::vector<double> capacities;  // per valid sample, +inf when above the grid
};

struct CapLawOptions {
  bool cable = true;
  std::size_t grid_points = 40;
  double gx_min = 1.5;
  double gx_max = 20.0;
  int threads = 0;
  double max_flagged_fraction = 0.01;
};

CapLawResult cluster_cap_law(std::int64_t N, int h, const TorusBox& box, std::size_t nsamples,
                             std::uint64_t seed, const CapLawOptions& opt = {});

struct JointRow {
  double s = 0;
  double probability = 0;
};

struct JointResult {
  std::vector<JointRow> rows;
  double theta_hat = 0;
  double f_R = 0;
  std::size_t nsamples = 0;
  std::size_t flagged = 0;
  std::vector<double> crossing_caps;  // cap(C cap B_R) of crossing samples
};

// P(0 <-> dB_R, cap(C cap B_R) < s F(R)) for each s.
JointResult capped_crossing_joint(std::int64_t N, int h, std::int64_t R,
                                  const std::vector<double>& s_values, const TorusBox& box,
                                  std::size_t nsamples, std::uint64_t seed,
                                  const MonteCarloOptions& opt = {});

struct CovarianceCheck {
  std::vector<std::pair<SlabPoint, SlabPoint>> pairs;
  std::vector<double> empirical, exact, sigma;
  double max_z = 0;  // max |empirical - exact| / sigma
  double mean_origin = 0;
  double mean_origin_sigma = 0;
};

// Empirical covariances of 20 probe pairs against torus_green.
CovarianceCheck covariance_self_test(const TorusBox& box, std::size_t nsamples, std::uint64_t seed,
                                     int threads = 0);

struct LogFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  std::size_t used = 0;
};

// Weighted least squares of log p against x with binomial weights n p / (1 - p);
// zero probabilities are skipped.
LogFit fit_log_probability(const std::vector<double>& x, const std::vector<double>& p, std::size_t n);

// Ordinary least squares of log p against x over the points with p > 0.
LogFit ols_log_probability(const std::vector<double>& x, const std::vector<double>& p);

}  // namespace slabgff::gff
