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

#include "slabgff/gff.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "fft.hpp"
#include "slabgff/capacity.hpp"
#include "slabgff/errors.hpp"
#include "slabgff/parallel.hpp"
#include "slabgff/predictions.hpp"
#include "slabgff/rng.hpp"

namespace slabgff::gff {
namespace {
constexpr double kPi = 3.14159265358979323846;

std::int64_t wrap(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

struct Incident {
  std::size_t edge;
  SlabPoint other;  // unwrapped
  double c;
};

// Edges at x (unwrapped coordinates).
int incident(const TorusBox& box, const SlabPoint& x, Incident out[6]) {
  int k = 0;
  const std::size_t s = box.index(x);
  const SlabPoint fw[3] = {{x.y1 + 1, x.y2, x.z}, {x.y1, x.y2 + 1, x.z}, {x.y1, x.y2, (x.z + 1) % box.h}};
  const SlabPoint bw[3] = {{x.y1 - 1, x.y2, x.z}, {x.y1, x.y2 - 1, x.z}, {x.y1, x.y2, (x.z + box.h - 1) % box.h}};
  for (int d = 0; d < 3; ++d) {
    if (edge_exists(box, s, d)) out[k++] = {edge_id(box, s, d), fw[d], edge_conductance(box, d)};
    const std::size_t sb = box.index(bw[d]);
    if (edge_exists(box, sb, d)) out[k++] = {edge_id(box, sb, d), bw[d], edge_conductance(box, d)};
  }
  return k;
}

double edge_uniform(std::uint64_t seed, std::uint64_t sample, std::size_t e) {
  return rng::uniforms_at(seed, rng::Domain::kEdge, sample, e)[0];
}

}  // namespace

TorusBox TorusBox::make(std::int64_t M, const SlabParams& p) {
  if (M < 8 * p.N) throw PreconditionError("TorusBox: need M >= 8 N");
  if (M > (std::int64_t(1) << 20)) throw PreconditionError("TorusBox: M too large");
  TorusBox b;
  b.M = M;
  b.h = p.h;
  b.params = p;
  return b;
}

std::size_t TorusBox::index(std::int64_t y1, std::int64_t y2, int z) const {
  return (std::size_t(wrap(y1, M)) * std::size_t(M) + std::size_t(wrap(y2, M))) * std::size_t(h) +
         std::size_t(wrap(z, h));
}

double torus_eigenvalue(const TorusBox& box, std::int64_t k1, std::int64_t k2, int k3) {
  const double M = double(box.M);
  return box.params.killing() + 1.0 -
         (std::cos(2 * kPi * double(k1) / M) + std::cos(2 * kPi * double(k2) / M) +
          std::cos(2 * kPi * double(k3) / double(box.h))) /
             3.0;
}

FieldSample sample_field(const TorusBox& box, std::uint64_t seed, std::uint64_t sample) {
  const int M = int(box.M), h = box.h;
  detail::RealFft3 fft(M, M, h);
  rng::Stream s(seed, rng::Domain::kField, sample);
  double* r = fft.real();
  const std::size_t n = fft.real_size();
  for (std::size_t i = 0; i < n; ++i) r[i] = s.normal();
  fft.forward();
  auto* spec = fft.spectrum();
  const int hc = h / 2 + 1;
  std::vector<double> c1(M), c3(hc);
  for (int k = 0; k < M; ++k) c1[k] = std::cos(2 * kPi * k / M);
  for (int k = 0; k < hc; ++k) c3[k] = std::cos(2 * kPi * k / h);
  const double base = box.params.killing() + 1.0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int k = 0; k < hc; ++k) {
        const double ev = base - (c1[a] + c1[b] + c3[k]) / 3.0;
        spec[(std::size_t(a) * M + b) * hc + k] *= 1.0 / std::sqrt(ev);
      }
  fft.backward();
  FieldSample f;
  f.seed = seed;
  f.sample = sample;
  f.box = box;
  f.values.assign(r, r + n);
  const double scale = 1.0 / double(n);
  for (auto& v : f.values) v *= scale;
  return f;
}

double torus_green(const TorusBox& box, const SlabPoint& x) {
  const std::int64_t M = box.M;
  const int h = box.h;
  // sine parts cancel against the even eigenvalues
  std::vector<double> c1(M), c2(M), c3(h);
  for (std::int64_t a = 0; a < M; ++a) {
    c1[a] = std::cos(2 * kPi * double(wrap(a * x.y1, M)) / double(M));
    c2[a] = std::cos(2 * kPi * double(wrap(a * x.y2, M)) / double(M));
  }
  for (int k = 0; k < h; ++k) c3[k] = std::cos(2 * kPi * double(wrap(std::int64_t(k) * x.z, h)) / double(h));
  double s = 0;
  for (std::int64_t a = 0; a < M; ++a)
    for (std::int64_t b = 0; b < M; ++b)
      for (int k = 0; k < h; ++k) s += c1[a] * c2[b] * c3[k] / torus_eigenvalue(box, a, b, k);
  return s / double(box.sites());
}

std::size_t edge_id(const TorusBox&, std::size_t site, int dir) { return 3 * site + std::size_t(dir); }

bool edge_exists(const TorusBox& box, std::size_t site, int dir) {
  if (dir < 2) return true;
  if (box.h == 1) return false;
  if (box.h == 2) return site % 2 == 0;
  return true;
}

double edge_conductance(const TorusBox& box, int dir) {
  return dir == 2 && box.h == 2 ? 1.0 / 3.0 : 1.0 / 6.0;
}

double open_probability(double phi1, double phi2, double c) {
  if (!(phi1 >= 0) || !(phi2 >= 0)) return 0.0;
  return -std::expm1(-2.0 * c * phi1 * phi2);
}

EdgeBitmap percolate(const FieldSample& field, std::uint64_t seed) {
  const auto& box = field.box;
  EdgeBitmap bm;
  bm.open.assign(3 * box.sites(), 0);
  const std::int64_t M = box.M;
  for (std::int64_t a = 0; a < M; ++a)
    for (std::int64_t b = 0; b < M; ++b)
      for (int z = 0; z < box.h; ++z) {
        const SlabPoint x{a, b, z};
        const std::size_t s = box.index(x);
        const SlabPoint nb[3] = {{a + 1, b, z}, {a, b + 1, z}, {a, b, (z + 1) % box.h}};
        for (int d = 0; d < 3; ++d) {
          if (!edge_exists(box, s, d)) continue;
          const double p = open_probability(field.values[s], field.values[box.index(nb[d])], edge_conductance(box, d));
          if (p > 0 && edge_uniform(seed, field.sample, edge_id(box, s, d)) < p) bm.open[edge_id(box, s, d)] = 1;
        }
      }
  return bm;
}

namespace {

template <class IsOpen>
ClusterResult explore(const FieldSample& field, IsOpen&& is_open, double stop_norm, bool record_boundary) {
  const auto& box = field.box;
  ClusterResult res;
  res.vertices.params = box.params;
  const SlabPoint origin{};
  if (!(field.at(origin) >= 0)) return res;
  res.contains_origin = true;
  std::unordered_map<std::size_t, std::size_t> seen;
  res.vertices.points.push_back(origin);
  res.phi.push_back(field.at(origin));
  seen.emplace(box.index(origin), 0);
  const std::int64_t half = box.M / 2;
  if (res.max_norm_reached >= stop_norm) {
    res.stopped_early = true;
    return res;
  }
  Incident inc[6];
  for (std::size_t head = 0; head < res.vertices.points.size(); ++head) {
    const SlabPoint x = res.vertices.points[head];
    const double px = res.phi[head];
    const int k = incident(box, x, inc);
    for (int e = 0; e < k; ++e) {
      const SlabPoint& y = inc[e].other;
      const std::size_t sy = box.index(y);
      const double py = field.values[sy];
      if (is_open(inc[e].edge, px, py, inc[e].c)) {
        const auto it = seen.find(sy);
        if (it != seen.end()) {
          const auto& q = res.vertices.points[it->second];
          if (q.y1 != y.y1 || q.y2 != y.y2) {
            res.wrap_flagged = true;
            return res;
          }
          continue;
        }
        if (std::abs(y.y1) >= half || std::abs(y.y2) >= half) {
          res.wrap_flagged = true;
          return res;
        }
        seen.emplace(sy, res.vertices.points.size());
        res.vertices.points.push_back(y);
        res.phi.push_back(py);
        res.max_norm_reached = std::max(res.max_norm_reached, slab::slab_norm(y, box.h));
        if (res.max_norm_reached >= stop_norm) {
          res.stopped_early = true;
          return res;
        }
      } else if (record_boundary) {
        res.boundary.push_back({head, y, px, py, inc[e].c, inc[e].edge});
      }
    }
  }
  if (record_boundary) {
    std::erase_if(res.boundary, [&](const BoundaryEdge& b) { return seen.count(box.index(b.outer)) > 0; });
  }
  return res;
}

}  // namespace

ClusterResult origin_cluster(const FieldSample& field, const EdgeBitmap& edges) {
  if (edges.open.size() != 3 * field.box.sites()) throw PreconditionError("origin_cluster: bitmap size mismatch");
  return explore(
      field, [&](std::size_t e, double, double, double) { return edges.open[e] != 0; },
      std::numeric_limits<double>::infinity(), true);
}

ClusterResult explore_origin_cluster(const FieldSample& field, std::uint64_t seed, double stop_norm) {
  return explore(
      field,
      [&](std::size_t e, double a, double b, double c) {
        const double p = open_probability(a, b, c);
        return p > 0 && edge_uniform(seed, field.sample, e) < p;
      },
      stop_norm, true);
}

namespace {

void check_flagged(std::size_t flagged, std::size_t n, double max_fraction) {
  if (double(flagged) > max_fraction * double(n)) {
    std::ostringstream os;
    os << "box too small: " << flagged << " of " << n << " samples reached the wrap guard";
    throw PreconditionError(os.str());
  }
}

void attach_bands(OneArmEstimate& est) {
  if (est.R < 1) return;
  auto in = predictions::PredictionInput::make(est.N, est.h, double(est.R), est.g0);
  const auto& fc = in.fitted();
  if (fc.find("onearm_c") && fc.find("onearm_C")) {
    const auto b = predictions::theta_band(in, predictions::BandKind::kThm11);
    est.prediction_band = {b.lo, b.hi, b.label};
  }
  if (double(est.N) > std::max<double>(double(est.R), est.h) && predictions::flatness_holds(in)) {
    const auto b = predictions::theta_band(in, predictions::BandKind::kThm41);
    est.flat_band = Band{b.lo, b.hi, b.label};
  }
}

}  // namespace

std::vector<double> origin_reaches(const TorusBox& box, std::uint64_t seed, std::uint64_t first,
                                   std::size_t count, double stop_norm, int threads) {
  std::vector<double> reach(count, kNoCluster);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto f = sample_field(box, seed, first + i);
    const auto c = explore_origin_cluster(f, seed, stop_norm);
    if (!c.contains_origin) return;
    reach[i] = c.wrap_flagged ? kWrapFlagged : c.max_norm_reached;
  });
  return reach;
}

std::vector<OneArmEstimate> one_arm_from_reaches(const TorusBox& box, const std::vector<std::int64_t>& radii,
                                                 const std::vector<double>& reach,
                                                 const MonteCarloOptions& opt) {
  if (reach.empty()) throw PreconditionError("one_arm: no samples");
  const std::size_t nsamples = reach.size();
  const std::size_t flagged = std::size_t(std::count(reach.begin(), reach.end(), kWrapFlagged));
  check_flagged(flagged, nsamples, opt.max_flagged_fraction);
  const std::size_t valid = nsamples - flagged;
  const double g0 = greens::GreenEvaluator(box.params).g(SlabPoint{});
  std::vector<OneArmEstimate> out;
  for (auto R : radii) {
    OneArmEstimate est;
    std::size_t hits = 0;
    for (double r : reach)
      if (r >= double(R)) ++hits;
    est.theta_hat = double(hits) / double(valid);
    est.stderr_ = std::sqrt(est.theta_hat * (1 - est.theta_hat) / double(valid));
    est.nsamples = valid;
    est.flagged = flagged;
    est.N = box.params.N;
    est.h = box.h;
    est.R = R;
    est.M = box.M;
    est.g0 = g0;
    attach_bands(est);
    out.push_back(est);
  }
  return out;
}

std::vector<OneArmEstimate> one_arm_radii(std::int64_t N, int h, const std::vector<std::int64_t>& radii,
                                          const TorusBox& box, std::size_t nsamples,
                                          std::uint64_t seed, const MonteCarloOptions& opt) {
  if (box.params.N != N || box.h != h) throw PreconditionError("one_arm: box parameters differ from (N, h)");
  if (radii.empty() || nsamples == 0) throw PreconditionError("one_arm: need radii and samples");
  std::int64_t rmax = 0;
  for (auto R : radii) {
    if (R < 0 || R > 4 * N) throw PreconditionError("one_arm: need 0 <= R <= 4N");
    rmax = std::max(rmax, R);
  }
  return one_arm_from_reaches(box, radii, origin_reaches(box, seed, 0, nsamples, double(rmax), opt.threads), opt);
}

OneArmEstimate one_arm(std::int64_t N, int h, std::int64_t R, const TorusBox& box, std::size_t nsamples,
                       std::uint64_t seed, const MonteCarloOptions& opt) {
  return one_arm_radii(N, h, {R}, box, nsamples, seed, opt).front();
}

CapLawResult cluster_cap_law(std::int64_t N, int h, const TorusBox& box, std::size_t nsamples,
                             std::uint64_t seed, const CapLawOptions& opt) {
  if (box.params.N != N || box.h != h) throw PreconditionError("cluster_cap_law: box parameters differ from (N, h)");
  if (nsamples == 0 || opt.grid_points < 2 || !(opt.gx_min > 1) || !(opt.gx_max > opt.gx_min))
    throw PreconditionError("cluster_cap_law: bad grid or sample count");
  const greens::GreenEvaluator ev(box.params);
  CapLawResult res;
  res.g = ev.g(SlabPoint{});
  res.cable = opt.cable;
  res.nsamples = nsamples;
  const double x_top = opt.gx_max / res.g;
  constexpr double kEmpty = -1.0, kFlagged = -2.0;
  std::vector<double> cap(nsamples, kEmpty);
  parallel_for(nsamples, opt.threads, [&](std::size_t i) {
    const auto f = sample_field(box, seed, i);
    const auto c = explore_origin_cluster(f, seed);
    if (!c.contains_origin) return;
    if (c.wrap_flagged) {
      cap[i] = kFlagged;
      return;
    }
    // Uniform-measure energy bound on a subsample: cap >= |S|^2 / sum_S g.
    const auto& pts = c.vertices.points;
    if (pts.size() > 1500) {
      const std::size_t j = (pts.size() + 1499) / 1500;
      std::vector<SlabPoint> S;
      for (std::size_t k = 0; k < pts.size(); k += j) S.push_back(pts[k]);
      std::int64_t W = 0;
      for (const auto& a : S) W = std::max({W, std::abs(a.y1), std::abs(a.y2)});
      const auto t = ev.table(2 * W);
      double e = 0;
      for (const auto& a : S)
        for (const auto& b : S) e += t->g(a, b);
      if (double(S.size()) * double(S.size()) / e > x_top) {
        cap[i] = HUGE_VAL;
        return;
      }
    }
    if (opt.cable) {
      cap[i] = cable_capacity(c, f, seed, ev).cable;
    } else {
      cap[i] = capacity::capacity_of(pts, ev);
    }
  });
  for (double v : cap) {
    if (v == kEmpty) ++res.empty;
    else if (v == kFlagged) ++res.flagged;
    else res.capacities.push_back(v);
  }
  check_flagged(res.flagged, nsamples, opt.max_flagged_fraction);
  res.valid = res.capacities.size();
  if (res.valid == 0) throw NumericError("cluster_cap_law: no valid samples");
  const auto tail = [&](double x) {
    return double(std::count_if(res.capacities.begin(), res.capacities.end(), [&](double v) { return v > x; })) /
           double(res.valid);
  };
  res.reference_x = opt.gx_min / res.g;
  const double emp0 = tail(res.reference_x);
  const double th0 = predictions::arctan_tail(res.g, res.reference_x);
  for (std::size_t k = 0; k < opt.grid_points; ++k) {
    const double gx = opt.gx_min * std::pow(opt.gx_max / opt.gx_min, double(k) / double(opt.grid_points - 1));
    CapLawRow row;
    row.x = gx / res.g;
    row.raw_tail = tail(row.x);
    row.empirical_tail = emp0 > 0 ? row.raw_tail / emp0 : 0.0;
    row.arctan_tail = predictions::arctan_tail(res.g, row.x) / th0;
    res.sup_rel_deviation = std::max(res.sup_rel_deviation, std::fabs(row.empirical_tail - row.arctan_tail) / row.arctan_tail);
    res.rows.push_back(row);
  }
  return res;
}

JointResult capped_crossing_joint(std::int64_t N, int h, std::int64_t R, const std::vector<double>& s_values,
                                  const TorusBox& box, std::size_t nsamples, std::uint64_t seed,
                                  const MonteCarloOptions& opt) {
  if (box.params.N != N || box.h != h) throw PreconditionError("capped_crossing_joint: box parameters differ from (N, h)");
  if (R < 1 || R > 4 * N || nsamples == 0) throw PreconditionError("capped_crossing_joint: need 1 <= R <= 4N and samples");
  const greens::GreenEvaluator ev(box.params);
  constexpr double kNone = -1.0, kFlagged = -2.0;
  std::vector<double> cap(nsamples, kNone);
  parallel_for(nsamples, opt.threads, [&](std::size_t i) {
    const auto f = sample_field(box, seed, i);
    const auto c = explore_origin_cluster(f, seed);
    if (!c.contains_origin) return;
    if (c.wrap_flagged) {
      cap[i] = kFlagged;
      return;
    }
    if (c.max_norm_reached < double(R)) return;
    std::vector<SlabPoint> inside;
    for (const auto& q : c.vertices.points)
      if (slab::slab_norm(q, h) < double(R)) inside.push_back(q);
    cap[i] = capacity::capacity_of(inside, ev);
  });
  JointResult res;
  res.f_R = slab::f_box(double(R), box.params);
  res.flagged = std::size_t(std::count(cap.begin(), cap.end(), kFlagged));
  check_flagged(res.flagged, nsamples, opt.max_flagged_fraction);
  res.nsamples = nsamples - res.flagged;
  for (double v : cap)
    if (v >= 0) res.crossing_caps.push_back(v);
  res.theta_hat = double(res.crossing_caps.size()) / double(res.nsamples);
  for (double s : s_values) {
    const double thr = s * res.f_R;
    const auto k = std::count_if(res.crossing_caps.begin(), res.crossing_caps.end(), [&](double v) { return v < thr; });
    res.rows.push_back({s, double(k) / double(res.nsamples)});
  }
  return res;
}

CovarianceCheck covariance_self_test(const TorusBox& box, std::size_t nsamples, std::uint64_t seed, int threads) {
  if (nsamples < 2) throw PreconditionError("covariance_self_test: need at least two samples");
  CovarianceCheck out;
  const int h = box.h;
  const std::int64_t offs[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 0, 0},
                                    {3, 1, 0}, {0, 0, 1}, {5, 2, 1}, {8, 0, 0}, {13, 7, 0}};
  for (int k = 0; k < 10; ++k) {
    const SlabPoint a{};
    out.pairs.push_back({a, SlabPoint::make(offs[k][0], offs[k][1], offs[k][2], h)});
  }
  for (int k = 0; k < 10; ++k) {
    const SlabPoint a = SlabPoint::make(17 + 3 * k, -11 + 5 * k, k, h);
    out.pairs.push_back({a, SlabPoint::make(a.y1 + offs[k][1], a.y2 + offs[k][0], a.z + offs[k][2], h)});
  }
  const std::size_t P = out.pairs.size();
  std::vector<double> prod(nsamples * P), origin(nsamples);
  parallel_for(nsamples, threads, [&](std::size_t i) {
    const auto f = sample_field(box, seed, i);
    for (std::size_t k = 0; k < P; ++k) prod[i * P + k] = f.at(out.pairs[k].first) * f.at(out.pairs[k].second);
    origin[i] = f.at(SlabPoint{});
  });
  for (std::size_t k = 0; k < P; ++k) {
    double m = 0, m2 = 0;
    for (std::size_t i = 0; i < nsamples; ++i) {
      const double v = prod[i * P + k];
      const double d = v - m;
      m += d / double(i + 1);
      m2 += d * (v - m);
    }
    const double sd = std::sqrt(m2 / double(nsamples - 1));
    const auto& [a, b] = out.pairs[k];
    const double exact = torus_green(box, slab::difference(b, a, h));
    out.empirical.push_back(m);
    out.exact.push_back(exact);
    out.sigma.push_back(sd / std::sqrt(double(nsamples)));
    out.max_z = std::max(out.max_z, std::fabs(m - exact) / out.sigma.back());
  }
  double m = 0, m2 = 0;
  for (std::size_t i = 0; i < nsamples; ++i) {
    const double d = origin[i] - m;
    m += d / double(i + 1);
    m2 += d * (origin[i] - m);
  }
  out.mean_origin = m;
  out.mean_origin_sigma = std::sqrt(m2 / double(nsamples - 1) / double(nsamples));
  return out;
}

LogFit fit_log_probability(const std::vector<double>& x, const std::vector<double>& p, std::size_t n) {
  if (x.size() != p.size()) throw PreconditionError("fit_log_probability: size mismatch");
  double sw = 0, sx = 0, sy = 0;
  LogFit fit;
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(p[i] > 0) || !(p[i] < 1)) continue;
    w[i] = double(n) * p[i] / (1 - p[i]);
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * std::log(p[i]);
    ++fit.used;
  }
  if (fit.used < 2) throw NumericError("fit_log_probability: fewer than two usable points");
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] == 0) continue;
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (std::log(p[i]) - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

LogFit ols_log_probability(const std::vector<double>& x, const std::vector<double>& p) {
  if (x.size() != p.size()) throw PreconditionError("ols_log_probability: size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p[i] > 0) {
      xs.push_back(x[i]);
      ys.push_back(std::log(p[i]));
    }
  LogFit fit;
  fit.used = xs.size();
  if (fit.used < 2) throw NumericError("ols_log_probability: fewer than two usable points");
  const double n = double(fit.used);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw NumericError("ols_log_probability: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (fit.used > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
  }
  return fit;
}

}  // namespace slabgff::gff
