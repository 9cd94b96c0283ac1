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

#include "kernel_system.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_map>

#include "fft.hpp"
#include "slabgff/errors.hpp"

namespace slabgff::detail {
namespace {

using slab::SlabPoint;

constexpr std::size_t kDenseDirect = 2000;
constexpr std::size_t kDenseIterative = 6000;
constexpr std::size_t kDenseWithDiagonal = 12000;

struct Problem {
  std::vector<std::int64_t> y1, y2;
  std::vector<int> z;
  int hz = 1;  // vertical size of the (possibly reduced) problem
  std::vector<double> d, b;
  std::size_t size() const { return y1.size(); }
};

class Kernel {
 public:
  Kernel(std::shared_ptr<const greens::GreenTable> t, bool reduced) : t_(std::move(t)) {
    if (!reduced) return;
    const std::int64_t W = t_->extent();
    k2_.resize(std::size_t((W + 1) * (W + 1)));
    for (std::int64_t a = 0; a <= W; ++a)
      for (std::int64_t b = 0; b <= W; ++b) {
        double s = 0;
        for (int c = 0; c < t_->height(); ++c) s += t_->g(a, b, c);
        k2_[std::size_t(a * (W + 1) + b)] = s;
      }
  }
  double operator()(std::int64_t a, std::int64_t b, int c) const {
    if (k2_.empty()) return t_->g(a, b, c);
    return k2_[std::size_t(std::abs(a) * (t_->extent() + 1) + std::abs(b))];
  }

 private:
  std::shared_ptr<const greens::GreenTable> t_;
  std::vector<double> k2_;
};

int zdiff(int a, int b, int hz) {
  int d = a - b;
  return d < 0 ? d + hz : d;
}

Eigen::MatrixXd dense_matrix(const Problem& pb, const Kernel& k) {
  const std::size_t n = pb.size();
  Eigen::MatrixXd K(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) {
      const double v = k(pb.y1[i] - pb.y1[j], pb.y2[i] - pb.y2[j], zdiff(pb.z[i], pb.z[j], pb.hz));
      K(i, j) = v;
      K(j, i) = v;
    }
  if (!pb.d.empty())
    for (std::size_t i = 0; i < n; ++i) K(i, i) += pb.d[i];
  return K;
}

// Sparse restriction of L to the point set; G^{-1} is close to it.
class Preconditioner {
 public:
  Preconditioner(const Problem& pb, int h, double lambda) {
    const std::size_t n = pb.size();
    std::unordered_map<SlabPoint, std::int64_t, slab::SlabPointHash> at;
    at.reserve(n);
    for (std::size_t i = 0; i < n; ++i) at.emplace(SlabPoint{pb.y1[i], pb.y2[i], pb.z[i]}, std::int64_t(i));
    diag_ = pb.hz == 1 && h > 1 ? lambda - 1.0 / 3.0 : lambda;
    start_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      const SlabPoint x{pb.y1[i], pb.y2[i], pb.z[i]};
      std::vector<SlabPoint> nb;
      if (pb.hz == 1 && h > 1) {
        nb = {{x.y1 + 1, x.y2, 0}, {x.y1 - 1, x.y2, 0}, {x.y1, x.y2 + 1, 0}, {x.y1, x.y2 - 1, 0}};
      } else {
        const auto a = slab::neighbours(x, h);
        nb.assign(a.begin(), a.end());
      }
      for (const auto& q : nb) {
        const auto it = at.find(q);
        if (it != at.end()) nbr_.push_back(std::size_t(it->second));
      }
      start_.push_back(nbr_.size());
    }
  }
  void apply(const std::vector<double>& r, std::vector<double>& out) const {
    const std::size_t n = r.size();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t e = start_[i]; e < start_[i + 1]; ++e) s += r[nbr_[e]];
      out[i] = diag_ * r[i] - s / 6.0;
    }
  }

 private:
  double diag_ = 1;
  std::vector<std::size_t> start_, nbr_;
};

class FftOperator {
 public:
  FftOperator(const Problem& pb, const Kernel& k) : pb_(pb) {
    const auto [a0, a1] = std::minmax_element(pb.y1.begin(), pb.y1.end());
    const auto [b0, b1] = std::minmax_element(pb.y2.begin(), pb.y2.end());
    lo1_ = *a0;
    lo2_ = *b0;
    const std::int64_t E1 = *a1 - *a0, E2 = *b1 - *b0;
    fft_ = std::make_unique<RealFft3>(fft_size(int(2 * E1 + 1)), fft_size(int(2 * E2 + 1)), pb.hz);
    const int P1 = fft_->n0(), P2 = fft_->n1(), H = fft_->n2();
    double* r = fft_->real();
    std::fill(r, r + fft_->real_size(), 0.0);
    for (int i = 0; i < P1; ++i) {
      const std::int64_t di = i <= E1 ? i : i - P1;
      if (std::abs(di) > E1) continue;
      for (int j = 0; j < P2; ++j) {
        const std::int64_t dj = j <= E2 ? j : j - P2;
        if (std::abs(dj) > E2) continue;
        for (int c = 0; c < H; ++c) r[(std::size_t(i) * P2 + j) * H + c] = k(di, dj, c);
      }
    }
    fft_->forward();
    khat_.assign(fft_->spectrum(), fft_->spectrum() + fft_->complex_size());
    scale_ = 1.0 / double(fft_->real_size());
  }
  void apply(const std::vector<double>& x, std::vector<double>& out) {
    double* r = fft_->real();
    std::fill(r, r + fft_->real_size(), 0.0);
    const std::size_t n = pb_.size();
    for (std::size_t i = 0; i < n; ++i) r[idx(i)] = x[i];
    fft_->forward();
    auto* s = fft_->spectrum();
    for (std::size_t i = 0; i < khat_.size(); ++i) s[i] *= khat_[i];
    fft_->backward();
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = r[idx(i)] * scale_;
  }

 private:
  std::size_t idx(std::size_t i) const {
    return (std::size_t(pb_.y1[i] - lo1_) * std::size_t(fft_->n1()) + std::size_t(pb_.y2[i] - lo2_)) *
               std::size_t(fft_->n2()) +
           std::size_t(pb_.z[i]);
  }
  const Problem& pb_;
  std::int64_t lo1_ = 0, lo2_ = 0;
  std::unique_ptr<RealFft3> fft_;
  std::vector<std::complex<double>> khat_;
  double scale_ = 1;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class MatVec>
std::vector<double> pcg(const Problem& pb, MatVec&& mv, const Preconditioner& pre, double rel_tol,
                        SystemStats& st) {
  const std::size_t n = pb.size();
  std::vector<double> x(n, 0.0), r = pb.b, z, p, Ap;
  const double bnorm = std::sqrt(dot(pb.b, pb.b));
  if (bnorm == 0) return x;
  pre.apply(r, z);
  p = z;
  double rz = dot(r, z);
  const int max_iter = 5000;
  for (int it = 1; it <= max_iter; ++it) {
    mv(p, Ap);
    const double alpha = rz / dot(p, Ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double res = std::sqrt(dot(r, r)) / bnorm;
    st.iterations = it;
    st.rel_residual = res;
    if (res <= rel_tol) return x;
    pre.apply(r, z);
    const double rz1 = dot(r, z);
    const double beta = rz1 / rz;
    rz = rz1;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream os;
  os << "n=" << n << " iterations=" << max_iter << " residual=" << st.rel_residual;
  throw NumericError("green system: preconditioned CG did not converge", os.str());
}

}  // namespace

std::vector<double> solve_green_system(const std::vector<SlabPoint>& pts,
                                       const greens::GreenEvaluator& ev,
                                       const std::vector<double>& diag,
                                       const std::vector<double>& rhs, double rel_tol,
                                       SystemStats* stats) {
  const std::size_t n = pts.size();
  const int h = ev.params().h;
  if (rhs.size() != n || (!diag.empty() && diag.size() != n))
    throw PreconditionError("green system: size mismatch");
  SystemStats st;
  if (n == 0) {
    if (stats) *stats = st;
    return {};
  }

  // Column reduction.
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> cols;
  for (std::size_t i = 0; i < n; ++i) cols[{pts[i].y1, pts[i].y2}].push_back(i);
  bool reduced = diag.empty() && h > 1;
  for (const auto& [key, idx] : cols) {
    if (!reduced) break;
    if (idx.size() != std::size_t(h)) reduced = false;
    for (std::size_t i : idx)
      if (rhs[i] != rhs[idx.front()]) reduced = false;
  }

  Problem pb;
  std::int64_t W = 0;
  {
    std::int64_t lo1 = pts[0].y1, hi1 = lo1, lo2 = pts[0].y2, hi2 = lo2;
    for (const auto& q : pts) {
      lo1 = std::min(lo1, q.y1);
      hi1 = std::max(hi1, q.y1);
      lo2 = std::min(lo2, q.y2);
      hi2 = std::max(hi2, q.y2);
    }
    W = std::max(hi1 - lo1, hi2 - lo2);
  }
  if (reduced) {
    pb.hz = 1;
    for (const auto& [key, idx] : cols) {
      pb.y1.push_back(key.first);
      pb.y2.push_back(key.second);
      pb.z.push_back(0);
      pb.b.push_back(rhs[idx.front()]);
    }
  } else {
    pb.hz = h;
    for (std::size_t i = 0; i < n; ++i) {
      pb.y1.push_back(pts[i].y1);
      pb.y2.push_back(pts[i].y2);
      pb.z.push_back(pts[i].z);
    }
    pb.b = rhs;
    pb.d = diag;
  }
  const Kernel kern(ev.table(W), reduced);
  const std::size_t m = pb.size();

  std::vector<double> sol;
  if (m <= kDenseDirect || (!pb.d.empty() && m <= kDenseWithDiagonal)) {
    const Eigen::MatrixXd K = dense_matrix(pb, kern);
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
      throw NumericError("green system: matrix not positive definite", "n=" + std::to_string(m));
    const Eigen::Map<const Eigen::VectorXd> b(pb.b.data(), Eigen::Index(m));
    const Eigen::VectorXd x = llt.solve(b);
    sol.assign(x.data(), x.data() + m);
    st.solver = "dense-cholesky";
    st.iterations = 1;
    st.rel_residual = (K * x - b).norm() / b.norm();
  } else if (!pb.d.empty()) {
    throw PreconditionError("green system with diagonal term: set too large for the dense solver");
  } else {
    const Preconditioner pre(pb, h, ev.params().vertex_weight());
    if (m <= kDenseIterative) {
      const Eigen::MatrixXd K = dense_matrix(pb, kern);
      sol = pcg(
          pb,
          [&](const std::vector<double>& x, std::vector<double>& out) {
            out.resize(m);
            Eigen::Map<const Eigen::VectorXd> xv(x.data(), Eigen::Index(m));
            Eigen::Map<Eigen::VectorXd>(out.data(), Eigen::Index(m)).noalias() = K * xv;
          },
          pre, rel_tol, st);
      st.solver = "dense-pcg";
    } else {
      FftOperator op(pb, kern);
      sol = pcg(
          pb, [&](const std::vector<double>& x, std::vector<double>& out) { op.apply(x, out); }, pre,
          rel_tol, st);
      st.solver = "fft-pcg";
    }
  }
  if (reduced) st.solver += "/columns";
  if (stats) *stats = st;
  if (!reduced) return sol;
  std::vector<double> out(n);
  std::size_t c = 0;
  for (const auto& [key, idx] : cols) {
    for (std::size_t i : idx) out[i] = sol[c];
    ++c;
  }
  return out;
}

}  // namespace slabgff::detail
