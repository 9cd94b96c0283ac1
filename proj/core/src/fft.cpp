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

#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace slabgff::detail {
namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft3::RealFft3(int n0, int n1, int n2) : n0_(n0), n1_(n1), n2_(n2) {
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * real_size()));
  spec_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * complex_size()));
  if (!real_ || !spec_) {
    fftw_free(real_);
    fftw_free(spec_);
    throw std::bad_alloc();
  }
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto* c = reinterpret_cast<fftw_complex*>(spec_);
  fwd_ = fftw_plan_dft_r2c_3d(n0, n1, n2, real_, c, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r_3d(n0, n1, n2, c, real_, FFTW_ESTIMATE);
}

RealFft3::~RealFft3() {
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
  fftw_free(real_);
  fftw_free(spec_);
}

void RealFft3::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void RealFft3::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

int fft_size(int n) {
  for (int m = n > 1 ? n : 1;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

}  // namespace slabgff::detail
