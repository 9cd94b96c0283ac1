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

#include <complex>
#include <cstddef>
#include <memory>

namespace slabgff::detail {

// Real 3-D transform pair on an n0 x n1 x n2 row-major array with FFTW
// buffers. Plans use FFTW_ESTIMATE so results are bitwise reproducible.
class RealFft3 {
 public:
  RealFft3(int n0, int n1, int n2);
  ~RealFft3();
  RealFft3(const RealFft3&) = delete;
  RealFft3& operator=(const RealFft3&) = delete;

  std::size_t real_size() const { return std::size_t(n0_) * n1_ * n2_; }
  std::size_t complex_size() const { return std::size_t(n0_) * n1_ * (n2_ / 2 + 1); }
  double* real() { return real_; }
  std::complex<double>* spectrum() { return spec_; }
  int n0() const { return n0_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }

  // real -> spectrum, and spectrum -> real (unnormalised; destroys spectrum).
  void forward();
  void backward();

 private:
  int n0_, n1_, n2_;
  double* real_ = nullptr;
  std::complex<double>* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// Smallest m >= n whose prime factors are 2, 3, 5, 7.
int fft_size(int n);

}  // namespace slabgff::detail
