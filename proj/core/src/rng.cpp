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

#include "slabgff/rng.hpp"

#include <cmath>
#include <numbers>

namespace slabgff::rng {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * b;
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

std::array<std::uint32_t, 2> make_key(std::uint64_t seed, Domain d) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(std::uint64_t(d)));
  return {std::uint32_t(k), std::uint32_t(k >> 32)};
}

}  // namespace

Block philox4x32(Block c, std::array<std::uint32_t, 2> k) {
  for (int r = 0; r < 10; ++r) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, Domain domain, std::uint64_t stream_id)
    : key_(make_key(seed, domain)),
      ctr_{0u, 0u, std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)} {}

std::uint64_t Stream::next_u64() {
  if (used_ >= 4) {
    buf_ = philox4x32(ctr_, key_);
    if (++ctr_[0] == 0) ++ctr_[1];
    used_ = 0;
  }
  const std::uint64_t v = (std::uint64_t(buf_[std::size_t(used_)]) << 32) | buf_[std::size_t(used_ + 1)];
  used_ += 2;
  return v;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t Stream::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection.
  while (true) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m = (unsigned __int128)x * n;
    const std::uint64_t lo = std::uint64_t(m);
    if (lo >= n || lo >= (0 - n) % n) return std::uint64_t(m >> 64);
  }
}

std::array<double, 2> uniforms_at(std::uint64_t seed, Domain domain, std::uint64_t stream_id,
                                  std::uint64_t item, std::uint32_t round) {
  auto key = make_key(seed ^ (std::uint64_t(round) << 56), domain);
  key[1] ^= std::uint32_t(stream_id >> 32) * 0x85EBCA6Bu;
  const Block b = philox4x32(
      {std::uint32_t(item), std::uint32_t(item >> 32), std::uint32_t(stream_id), round}, key);
  return {to_unit((std::uint64_t(b[0]) << 32) | b[1]), to_unit((std::uint64_t(b[2]) << 32) | b[3])};
}

double box_muller(double u1, double u2) {
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double inverse_gaussian(double mean, double shape, double normal, double u) {
  const double y = normal * normal;
  const double my = mean * y;
  const double big = mean + mean * my / (2 * shape) +
                     mean / (2 * shape) * std::sqrt(4 * mean * shape * y + my * my);
  const double small = mean * mean / big;
  return u * (mean + small) <= mean ? small : big;
}

}  // namespace slabgff::rng
