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

#include <array>
#include <cstdint>

namespace slabgff::rng {

using Block = std::array<std::uint32_t, 4>;

// Philox4x32 with 10 rounds.
Block philox4x32(Block ctr, std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// Purpose tags keep streams for different uses apart.
enum class Domain : std::uint32_t {
  kField = 1,
  kEdge = 2,
  kReach = 3,
  kWalk = 4,
  kTest = 5,
  kRandomSet = 6,
};

// Uniform in the open interval (0, 1) from 64 random bits.
inline double to_unit(std::uint64_t bits) {
  return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential stream keyed by (seed, domain, stream id). Independent of any
// other stream and of the order streams are consumed in.
class Stream {
 public:
  Stream(std::uint64_t seed, Domain domain, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform() { return to_unit(next_u64()); }
  double normal();
  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint32_t, 2> key_;
  Block ctr_;
  Block buf_{};
  int used_ = 4;
  double spare_ = 0;
  bool has_spare_ = false;
};

// Random access: two uniforms for item `item` within stream `stream_id`.
std::array<double, 2> uniforms_at(std::uint64_t seed, Domain domain, std::uint64_t stream_id,
                                  std::uint64_t item, std::uint32_t round = 0);

// Standard normal from two uniforms (first Box-Muller output).
double box_muller(double u1, double u2);

// Inverse Gaussian IG(mean, shape) from a standard normal and a uniform.
double inverse_gaussian(double mean, double shape, double normal, double u);

}  // namespace slabgff::rng
