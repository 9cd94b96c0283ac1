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

#include <string>
#include <vector>

#include "slabgff/greens.hpp"

namespace slabgff::detail {

struct SystemStats {
  int iterations = 0;
  double rel_residual = 0;
  std::string solver;
};

// Solves sum_j g(x_i, x_j) m_j + d_i m_i = b_i over distinct slab points.
// d may be empty. Sets made of full vertical columns with column-constant
// data are reduced to the horizontal problem with kernel sum_z g.
std::vector<double> solve_green_system(const std::vector<slab::SlabPoint>& pts,
                                       const greens::GreenEvaluator& ev,
                                       const std::vector<double>& diag,
                                       const std::vector<double>& rhs, double rel_tol,
                                       SystemStats* stats = nullptr);

}  // namespace slabgff::detail
