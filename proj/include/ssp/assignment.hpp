//
// Copyright 2026 The ssp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "ssp/error.hpp"

namespace ssp {

// Minimum-cost perfect matching on a dense n x n cost matrix (row-major).
// Shortest augmenting path with dual potentials, O(n^3).  Scratch is
// allocated per call; re-entrant.
inline double solve_assignment(const std::vector<double>& cost, std::size_t n,
                               std::vector<std::size_t>* matching = nullptr) {
  require(n >= 1, "assignment: empty problem");
  require(cost.size() == n * n, "assignment: cost matrix must be n x n");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based arrays; p[j] = row matched to column j, p[0] = row being placed.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      const double* row = cost.data() + (i0 - 1) * n;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  if (matching) matching->assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    total += cost[(p[j] - 1) * n + (j - 1)];
    if (matching) (*matching)[p[j] - 1] = j - 1;
  }
  return total;
}

}  // namespace ssp
