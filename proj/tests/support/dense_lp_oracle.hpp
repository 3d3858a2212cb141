// Copyright 2026 The wsnqos Authors.
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

// Test-only reference LP: dense two-phase tableau simplex with Bland's rule.
// Deliberately shares nothing with the production solver (no Eigen, no
// bounded-variable handling, no factorization) so it can serve as an
// independent oracle for small instances.

#ifndef WSNQOS_TESTS_DENSE_LP_ORACLE_HPP
#define WSNQOS_TESTS_DENSE_LP_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace wsnqos::oracle {

enum class RowSense { kLe, kEq, kGe };

struct DenseRow {
  std::vector<double> coef;
  RowSense sense;
  double rhs;
};

struct DenseLp {
  std::vector<double> cost;
  std::vector<double> lower;  // finite
  std::vector<double> upper;  // finite
  std::vector<DenseRow> rows;
};

struct DenseLpResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
};

inline DenseLpResult solve_dense_lp(const DenseLp& lp) {
  constexpr double eps = 1e-10;
  const std::size_t n = lp.cost.size();

  // Shift x = lower + y, y >= 0, and add y <= upper - lower rows.
  std::vector<DenseRow> rows;
  for (const DenseRow& r : lp.rows) {
    DenseRow s = r;
    for (std::size_t j = 0; j < n; ++j) s.rhs -= r.coef[j] * lp.lower[j];
    rows.push_back(s);
  }
  for (std::size_t j = 0; j < n; ++j) {
    DenseRow s{std::vector<double>(n, 0.0), RowSense::kLe,
               lp.upper[j] - lp.lower[j]};
    s.coef[j] = 1.0;
    rows.push_back(s);
  }
  for (DenseRow& r : rows) {
    if (r.rhs < 0) {
      for (double& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      if (r.sense == RowSense::kLe) {
        r.sense = RowSense::kGe;
      } else if (r.sense == RowSense::kGe) {
        r.sense = RowSense::kLe;
      }
    }
  }

  const std::size_t m = rows.size();
  // Columns: y (n), slack/surplus (m), artificial (m).
  const std::size_t cols = n + 2 * m;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(m);
  std::vector<bool> artificial(cols, false);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = rows[i].coef[j];
    t[i][cols] = rows[i].rhs;
    if (rows[i].sense == RowSense::kLe) {
      t[i][n + i] = 1.0;
      basis[i] = n + i;
    } else {
      if (rows[i].sense == RowSense::kGe) t[i][n + i] = -1.0;
      t[i][n + m + i] = 1.0;
      basis[i] = n + m + i;
    }
    artificial[n + m + i] = true;
  }

  auto pivot = [&](std::size_t r, std::size_t c) {
    const double p = t[r][c];
    for (double& v : t[r]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][c] == 0.0) continue;
      const double f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  };

  // Bland's rule on the given cost; returns false if unbounded.
  auto run = [&](const std::vector<double>& cost, bool allow_artificial) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!allow_artificial && artificial[j]) continue;
        double d = cost[j];
        for (std::size_t i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] > eps) {
          const double ratio = t[i][cols] / t[i][enter];
          if (ratio < best - eps ||
              (ratio <= best + eps && leave < m && basis[i] < basis[leave])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  };

  std::vector<double> phase1(cols, 0.0);
  for (std::size_t j = n + m; j < cols; ++j) phase1[j] = 1.0;
  run(phase1, true);
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (artificial[basis[i]]) infeasibility += t[i][cols];
  }
  DenseLpResult result;
  if (infeasibility > 1e-8) return result;
  // Drive zero-valued artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (!artificial[basis[i]]) continue;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (std::abs(t[i][j]) > 1e-9) {
        pivot(i, j);
        break;
      }
    }
  }

  std::vector<double> phase2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.cost[j];
  if (!run(phase2, false)) return result;  // bounded by construction

  result.feasible = true;
  result.x = lp.lower;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] += t[i][cols];
  }
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.cost[j] * result.x[j];
  return result;
}

}  // namespace wsnqos::oracle

#endif  // WSNQOS_TESTS_DENSE_LP_ORACLE_HPP
