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

// Exhaustive MILP reference: every binary assignment, each completed by the
// dense reference LP on the continuous variables. Plus a seeded generator of
// small random models.

#ifndef WSNQOS_TESTS_MILP_ORACLE_HPP
#define WSNQOS_TESTS_MILP_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dense_lp_oracle.hpp"
#include "wsnqos/milp.hpp"

namespace wsnqos::oracle {

// Optimal objective by enumeration, nullopt when infeasible. Continuous
// variables must have finite bounds.
inline std::optional<double> enumerate_milp(const MilpModel& model) {
  std::vector<int> binaries;
  std::vector<int> continuous;
  std::vector<int> slot(model.num_variables(), -1);
  for (int k = 0; k < model.num_variables(); ++k) {
    if (model.variables()[k].kind == VarKind::kBinary) {
      binaries.push_back(k);
    } else {
      slot[k] = static_cast<int>(continuous.size());
      continuous.push_back(k);
    }
  }
  const std::size_t nc = continuous.size();
  std::vector<double> full_cost(model.num_variables(), 0.0);
  for (const auto& [v, c] : model.objective()) full_cost[v.index()] += c;

  std::optional<double> best;
  const std::uint64_t count = std::uint64_t{1} << binaries.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<double> fixed(model.num_variables(), 0.0);
    double fixed_cost = 0.0;
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      fixed[binaries[b]] = (mask >> b) & 1U ? 1.0 : 0.0;
      fixed_cost += full_cost[binaries[b]] * fixed[binaries[b]];
    }
    DenseLp lp;
    lp.cost.assign(nc, 0.0);
    for (std::size_t j = 0; j < nc; ++j) {
      lp.cost[j] = full_cost[continuous[j]];
      lp.lower.push_back(model.variables()[continuous[j]].lower);
      lp.upper.push_back(model.variables()[continuous[j]].upper);
    }
    bool violated = false;
    for (const Constraint& c : model.constraints()) {
      DenseRow row{std::vector<double>(nc, 0.0), RowSense::kLe, c.rhs};
      bool has_continuous = false;
      for (const auto& [v, coef] : c.terms) {
        if (slot[v.index()] >= 0) {
          row.coef[slot[v.index()]] += coef;
          has_continuous = true;
        } else {
          row.rhs -= coef * fixed[v.index()];
        }
      }
      row.sense = c.sense == Sense::kLessEqual ? RowSense::kLe
                  : c.sense == Sense::kEqual   ? RowSense::kEq
                                               : RowSense::kGe;
      if (!has_continuous) {
        const double tol = 1e-9;
        if ((row.sense == RowSense::kLe && row.rhs < -tol) ||
            (row.sense == RowSense::kGe && row.rhs > tol) ||
            (row.sense == RowSense::kEq && std::abs(row.rhs) > tol)) {
          violated = true;
          break;
        }
        continue;
      }
      lp.rows.push_back(row);
    }
    if (violated) continue;
    double value = fixed_cost;
    if (nc > 0) {
      const DenseLpResult r = solve_dense_lp(lp);
      if (!r.feasible) continue;
      value += r.objective;
    }
    if (!best || value < *best) best = value;
  }
  return best;
}

struct RandomMilpShape {
  int max_binaries = 12;
  int max_continuous = 6;
  int max_constraints = 20;
};

// Integer data keeps the instances well conditioned. Roughly a quarter of the
// instances end up infeasible, which exercises that path too.
inline MilpModel random_milp(std::uint64_t seed, RandomMilpShape shape = {}) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  MilpModel model;
  const int nb = uniform_int(1, shape.max_binaries);
  const int nc = uniform_int(0, shape.max_continuous);
  const int m = uniform_int(1, shape.max_constraints);
  for (int k = 0; k < nb; ++k) model.add_binary();
  for (int k = 0; k < nc; ++k) {
    const int lo = uniform_int(-4, 0);
    model.add_continuous(lo, lo + uniform_int(1, 8));
  }
  const int n = nb + nc;
  // A reference point makes most rows satisfiable.
  std::vector<double> point(n);
  for (int k = 0; k < n; ++k) {
    const Variable& v = model.variables()[k];
    point[k] = v.kind == VarKind::kBinary
                   ? uniform_int(0, 1)
                   : v.lower + (v.upper - v.lower) * uniform_int(0, 4) / 4.0;
  }
  for (int r = 0; r < m; ++r) {
    LinearExpr terms;
    double activity = 0.0;
    for (int k = 0; k < n; ++k) {
      if (uniform_int(0, 2) != 0) continue;
      const int coef = uniform_int(-5, 5);
      if (coef == 0) continue;
      terms.emplace_back(VarId(k), coef);
      activity += coef * point[k];
    }
    const int kind = uniform_int(0, 9);
    const int slack = uniform_int(-1, 3);
    if (kind < 6) {
      model.add_constraint(terms, Sense::kLessEqual, activity + slack);
    } else if (kind < 9) {
      model.add_constraint(terms, Sense::kGreaterEqual, activity - slack);
    } else {
      model.add_constraint(terms, Sense::kEqual, activity);
    }
  }
  LinearExpr objective;
  for (int k = 0; k < n; ++k) {
    const int coef = uniform_int(-6, 6);
    if (coef != 0) objective.emplace_back(VarId(k), coef);
  }
  model.set_objective(objective);
  return model;
}

}  // namespace wsnqos::oracle

#endif  // WSNQOS_TESTS_MILP_ORACLE_HPP
