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

// Small mixed binary/continuous linear programs and their exact solution by
// best-first branch-and-bound over bounded-variable simplex relaxations.

#ifndef WSNQOS_MILP_HPP
#define WSNQOS_MILP_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wsnqos {

// Model-level tolerances shared by the solver, the decoders and the checkers.
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kObjectiveTol = 1e-6;

class VarId {
 public:
  constexpr VarId() = default;
  constexpr explicit VarId(int index) : index_(index) {}
  constexpr int index() const { return index_; }
  constexpr bool valid() const { return index_ >= 0; }
  friend constexpr auto operator<=>(VarId, VarId) = default;

 private:
  int index_ = -1;
};

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = 0.0;
  std::string name;
};

using LinearExpr = std::vector<std::pair<VarId, double>>;

struct Constraint {
  LinearExpr terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// Thrown while building a model: unknown variables, non-finite data,
// inverted bounds.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Minimization model. Variables and constraints are only ever appended;
// variable bounds may only shrink.
class MilpModel {
 public:
  VarId add_continuous(double lower, double upper, std::string name = {});
  VarId add_binary(std::string name = {});
  // Intersects the bounds of `var` with [lower, upper].
  void tighten_bounds(VarId var, double lower, double upper);
  int add_constraint(LinearExpr terms, Sense sense, double rhs,
                     std::string name = {});
  void set_objective(LinearExpr terms);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  int num_binaries() const;
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }

 private:
  void check_terms(const LinearExpr& terms) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kResourceLimit };

std::string to_string(SolveStatus status);

struct SolveLimits {
  std::int64_t max_nodes = 200'000;
  std::int64_t max_lp_iterations = 100'000;
};

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  // Empty unless an integer-feasible assignment is known (always present when
  // Optimal, possibly present on ResourceLimit).
  std::vector<double> values;
  std::optional<double> objective_value;
  SolveStats stats;

  double value(VarId v) const { return values.at(v.index()); }
};

Solution solve(const MilpModel& model, const SolveLimits& limits = {});

// Independent feasibility re-check of an assignment against the model rows,
// bounds and integrality; reads nothing but the model and the values.
struct FeasibilityReport {
  double max_row_violation = 0.0;
  double max_bound_violation = 0.0;
  double max_integrality_violation = 0.0;
  int worst_row = -1;

  bool feasible(double tol = kFeasibilityTol,
                double int_tol = kIntegralityTol) const {
    return max_row_violation <= tol && max_bound_violation <= tol &&
           max_integrality_violation <= int_tol;
  }
};

FeasibilityReport check_assignment(const MilpModel& model,
                                   std::span<const double> values);

double evaluate(const LinearExpr& expr, std::span<const double> values);

// Debug dump in the LP-file convention (objective, rows, bounds, binaries).
void write_lp_format(std::ostream& out, const MilpModel& model);

}  // namespace wsnqos

#endif  // WSNQOS_MILP_HPP
