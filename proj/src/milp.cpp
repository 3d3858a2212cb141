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

#include "wsnqos/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <queue>

#include "wsnqos/bounded_simplex.hpp"

namespace wsnqos {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vector = Eigen::VectorXd;

// Sums repeated variables and drops zero coefficients.
LinearExpr canonical(const LinearExpr& terms) {
  std::map<int, double> merged;
  for (const auto& [var, coef] : terms) merged[var.index()] += coef;
  LinearExpr out;
  for (const auto& [index, coef] : merged) {
    if (coef != 0.0) out.emplace_back(VarId(index), coef);
  }
  return out;
}

struct Relaxation {
  lp::LpProblem<double> problem;
  Vector lower;
  Vector upper;
  std::vector<int> binaries;
  bool trivially_infeasible = false;
};

Relaxation make_relaxation(const MilpModel& model) {
  Relaxation r;
  const int n = model.num_variables();
  r.lower.resize(n);
  r.upper.resize(n);
  for (int k = 0; k < n; ++k) {
    const Variable& v = model.variables()[k];
    r.lower[k] = v.lower;
    r.upper[k] = v.upper;
    if (v.kind == VarKind::kBinary) r.binaries.push_back(k);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  for (const Constraint& c : model.constraints()) {
    const LinearExpr terms = canonical(c.terms);
    const double lo = c.sense == Sense::kLessEqual ? -kInf : c.rhs;
    const double hi = c.sense == Sense::kGreaterEqual ? kInf : c.rhs;
    if (terms.empty()) {
      if (lo > kFeasibilityTol || hi < -kFeasibilityTol) {
        r.trivially_infeasible = true;
      }
      continue;
    }
    const int row = static_cast<int>(row_lower.size());
    for (const auto& [var, coef] : terms) {
      triplets.emplace_back(row, var.index(), coef);
    }
    row_lower.push_back(lo);
    row_upper.push_back(hi);
  }
  const int m = static_cast<int>(row_lower.size());
  r.problem.matrix.resize(m, n);
  r.problem.matrix.setFromTriplets(triplets.begin(), triplets.end());
  r.problem.matrix.makeCompressed();
  r.problem.row_lower = Eigen::Map<Vector>(row_lower.data(), m);
  r.problem.row_upper = Eigen::Map<Vector>(row_upper.data(), m);
  r.problem.cost = Vector::Zero(n);
  for (const auto& [var, coef] : canonical(model.objective())) {
    r.problem.cost[var.index()] = coef;
  }
  return r;
}

struct Node {
  double bound;
  std::int64_t sequence;
  std::vector<std::pair<int, double>> fixings;
  std::shared_ptr<const lp::Basis> basis;
};

struct NodeOrder {
  bool operator()(const std::shared_ptr<Node>& a,
                  const std::shared_ptr<Node>& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->sequence > b->sequence;
  }
};

// Most fractional binary, lowest index on ties; -1 when all are integral.
int branching_variable(const Vector& x, const std::vector<int>& binaries) {
  int best = -1;
  double best_distance = kIntegralityTol;
  for (int k : binaries) {
    const double frac = x[k] - std::floor(x[k]);
    const double distance = std::min(frac, 1.0 - frac);
    if (distance > best_distance) {
      best_distance = distance;
      best = k;
    }
  }
  return best;
}

const char* sense_token(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "<=";
    case Sense::kEqual:
      return "=";
    case Sense::kGreaterEqual:
      return ">=";
  }
  return "?";
}

std::string lp_name(const MilpModel& model, int k) {
  const std::string& name = model.variables()[k].name;
  return name.empty() ? "x" + std::to_string(k) : name;
}

void write_terms(std::ostream& out, const MilpModel& model,
                 const LinearExpr& terms) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  for (const auto& [var, coef] : terms) {
    out << (coef < 0 ? " - " : " + ") << std::abs(coef) << ' '
        << lp_name(model, var.index());
  }
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kUnbounded:
      return "Unbounded";
    case SolveStatus::kResourceLimit:
      return "ResourceLimit";
  }
  return "Unknown";
}

VarId MilpModel::add_continuous(double lower, double upper, std::string name) {
  if (std::isnan(lower) || std::isnan(upper) || lower == kInf ||
      upper == -kInf) {
    throw ModelError("variable bounds must be numbers with lower < +inf");
  }
  if (lower > upper) throw ModelError("variable lower bound above upper bound");
  variables_.push_back({VarKind::kContinuous, lower, upper, std::move(name)});
  return VarId(num_variables() - 1);
}

VarId MilpModel::add_binary(std::string name) {
  variables_.push_back({VarKind::kBinary, 0.0, 1.0, std::move(name)});
  return VarId(num_variables() - 1);
}

void MilpModel::tighten_bounds(VarId var, double lower, double upper) {
  check_terms({{var, 1.0}});
  if (std::isnan(lower) || std::isnan(upper)) {
    throw ModelError("variable bounds must be numbers");
  }
  Variable& v = variables_[var.index()];
  const double new_lower = std::max(v.lower, lower);
  const double new_upper = std::min(v.upper, upper);
  if (new_lower > new_upper) throw ModelError("tightened bounds are empty");
  v.lower = new_lower;
  v.upper = new_upper;
}

void MilpModel::check_terms(const LinearExpr& terms) const {
  for (const auto& [var, coef] : terms) {
    if (!var.valid() || var.index() >= num_variables()) {
      throw ModelError("unknown variable id " + std::to_string(var.index()));
    }
    if (!std::isfinite(coef)) throw ModelError("non-finite coefficient");
  }
}

int MilpModel::add_constraint(LinearExpr terms, Sense sense, double rhs,
                              std::string name) {
  check_terms(terms);
  if (!std::isfinite(rhs)) throw ModelError("non-finite right-hand side");
  constraints_.push_back({std::move(terms), sense, rhs, std::move(name)});
  return num_constraints() - 1;
}

void MilpModel::set_objective(LinearExpr terms) {
  check_terms(terms);
  objective_ = std::move(terms);
}

int MilpModel::num_binaries() const {
  return static_cast<int>(
      std::count_if(variables_.begin(), variables_.end(), [](const auto& v) {
        return v.kind == VarKind::kBinary;
      }));
}

Solution solve(const MilpModel& model, const SolveLimits& limits) {
  Solution solution;
  Relaxation relax = make_relaxation(model);
  if (relax.trivially_infeasible) {
    solution.status = SolveStatus::kInfeasible;
    return solution;
  }
  lp::BoundedSimplex<double> simplex(relax.problem);

  double incumbent_objective = kInf;
  std::vector<double> incumbent;
  std::int64_t sequence = 0;
  bool hit_limit = false;

  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>,
                      NodeOrder>
      open;
  open.push(std::make_shared<Node>(Node{-kInf, sequence++, {}, nullptr}));

  auto run_lp = [&](const Vector& lower, const Vector& upper,
                    const lp::Basis* warm) {
    auto result =
        simplex.solve(lower, upper, warm, limits.max_lp_iterations);
    solution.stats.lp_iterations += result.iterations;
    return result;
  };

  while (!open.empty()) {
    std::shared_ptr<Node> node = open.top();
    open.pop();
    if (node->bound >= incumbent_objective - kObjectiveTol) continue;
    if (solution.stats.nodes >= limits.max_nodes) {
      hit_limit = true;
      break;
    }
    ++solution.stats.nodes;

    Vector lower = relax.lower;
    Vector upper = relax.upper;
    for (const auto& [k, v] : node->fixings) lower[k] = upper[k] = v;

    auto lp = run_lp(lower, upper, node->basis.get());
    if (lp.status == lp::LpStatus::kInfeasible) continue;
    if (lp.status == lp::LpStatus::kUnbounded) {
      if (node->fixings.empty()) {
        solution.status = SolveStatus::kUnbounded;
        return solution;
      }
      // A child of a bounded relaxation cannot be unbounded.
      hit_limit = true;
      break;
    }
    if (lp.status != lp::LpStatus::kOptimal) {
      hit_limit = true;
      break;
    }
    if (lp.objective >= incumbent_objective - kObjectiveTol) continue;

    auto basis = std::make_shared<const lp::Basis>(std::move(lp.basis));
    const int branch = branching_variable(lp.values, relax.binaries);
    if (branch < 0) {
      // Integral: pin the binaries exactly and polish the continuous part.
      for (int k : relax.binaries) {
        lower[k] = upper[k] = std::round(lp.values[k]);
      }
      auto polished = run_lp(lower, upper, basis.get());
      if (polished.status == lp::LpStatus::kOptimal &&
          polished.objective < incumbent_objective - kObjectiveTol) {
        incumbent_objective = polished.objective;
        incumbent.assign(polished.values.data(),
                         polished.values.data() + polished.values.size());
      }
      continue;
    }

    for (double value : {0.0, 1.0}) {
      auto child = std::make_shared<Node>(
          Node{lp.objective, sequence++, node->fixings, basis});
      child->fixings.emplace_back(branch, value);
      open.push(std::move(child));
    }
  }

  solution.values = std::move(incumbent);
  if (hit_limit) {
    solution.status = SolveStatus::kResourceLimit;
  } else if (incumbent_objective < kInf) {
    solution.status = SolveStatus::kOptimal;
    solution.objective_value = incumbent_objective;
  } else {
    solution.status = SolveStatus::kInfeasible;
  }
  return solution;
}

double evaluate(const LinearExpr& expr, std::span<const double> values) {
  double sum = 0.0;
  for (const auto& [var, coef] : expr) sum += coef * values[var.index()];
  return sum;
}

FeasibilityReport check_assignment(const MilpModel& model,
                                   std::span<const double> values) {
  if (static_cast<int>(values.size()) != model.num_variables()) {
    throw std::invalid_argument("assignment length differs from model size");
  }
  FeasibilityReport report;
  for (int k = 0; k < model.num_variables(); ++k) {
    const Variable& v = model.variables()[k];
    const double x = values[k];
    report.max_bound_violation = std::max(
        {report.max_bound_violation, v.lower - x, x - v.upper});
    if (v.kind == VarKind::kBinary) {
      report.max_integrality_violation = std::max(
          report.max_integrality_violation, std::abs(x - std::round(x)));
    }
  }
  for (int r = 0; r < model.num_constraints(); ++r) {
    const Constraint& c = model.constraints()[r];
    const double activity = evaluate(c.terms, values);
    double violation = 0.0;
    switch (c.sense) {
      case Sense::kLessEqual:
        violation = activity - c.rhs;
        break;
      case Sense::kGreaterEqual:
        violation = c.rhs - activity;
        break;
      case Sense::kEqual:
        violation = std::abs(activity - c.rhs);
        break;
    }
    if (violation > report.max_row_violation) {
      report.max_row_violation = violation;
      report.worst_row = r;
    }
  }
  return report;
}

void write_lp_format(std::ostream& out, const MilpModel& model) {
  out << "Minimize\n obj:";
  write_terms(out, model, model.objective());
  out << "\nSubject To\n";
  for (int r = 0; r < model.num_constraints(); ++r) {
    const Constraint& c = model.constraints()[r];
    out << ' ' << (c.name.empty() ? "c" + std::to_string(r) : c.name) << ':';
    write_terms(out, model, c.terms);
    out << ' ' << sense_token(c.sense) << ' ' << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (int k = 0; k < model.num_variables(); ++k) {
    const Variable& v = model.variables()[k];
    if (v.kind == VarKind::kBinary && v.lower == 0.0 && v.upper == 1.0) {
      continue;
    }
    out << ' ';
    if (v.lower == -kInf && v.upper == kInf) {
      out << lp_name(model, k) << " free\n";
      continue;
    }
    if (v.lower == -kInf) {
      out << "-inf";
    } else {
      out << v.lower;
    }
    out << " <= " << lp_name(model, k) << " <= ";
    if (v.upper == kInf) {
      out << "+inf";
    } else {
      out << v.upper;
    }
    out << '\n';
  }
  out << "Binaries\n";
  for (int k = 0; k < model.num_variables(); ++k) {
    if (model.variables()[k].kind == VarKind::kBinary) {
      out << ' ' << lp_name(model, k) << '\n';
    }
  }
  out << "End\n";
}

}  // namespace wsnqos
