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

// Bounded-variable simplex over a sparse constraint matrix.
//
// Rows are handled through logical variables: the problem
//
//   min c'x  s.t.  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper
//
// is solved as [A  -I] [x; r] = 0 with bounds on both x and r, after
// geometric row and column scaling. The basis is factorized with a sparse LU
// and updated in product form between refactorizations.
//
// A solve starts with dual simplex iterations whenever the starting basis is
// dual feasible (the all-logical basis of a problem with nonnegative costs at
// lower bounds, or the optimal basis of a parent problem after bound changes).
// Costs are perturbed during that pass. The primal loop then finishes with the
// true costs and is the only place where optimality is declared.
//
// The primal loop runs phase 1 on the sum of bound violations of the basic
// variables and uses Dantzig pricing with a Harris ratio test. A streak of
// degenerate pivots first triggers a bound perturbation; a second streak
// after the bounds are restored switches to Bland's smallest-index rule for
// both the entering and the leaving choice until a pivot makes progress.

#ifndef WSNQOS_BOUNDED_SIMPLEX_HPP
#define WSNQOS_BOUNDED_SIMPLEX_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <Eigen/LU>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace wsnqos::lp {

// Working tolerances of the simplex. They sit below the model-level
// feasibility tolerance so that accepted solutions pass the independent check.
inline constexpr double kPrimalTol = 1e-9;
inline constexpr double kDualTol = 1e-9;
inline constexpr double kPivotTol = 1e-7;
inline constexpr int kRefactorInterval = 64;
inline constexpr int kDegenerateStreak = 50;
inline constexpr double kPerturbation = 1e-6;
inline constexpr double kCostShiftLimit = 1e-6;

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

enum class VarState : std::int8_t { kBasic, kAtLower, kAtUpper, kFree };

// Variables 0..n-1 are structural, n..n+m-1 are the row logicals.
struct Basis {
  std::vector<int> head;
  std::vector<VarState> state;
};

template <typename Scalar>
struct LpProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Eigen::SparseMatrix<Scalar> matrix;
  Vector cost;
  Vector row_lower;
  Vector row_upper;
};

template <typename Scalar>
struct LpResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::kNumericalFailure;
  Scalar objective = 0;
  Vector values;
  Basis basis;
  std::int64_t iterations = 0;
};

template <typename Scalar>
class BoundedSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SparseMatrix = Eigen::SparseMatrix<Scalar>;

  explicit BoundedSimplex(const LpProblem<Scalar>& problem)
      : problem_(problem),
        rows_(static_cast<int>(problem.matrix.rows())),
        cols_(static_cast<int>(problem.matrix.cols())),
        cost_(problem.cost) {
    scale();
  }

  // Solves with the given structural bounds. `warm` may be null; a warm basis
  // whose factorization fails falls back to the all-logical basis.
  LpResult<Scalar> solve(const Vector& col_lower, const Vector& col_upper,
                         const Basis* warm, std::int64_t max_iterations) {
    load_bounds(col_lower.cwiseQuotient(col_scale_),
                col_upper.cwiseQuotient(col_scale_));
    active_cost_ = Vector::Zero(total());
    active_cost_.head(cols_) = problem_.cost;
    LpResult<Scalar> result;
    for (int k = 0; k < cols_; ++k) {
      if (lower_[k] > upper_[k]) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
    }
    if (!(warm != nullptr && start_from(*warm))) start_cold();
    const DualOutcome outcome = dual_iterate(max_iterations, result.iterations);
    active_cost_.head(cols_) = problem_.cost;
    active_cost_.tail(rows_).setZero();
    switch (outcome) {
      case DualOutcome::kInfeasible:
        result.status = LpStatus::kInfeasible;
        break;
      case DualOutcome::kIterationLimit:
        result.status = LpStatus::kIterationLimit;
        break;
      default:
        result.status = iterate(max_iterations, result.iterations);
        break;
    }
    result.values = value_.head(cols_).cwiseProduct(col_scale_);
    result.objective = cost_.dot(result.values);
    result.basis.head = head_;
    result.basis.state = state_;
    return result;
  }

 private:
  struct Eta {
    int pivot;
    Vector column;
  };

  int total() const { return rows_ + cols_; }

  // Geometric-mean row and column scaling rounded to powers of two, so the
  // scaled problem carries no extra rounding error. The solver works on
  // R A C with columns x / C and row activities R (A x).
  void scale() {
    row_scale_ = Vector::Ones(rows_);
    col_scale_ = Vector::Ones(cols_);
    SparseMatrix& a = problem_.matrix;
    auto power_of_two = [](Scalar v) {
      return Scalar(std::exp2(std::round(std::log2(static_cast<double>(v)))));
    };
    for (int pass = 0; pass < 4; ++pass) {
      Vector low = Vector::Constant(rows_, std::numeric_limits<Scalar>::infinity());
      Vector high = Vector::Zero(rows_);
      for (int k = 0; k < cols_; ++k) {
        for (typename SparseMatrix::InnerIterator it(a, k); it; ++it) {
          const Scalar v = std::abs(it.value());
          low[it.index()] = std::min(low[it.index()], v);
          high[it.index()] = std::max(high[it.index()], v);
        }
      }
      Vector factor = Vector::Ones(rows_);
      for (int i = 0; i < rows_; ++i) {
        if (high[i] > 0) factor[i] = power_of_two(1 / std::sqrt(low[i] * high[i]));
      }
      a = factor.asDiagonal() * a;
      row_scale_ = row_scale_.cwiseProduct(factor);
      Vector column = Vector::Ones(cols_);
      for (int k = 0; k < cols_; ++k) {
        Scalar lo = std::numeric_limits<Scalar>::infinity();
        Scalar hi = 0;
        for (typename SparseMatrix::InnerIterator it(a, k); it; ++it) {
          lo = std::min(lo, std::abs(it.value()));
          hi = std::max(hi, std::abs(it.value()));
        }
        if (hi > 0) column[k] = power_of_two(1 / std::sqrt(lo * hi));
      }
      a = a * column.asDiagonal();
      col_scale_ = col_scale_.cwiseProduct(column);
    }
    a.makeCompressed();
    problem_.cost = problem_.cost.cwiseProduct(col_scale_);
    problem_.row_lower = problem_.row_lower.cwiseProduct(row_scale_);
    problem_.row_upper = problem_.row_upper.cwiseProduct(row_scale_);
  }

  static bool finite(Scalar v) { return std::isfinite(static_cast<double>(v)); }

  static Scalar tol_for(Scalar bound) {
    return Scalar(kPrimalTol) * (Scalar(1) + std::abs(bound));
  }

  void load_bounds(const Vector& col_lower, const Vector& col_upper) {
    lower_.resize(total());
    upper_.resize(total());
    lower_.head(cols_) = col_lower;
    upper_.head(cols_) = col_upper;
    lower_.tail(rows_) = problem_.row_lower;
    upper_.tail(rows_) = problem_.row_upper;
  }

  VarState resting_state(int k) const {
    if (finite(lower_[k])) return VarState::kAtLower;
    if (finite(upper_[k])) return VarState::kAtUpper;
    return VarState::kFree;
  }

  Scalar resting_value(int k) const {
    switch (state_[k]) {
      case VarState::kAtLower:
        return lower_[k];
      case VarState::kAtUpper:
        return upper_[k];
      default:
        return Scalar(0);
    }
  }

  // Deterministic draw in [1, 2) from a splitmix64 sequence.
  static Scalar unit_draw(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return Scalar(1) + Scalar(static_cast<double>(z >> 11) * 0x1.0p-53);
  }

  // Widens every finite bound by a deterministic amount in
  // [1, 2) * kPerturbation * (1 + |bound|) and moves nonbasic variables onto
  // the widened bounds.
  void perturb_bounds() {
    original_lower_ = lower_;
    original_upper_ = upper_;
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    for (int k = 0; k < total(); ++k) {
      const Scalar shift_low = unit_draw(state) * Scalar(kPerturbation);
      const Scalar shift_up = unit_draw(state) * Scalar(kPerturbation);
      if (finite(lower_[k])) lower_[k] -= shift_low * (1 + std::abs(lower_[k]));
      if (finite(upper_[k])) upper_[k] += shift_up * (1 + std::abs(upper_[k]));
      if (state_[k] != VarState::kBasic) value_[k] = resting_value(k);
    }
    compute_basic_values();
  }

  // Shifts every cost by a deterministic amount in
  // [1, 2) * kPerturbation * (1 + |cost|) for nonbasic variables, in the
  // direction that keeps them dual feasible. Breaks ties in the dual ratio
  // test.
  void perturb_costs() {
    std::uint64_t state = 0x2545f4914f6cdd1dULL;
    for (int k = 0; k < total(); ++k) {
      const Scalar shift = Scalar(kPerturbation) * unit_draw(state) *
                           (Scalar(1) + std::abs(active_cost_[k]));
      if (state_[k] == VarState::kAtLower) active_cost_[k] += shift;
      if (state_[k] == VarState::kAtUpper) active_cost_[k] -= shift;
    }
  }

  void start_cold() {
    head_.resize(rows_);
    state_.assign(total(), VarState::kFree);
    position_.assign(total(), -1);
    value_.setZero(total());
    for (int k = 0; k < cols_; ++k) {
      state_[k] = resting_state(k);
      value_[k] = resting_value(k);
    }
    for (int p = 0; p < rows_; ++p) {
      head_[p] = cols_ + p;
      state_[cols_ + p] = VarState::kBasic;
      position_[cols_ + p] = p;
    }
    refactor();
    compute_basic_values();
  }

  bool start_from(const Basis& basis) {
    if (static_cast<int>(basis.head.size()) != rows_ ||
        static_cast<int>(basis.state.size()) != total()) {
      return false;
    }
    head_ = basis.head;
    state_ = basis.state;
    position_.assign(total(), -1);
    value_.setZero(total());
    for (int p = 0; p < rows_; ++p) {
      const int k = head_[p];
      if (k < 0 || k >= total() || position_[k] != -1 ||
          state_[k] != VarState::kBasic) {
        return false;
      }
      position_[k] = p;
    }
    for (int k = 0; k < total(); ++k) {
      if (position_[k] != -1) continue;
      if (state_[k] == VarState::kBasic) return false;
      // Bounds may have moved since the basis was saved.
      if ((state_[k] == VarState::kAtLower && !finite(lower_[k])) ||
          (state_[k] == VarState::kAtUpper && !finite(upper_[k])) ||
          (state_[k] == VarState::kFree &&
           (finite(lower_[k]) || finite(upper_[k])))) {
        state_[k] = resting_state(k);
      }
      value_[k] = resting_value(k);
    }
    if (!refactor() && !repair()) return false;
    compute_basic_values();
    return true;
  }

  // Dense copy of column k of [A -I].
  void load_column(int k, Vector& out) const {
    out.setZero(rows_);
    if (k < cols_) {
      for (typename SparseMatrix::InnerIterator it(problem_.matrix, k); it;
           ++it) {
        out[it.index()] = it.value();
      }
    } else {
      out[k - cols_] = Scalar(-1);
    }
  }

  bool refactor() {
    etas_.clear();
    if (rows_ == 0) return true;
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(static_cast<std::size_t>(rows_) * 4);
    for (int p = 0; p < rows_; ++p) {
      const int k = head_[p];
      if (k < cols_) {
        for (typename SparseMatrix::InnerIterator it(problem_.matrix, k); it;
             ++it) {
          triplets.emplace_back(static_cast<int>(it.index()), p, it.value());
        }
      } else {
        triplets.emplace_back(k - cols_, p, Scalar(-1));
      }
    }
    SparseMatrix basis(rows_, rows_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    return lu_.info() == Eigen::Success;
  }

  // Swaps dependent basic columns for row logicals, using a dense
  // rank-revealing factorization. Used only when the sparse LU fails.
  bool repair() {
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Dense basis = Dense::Zero(rows_, rows_);
    Vector column;
    for (int p = 0; p < rows_; ++p) {
      load_column(head_[p], column);
      basis.col(p) = column;
    }
    Eigen::FullPivLU<Dense> lu(basis);
    lu.setThreshold(Scalar(kPivotTol));
    const int rank = static_cast<int>(lu.rank());
    const auto& rows = lu.permutationP().indices();
    const auto& cols = lu.permutationQ().indices();
    // Row i of the original matrix sits at position rows[i] after P.
    std::vector<int> uncovered;
    for (int i = 0; i < rows_; ++i) {
      if (rows[i] >= rank) uncovered.push_back(i);
    }
    for (int j = rank; j < rows_; ++j) {
      const int p = cols[j];
      const int row = uncovered[static_cast<std::size_t>(j - rank)];
      const int leaving = head_[p];
      state_[leaving] = resting_state(leaving);
      value_[leaving] = resting_value(leaving);
      position_[leaving] = -1;
      const int logical = cols_ + row;
      if (position_[logical] != -1) return false;
      head_[p] = logical;
      state_[logical] = VarState::kBasic;
      position_[logical] = p;
    }
    return refactor();
  }

  void ftran(Vector& v) const {
    if (rows_ == 0) return;
    v = lu_.solve(v);
    for (const Eta& eta : etas_) {
      const Scalar t = v[eta.pivot] / eta.column[eta.pivot];
      if (t != Scalar(0)) v -= t * eta.column;
      v[eta.pivot] = t;
    }
  }

  void btran(Vector& v) const {
    if (rows_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Scalar vp = v[it->pivot];
      const Scalar dot = it->column.dot(v) - it->column[it->pivot] * vp;
      v[it->pivot] = (vp - dot) / it->column[it->pivot];
    }
    v = lu_.transpose().solve(v);
  }

  void compute_basic_values() {
    Vector rhs = Vector::Zero(rows_);
    for (int k = 0; k < total(); ++k) {
      if (state_[k] == VarState::kBasic || value_[k] == Scalar(0)) continue;
      if (k < cols_) {
        for (typename SparseMatrix::InnerIterator it(problem_.matrix, k); it;
             ++it) {
          rhs[it.index()] -= it.value() * value_[k];
        }
      } else {
        rhs[k - cols_] += value_[k];
      }
    }
    ftran(rhs);
    for (int p = 0; p < rows_; ++p) value_[head_[p]] = rhs[p];
  }

  // -1 below the lower bound, +1 above the upper bound, 0 inside.
  int violation_sign(int k) const {
    if (finite(lower_[k]) && value_[k] < lower_[k] - tol_for(lower_[k])) {
      return -1;
    }
    if (finite(upper_[k]) && value_[k] > upper_[k] + tol_for(upper_[k])) {
      return 1;
    }
    return 0;
  }

  bool primal_infeasible() const {
    for (int p = 0; p < rows_; ++p) {
      if (violation_sign(head_[p]) != 0) return true;
    }
    return false;
  }

  // Reduced costs of all variables for the given phase; basic entries are 0.
  void price(bool phase_one, Vector& reduced) const {
    Vector basic_cost(rows_);
    for (int p = 0; p < rows_; ++p) {
      const int k = head_[p];
      basic_cost[p] =
          phase_one ? Scalar(violation_sign(k)) : active_cost_[k];
    }
    btran(basic_cost);
    reduced.resize(total());
    for (int k = 0; k < cols_; ++k) {
      if (state_[k] == VarState::kBasic) {
        reduced[k] = 0;
        continue;
      }
      Scalar d = phase_one ? Scalar(0) : active_cost_[k];
      for (typename SparseMatrix::InnerIterator it(problem_.matrix, k); it;
           ++it) {
        d -= it.value() * basic_cost[it.index()];
      }
      reduced[k] = d;
    }
    for (int i = 0; i < rows_; ++i) {
      const int k = cols_ + i;
      reduced[k] = state_[k] == VarState::kBasic
                       ? Scalar(0)
                       : (phase_one ? Scalar(0) : active_cost_[k]) +
                             basic_cost[i];
    }
  }

  // Returns the entering variable and its direction (+1 increase, -1
  // decrease), or -1 when no variable improves the objective.
  int choose_entering(const Vector& reduced, bool bland, int& direction) const {
    int best = -1;
    Scalar best_score = 0;
    for (int k = 0; k < total(); ++k) {
      int dir = 0;
      switch (state_[k]) {
        case VarState::kBasic:
          continue;
        case VarState::kAtLower:
          if (reduced[k] < -kDualTol && upper_[k] > lower_[k]) dir = 1;
          break;
        case VarState::kAtUpper:
          if (reduced[k] > kDualTol && upper_[k] > lower_[k]) dir = -1;
          break;
        case VarState::kFree:
          if (reduced[k] < -kDualTol) dir = 1;
          if (reduced[k] > kDualTol) dir = -1;
          break;
      }
      if (dir == 0) continue;
      if (bland) {
        direction = dir;
        return k;
      }
      const Scalar score = std::abs(reduced[k]);
      if (score > best_score) {
        best_score = score;
        best = k;
        direction = dir;
      }
    }
    return best;
  }

  enum class DualOutcome { kFinished, kInfeasible, kIterationLimit, kHandOff };

  // Dual simplex from a dual feasible basis, used to re-optimize after bound
  // changes. It stops once the basis is primal feasible and leaves the final
  // optimality check to the primal loop; bases that are not dual feasible,
  // long runs and unstable pivots are handed to the primal loop as well.
  DualOutcome dual_iterate(std::int64_t max_iterations,
                           std::int64_t& iterations) {
    constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
    const std::int64_t budget = iterations + 4 * static_cast<std::int64_t>(rows_) + 100;
    Vector reduced;
    Vector row;
    Vector alpha;
    Vector slopes(total());
    bool verified = false;
    // Reduced costs are updated along the pivot row and recomputed from
    // scratch after every refactorization.
    bool stale = true;
    perturb_costs();
    while (true) {
      if (stale) {
        price(false, reduced);
        stale = false;
      }
      for (int k = 0; k < total(); ++k) {
        if (state_[k] == VarState::kBasic || lower_[k] == upper_[k]) continue;
        const Scalar d = reduced[k];
        Scalar shift = 0;
        if (state_[k] == VarState::kAtLower && d < -kDualTol) shift = -d;
        if (state_[k] == VarState::kAtUpper && d > kDualTol) shift = -d;
        if (state_[k] == VarState::kFree && std::abs(d) > kDualTol) {
          return DualOutcome::kHandOff;
        }
        if (shift == Scalar(0)) continue;
        // Small slips from the relaxed ratio test are absorbed by shifting
        // the cost; anything larger goes back to the primal loop.
        if (std::abs(shift) > kCostShiftLimit) return DualOutcome::kHandOff;
        active_cost_[k] += shift;
        reduced[k] = 0;
      }

      // Leaving row: the largest relative bound violation.
      int leave_pos = -1;
      Scalar worst = 0;
      for (int p = 0; p < rows_; ++p) {
        const int k = head_[p];
        const int sign = violation_sign(k);
        if (sign == 0) continue;
        const Scalar bound = sign < 0 ? lower_[k] : upper_[k];
        const Scalar amount =
            std::abs(value_[k] - bound) / (Scalar(1) + std::abs(bound));
        if (amount > worst) {
          worst = amount;
          leave_pos = p;
        }
      }
      if (leave_pos < 0) return DualOutcome::kFinished;
      if (iterations >= max_iterations) return DualOutcome::kIterationLimit;
      if (iterations >= budget) return DualOutcome::kHandOff;

      const int leaving = head_[leave_pos];
      const bool to_lower = value_[leaving] < lower_[leaving];
      row = Vector::Zero(rows_);
      row[leave_pos] = Scalar(1);
      btran(row);

      // Reduced costs move as d_j + theta * slope_j while the leaving
      // variable is driven to its violated bound.
      auto slope_of = [&](int k) {
        Scalar a = 0;
        if (k < cols_) {
          for (typename SparseMatrix::InnerIterator it(problem_.matrix, k); it;
               ++it) {
            a += it.value() * row[it.index()];
          }
        } else {
          a = -row[k - cols_];
        }
        return to_lower ? a : -a;
      };
      auto ratio = [&](int k, Scalar slope, bool relaxed) {
        const Scalar d = reduced[k];
        const Scalar slack = relaxed ? Scalar(kDualTol) : Scalar(0);
        const bool down = slope < 0;
        if (state_[k] == VarState::kFree) {
          return (std::abs(d) + slack) / std::abs(slope);
        }
        if (state_[k] == VarState::kAtLower && down) {
          return std::max(Scalar(0), d + slack) / -slope;
        }
        if (state_[k] == VarState::kAtUpper && !down) {
          return std::max(Scalar(0), -d + slack) / slope;
        }
        return kInf;
      };

      std::vector<std::pair<int, Scalar>> candidates;
      Scalar bound_step = kInf;
      for (int k = 0; k < total(); ++k) {
        if (state_[k] == VarState::kBasic || lower_[k] == upper_[k]) continue;
        const Scalar slope = slope_of(k);
        slopes[k] = slope;
        if (std::abs(slope) <= kPivotTol) continue;
        const Scalar limit = ratio(k, slope, true);
        if (limit == kInf) continue;
        candidates.emplace_back(k, slope);
        bound_step = std::min(bound_step, limit);
      }
      if (candidates.empty()) {
        // No entering variable: the row proves primal infeasibility. Confirm
        // on a fresh factorization first.
        if (!verified) {
          if (!refactor()) return DualOutcome::kHandOff;
          compute_basic_values();
          verified = true;
          stale = true;
          continue;
        }
        return DualOutcome::kInfeasible;
      }
      verified = false;
      int entering = -1;
      Scalar entering_slope = 0;
      for (const auto& [k, slope] : candidates) {
        if (ratio(k, slope, false) > bound_step) continue;
        if (entering < 0 || std::abs(slope) > std::abs(entering_slope)) {
          entering = k;
          entering_slope = slope;
        }
      }
      ++iterations;

      load_column(entering, alpha);
      ftran(alpha);
      const Scalar pivot = alpha[leave_pos];
      const Scalar expected = to_lower ? entering_slope : -entering_slope;
      if (std::abs(pivot - expected) >
          Scalar(1e-7) * (Scalar(1) + std::abs(pivot))) {
        if (etas_.empty()) return DualOutcome::kHandOff;
        if (!refactor()) return DualOutcome::kHandOff;
        compute_basic_values();
        stale = true;
        continue;
      }

      const Scalar theta = -reduced[entering] / entering_slope;
      for (int k = 0; k < total(); ++k) {
        if (state_[k] == VarState::kBasic || lower_[k] == upper_[k]) continue;
        reduced[k] += theta * slopes[k];
      }
      reduced[entering] = 0;
      reduced[leaving] = to_lower ? theta : -theta;

      const Scalar target = to_lower ? lower_[leaving] : upper_[leaving];
      const Scalar delta = (value_[leaving] - target) / pivot;
      for (int p = 0; p < rows_; ++p) value_[head_[p]] -= delta * alpha[p];
      value_[entering] += delta;

      state_[leaving] = to_lower ? VarState::kAtLower : VarState::kAtUpper;
      value_[leaving] = target;
      position_[leaving] = -1;
      head_[leave_pos] = entering;
      state_[entering] = VarState::kBasic;
      position_[entering] = leave_pos;
      etas_.push_back(Eta{leave_pos, alpha});
      if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
        if (!refactor()) return DualOutcome::kHandOff;
        compute_basic_values();
        stale = true;
      }
    }
  }

  LpStatus iterate(std::int64_t max_iterations, std::int64_t& iterations) {
    constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
    Vector reduced;
    Vector alpha;
    int degenerate_run = 0;
    bool bland = false;
    bool verified = false;
    bool perturbed = false;
    // A degenerate streak first widens the bounds by small distinct amounts;
    // a second streak after they are restored falls back to Bland's rule.
    bool perturbation_used = false;

    auto restore_bounds = [&] {
      lower_ = original_lower_;
      upper_ = original_upper_;
      for (int k = 0; k < total(); ++k) {
        if (state_[k] != VarState::kBasic) value_[k] = resting_value(k);
      }
      compute_basic_values();
      perturbed = false;
      degenerate_run = 0;
      verified = false;
    };

    while (true) {
      const bool phase_one = primal_infeasible();
      price(phase_one, reduced);
      int direction = 0;
      const int entering = choose_entering(reduced, bland, direction);

      if (entering < 0 && perturbed) {
        restore_bounds();
        continue;
      }
      if (entering < 0) {
        // Confirm against a fresh factorization before concluding.
        if (!verified) {
          if (!refactor() && !repair()) start_cold();
          compute_basic_values();
          verified = true;
          continue;
        }
        return phase_one ? LpStatus::kInfeasible : LpStatus::kOptimal;
      }
      verified = false;
      if (iterations >= max_iterations) return LpStatus::kIterationLimit;
      ++iterations;

      load_column(entering, alpha);
      ftran(alpha);

      // Harris two-pass ratio test, measured in units of the entering
      // variable. Pass one finds the largest step that keeps every basic
      // variable within its bound widened by the primal tolerance; pass two
      // picks, among the rows blocking before that step, the largest pivot
      // (smallest variable index in Bland mode).
      Scalar range = kInf;
      if (finite(lower_[entering]) && finite(upper_[entering])) {
        range = upper_[entering] - lower_[entering];
      }
      auto row_limit = [&](int p, bool relaxed, bool& at_upper) {
        const int k = head_[p];
        const Scalar rate = -direction * alpha[p];
        const int sign = phase_one ? violation_sign(k) : 0;
        at_upper = false;
        if ((sign == 0 && rate > 0 && finite(upper_[k])) ||
            (sign > 0 && rate < 0)) {
          at_upper = true;
          const Scalar bound =
              upper_[k] + (relaxed ? rate / std::abs(rate) * tol_for(upper_[k])
                                   : Scalar(0));
          return (bound - value_[k]) / rate;
        }
        if ((sign == 0 && rate < 0 && finite(lower_[k])) ||
            (sign < 0 && rate > 0)) {
          const Scalar bound =
              lower_[k] + (relaxed ? rate / std::abs(rate) * tol_for(lower_[k])
                                   : Scalar(0));
          return (bound - value_[k]) / rate;
        }
        return kInf;
      };

      // In Bland mode the exact minimum ratio is used instead, with ties
      // going to the smallest variable index.
      Scalar relaxed_step = range;
      for (int p = 0; p < rows_; ++p) {
        if (std::abs(alpha[p]) <= kPivotTol) continue;
        bool at_upper = false;
        Scalar limit = row_limit(p, !bland, at_upper);
        if (bland) limit = std::max(Scalar(0), limit);
        relaxed_step = std::min(relaxed_step, limit);
      }
      const Scalar tie = bland ? Scalar(1e-12) * (Scalar(1) + relaxed_step)
                               : Scalar(0);

      Scalar step = kInf;
      int leave_pos = -1;
      bool leave_at_upper = false;
      if (range <= relaxed_step) {
        step = range;  // bound flip
      } else if (relaxed_step < kInf) {
        for (int p = 0; p < rows_; ++p) {
          if (std::abs(alpha[p]) <= kPivotTol) continue;
          bool at_upper = false;
          const Scalar limit = row_limit(p, false, at_upper);
          if (std::max(Scalar(0), limit) > relaxed_step + tie) continue;
          bool take = leave_pos < 0;
          if (!take) {
            take = bland ? head_[p] < head_[leave_pos]
                         : std::abs(alpha[p]) > std::abs(alpha[leave_pos]);
          }
          if (take) {
            leave_pos = p;
            leave_at_upper = at_upper;
            step = std::max(Scalar(0), limit);
          }
        }
      }

      if (step == kInf && perturbed) {
        restore_bounds();
        continue;
      }
      if (step == kInf) {
        return phase_one ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
      }

      if (step <= Scalar(1e-12)) {
        if (++degenerate_run > kDegenerateStreak) {
          if (!perturbation_used) {
            perturb_bounds();
            perturbation_used = true;
            perturbed = true;
            degenerate_run = 0;
            continue;
          }
          if (!perturbed) bland = true;
        }
      } else {
        degenerate_run = 0;
        bland = false;
      }

      // Move along the edge.
      const Scalar delta = direction * step;
      if (delta != Scalar(0)) {
        for (int p = 0; p < rows_; ++p) value_[head_[p]] -= delta * alpha[p];
        value_[entering] += delta;
      }

      if (leave_pos < 0) {
        // Bound flip of the entering variable.
        state_[entering] =
            direction > 0 ? VarState::kAtUpper : VarState::kAtLower;
        value_[entering] = resting_value(entering);
        continue;
      }

      const int leaving = head_[leave_pos];
      state_[leaving] = leave_at_upper ? VarState::kAtUpper : VarState::kAtLower;
      value_[leaving] = resting_value(leaving);
      position_[leaving] = -1;
      head_[leave_pos] = entering;
      state_[entering] = VarState::kBasic;
      position_[entering] = leave_pos;
      etas_.push_back(Eta{leave_pos, alpha});

      if (static_cast<int>(etas_.size()) >= kRefactorInterval) {
        if (!refactor() && !repair()) {
          start_cold();
          bland = false;
          degenerate_run = 0;
        }
        compute_basic_values();
      }
    }
  }

  LpProblem<Scalar> problem_;
  int rows_;
  int cols_;
  Vector cost_;
  Vector active_cost_;
  Vector row_scale_;
  Vector col_scale_;
  Vector lower_;
  Vector upper_;
  Vector original_lower_;
  Vector original_upper_;
  Vector value_;
  std::vector<int> head_;
  std::vector<VarState> state_;
  std::vector<int> position_;
  std::vector<Eta> etas_;
  // transpose() of SparseLU is non-const.
  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace wsnqos::lp

#endif  // WSNQOS_BOUNDED_SIMPLEX_HPP
