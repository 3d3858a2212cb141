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

#include <limits>
#include <sstream>

#include "doctest.h"
#include "support/milp_oracle.hpp"
#include "wsnqos/milp.hpp"

namespace wsnqos {
namespace {

TEST_CASE("variables get dense ids") {
  MilpModel m;
  CHECK(m.add_continuous(0, 1).index() == 0);
  CHECK(m.add_binary().index() == 1);
  CHECK(m.variables()[1].lower == 0.0);
  CHECK(m.variables()[1].upper == 1.0);
  CHECK_THROWS_AS(m.add_continuous(2, 1), ModelError);
}

TEST_CASE("constraints") {
  MilpModel m;
  const VarId x = m.add_continuous(0, 10);
  CHECK(m.add_constraint({{x, 1.0}}, Sense::kGreaterEqual, 3.0) == 0);
  CHECK(m.constraints()[0].terms == LinearExpr{{x, 1.0}});
  CHECK(m.add_constraint({}, Sense::kLessEqual, 5.0) == 1);
  CHECK_THROWS_AS(m.add_constraint({{VarId(7), 1.0}}, Sense::kEqual, 0.0),
                  ModelError);
  CHECK_THROWS_AS(
      m.add_constraint({{x, std::numeric_limits<double>::quiet_NaN()}},
                       Sense::kEqual, 0.0),
      ModelError);
  CHECK_THROWS_AS(m.add_constraint({{x, 1.0}}, Sense::kEqual,
                                   std::numeric_limits<double>::infinity()),
                  ModelError);
}

TEST_CASE("continuous minimum") {
  MilpModel m;
  const VarId x = m.add_continuous(0, 10);
  m.add_constraint({{x, 1.0}}, Sense::kGreaterEqual, 3.0);
  m.add_constraint({}, Sense::kLessEqual, 5.0);
  m.set_objective({{x, 1.0}});
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.value(x) == doctest::Approx(3.0));
  CHECK(*s.objective_value == doctest::Approx(3.0));
}

TEST_CASE("binary knapsack-like choice") {
  MilpModel m;
  const VarId x1 = m.add_binary();
  const VarId x2 = m.add_binary();
  m.add_constraint({{x1, 1.0}, {x2, 1.0}}, Sense::kLessEqual, 1.0);
  m.set_objective({{x1, -1.0}, {x2, -2.0}});
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.value(x1) == 0.0);
  CHECK(s.value(x2) == 1.0);
  CHECK(*s.objective_value == doctest::Approx(-2.0));
}

TEST_CASE("fixed binaries") {
  MilpModel m;
  const VarId x1 = m.add_binary();
  const VarId x2 = m.add_binary();
  m.add_constraint({{x1, 1.0}, {x2, 1.0}}, Sense::kLessEqual, 1.0);
  m.set_objective({{x1, -1.0}, {x2, -2.0}});
  m.tighten_bounds(x2, 0.0, 0.0);
  CHECK(m.variables()[x2.index()].upper == 0.0);
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.value(x1) == 1.0);
  CHECK(s.value(x2) == 0.0);
  // Bounds only shrink.
  m.tighten_bounds(x1, -5.0, 5.0);
  CHECK(m.variables()[x1.index()].lower == 0.0);
  CHECK(m.variables()[x1.index()].upper == 1.0);
  CHECK_THROWS_AS(m.tighten_bounds(x2, 1.0, 1.0), ModelError);
  CHECK_THROWS_AS(m.tighten_bounds(VarId(9), 0.0, 0.0), ModelError);
  std::ostringstream lp;
  write_lp_format(lp, m);
  CHECK(lp.str().find("0 <= x1 <= 0") != std::string::npos);
}

TEST_CASE("infeasible models") {
  MilpModel m;
  const VarId x = m.add_continuous(-100, 100);
  m.add_constraint({{x, 1.0}}, Sense::kLessEqual, 0.0);
  m.add_constraint({{x, 1.0}}, Sense::kGreaterEqual, 1.0);
  m.set_objective({{x, 1.0}});
  CHECK(solve(m).status == SolveStatus::kInfeasible);
  CHECK(!solve(m).objective_value);

  MilpModel empty_row;
  empty_row.add_binary();
  empty_row.add_constraint({}, Sense::kGreaterEqual, 1.0);
  CHECK(solve(empty_row).status == SolveStatus::kInfeasible);

  MilpModel parity;
  const VarId a = parity.add_binary();
  const VarId b = parity.add_binary();
  parity.add_constraint({{a, 2.0}, {b, 2.0}}, Sense::kEqual, 1.0);
  CHECK(solve(parity).status == SolveStatus::kInfeasible);
}

TEST_CASE("unbounded relaxation") {
  MilpModel m;
  const VarId x = m.add_continuous(0, std::numeric_limits<double>::infinity());
  const VarId b = m.add_binary();
  m.add_constraint({{x, 1.0}, {b, -1.0}}, Sense::kGreaterEqual, 0.0);
  m.set_objective({{x, -1.0}});
  CHECK(solve(m).status == SolveStatus::kUnbounded);
}

TEST_CASE("free variables and equality rows") {
  MilpModel m;
  const double inf = std::numeric_limits<double>::infinity();
  const VarId x = m.add_continuous(-inf, inf);
  const VarId y = m.add_continuous(-inf, inf);
  m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::kEqual, 4.0);
  m.add_constraint({{x, 1.0}, {y, -1.0}}, Sense::kEqual, -2.0);
  m.set_objective({{x, 1.0}});
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(s.value(x) == doctest::Approx(1.0));
  CHECK(s.value(y) == doctest::Approx(3.0));
}

TEST_CASE("resource limit is reported, not guessed") {
  const MilpModel m = oracle::random_milp(11, {12, 0, 6});
  SolveLimits limits;
  limits.max_nodes = 1;
  const Solution s = solve(m, limits);
  if (s.stats.nodes >= 1 && s.status != SolveStatus::kInfeasible) {
    CHECK((s.status == SolveStatus::kResourceLimit ||
           s.status == SolveStatus::kOptimal));
  }
  CHECK(!(s.status == SolveStatus::kResourceLimit && s.objective_value));

  SolveLimits no_pivots;
  no_pivots.max_lp_iterations = 0;
  MilpModel needs_pivot;
  const VarId x = needs_pivot.add_continuous(0, 10);
  needs_pivot.add_constraint({{x, 1.0}}, Sense::kGreaterEqual, 3.0);
  needs_pivot.set_objective({{x, 1.0}});
  CHECK(solve(needs_pivot, no_pivots).status == SolveStatus::kResourceLimit);
}

TEST_CASE("property: matches exhaustive enumeration and passes the re-check") {
  int optimal = 0;
  for (std::uint64_t seed = 1000; seed < 1150; ++seed) {
    const MilpModel m = oracle::random_milp(seed);
    const auto expected = oracle::enumerate_milp(m);
    const Solution s = solve(m);
    CAPTURE(seed);
    if (!expected) {
      CHECK(s.status == SolveStatus::kInfeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::kOptimal);
    ++optimal;
    CHECK(std::abs(*s.objective_value - *expected) <= 1e-6);
    const FeasibilityReport report = check_assignment(m, s.values);
    CHECK(report.feasible());
    CHECK(std::abs(evaluate(m.objective(), s.values) - *s.objective_value) <=
          1e-9);
  }
  CHECK(optimal >= 50);
}

TEST_CASE("determinism") {
  const MilpModel m = oracle::random_milp(4242);
  const Solution a = solve(m);
  const Solution b = solve(m);
  CHECK(a.status == b.status);
  CHECK(a.values == b.values);
  CHECK(a.stats.nodes == b.stats.nodes);
}

TEST_CASE("degenerate model terminates") {
  // Many redundant rows through the same vertex.
  MilpModel m;
  const VarId x = m.add_continuous(0, 10);
  const VarId y = m.add_continuous(0, 10);
  const VarId z = m.add_continuous(0, 10);
  for (int k = 1; k <= 30; ++k) {
    m.add_constraint({{x, 1.0 * k}, {y, 1.0}, {z, -1.0 * (k % 3)}},
                     Sense::kLessEqual, 0.0);
    m.add_constraint({{x, -1.0}, {y, 1.0 * (k % 4)}, {z, 1.0}},
                     Sense::kLessEqual, 0.0);
  }
  m.set_objective({{x, -1.0}, {y, -1.0}, {z, -1.0}});
  const Solution s = solve(m);
  REQUIRE(s.status == SolveStatus::kOptimal);
  CHECK(check_assignment(m, s.values).feasible());
}

TEST_CASE("lp format dump") {
  MilpModel m;
  const VarId x = m.add_continuous(0, 10, "x");
  const VarId b = m.add_binary("b");
  m.add_constraint({{x, 1.0}, {b, -2.0}}, Sense::kGreaterEqual, 3.0, "cap");
  m.set_objective({{x, 1.0}});
  std::ostringstream out;
  write_lp_format(out, m);
  CHECK(out.str() ==
        "Minimize\n obj: + 1 x\nSubject To\n cap: + 1 x - 2 b >= 3\n"
        "Bounds\n 0 <= x <= 10\nBinaries\n b\nEnd\n");
}

}  // namespace
}  // namespace wsnqos
