#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "innet/error.hpp"
#include "innet/lpsolve.hpp"
#include "support/lp_oracles.hpp"

using namespace innet;
using namespace innet::lp;

TEST_CASE("lp: single bounded variable pushed to its constraint") {
  MilpModel m;
  int x = m.AddVariable(0, 10, VarType::kContinuous, 1.0, "x");
  m.AddConstraint({{x, 1.0}}, Relation::kGreaterEqual, 5.0);
  LpSolution s = SolveLp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.values[0] == doctest::Approx(5.0));
  CHECK(s.objective_value == doctest::Approx(5.0));
}

TEST_CASE("lp: returns a vertex of x + y <= 1") {
  MilpModel m;
  int x = m.AddVariable(0, kInfinity, VarType::kContinuous, -1.0);
  int y = m.AddVariable(0, kInfinity, VarType::kContinuous, -1.0);
  m.AddConstraint({{x, 1.0}, {y, 1.0}}, Relation::kLessEqual, 1.0);
  LpSolution s = SolveLp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == doctest::Approx(-1.0));
  const bool vertex = (std::abs(s.values[0] - 1) < 1e-9 && std::abs(s.values[1]) < 1e-9) ||
                      (std::abs(s.values[1] - 1) < 1e-9 && std::abs(s.values[0]) < 1e-9);
  CHECK(vertex);
}

TEST_CASE("lp: infeasible and unbounded statuses") {
  MilpModel inf;
  int x = inf.AddVariable(0, 1, VarType::kContinuous, 1.0);
  inf.AddConstraint({{x, 1.0}}, Relation::kGreaterEqual, 2.0);
  CHECK(SolveLp(inf).status == LpStatus::kInfeasible);

  MilpModel unb;
  int a = unb.AddVariable(0, kInfinity, VarType::kContinuous, -1.0);
  int b = unb.AddVariable(0, kInfinity, VarType::kContinuous, 0.0);
  unb.AddConstraint({{a, 1.0}, {b, -1.0}}, Relation::kLessEqual, 1.0);
  CHECK(SolveLp(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("lp: free and upper-only variables") {
  MilpModel m;
  int x = m.AddVariable(-kInfinity, kInfinity, VarType::kContinuous, 1.0);
  int y = m.AddVariable(-kInfinity, 3.0, VarType::kContinuous, -1.0);
  m.AddConstraint({{x, 1.0}, {y, -1.0}}, Relation::kGreaterEqual, -2.0);
  LpSolution s = SolveLp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.values[1] == doctest::Approx(3.0));
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.objective_value == doctest::Approx(-2.0));
}

TEST_CASE("lp: empty constraints are dropped or flagged") {
  MilpModel m;
  m.AddVariable(0, 1, VarType::kContinuous, 1.0);
  m.AddConstraint({}, Relation::kLessEqual, 3.0);
  CHECK(SolveLp(m).status == LpStatus::kOptimal);
  m.AddConstraint({}, Relation::kGreaterEqual, 1.0);
  CHECK(SolveLp(m).status == LpStatus::kInfeasible);
}

TEST_CASE("lp: redundant equality rows") {
  MilpModel m;
  int x = m.AddVariable(0, 5, VarType::kContinuous, 1.0);
  int y = m.AddVariable(0, 5, VarType::kContinuous, 2.0);
  m.AddConstraint({{x, 1.0}, {y, 1.0}}, Relation::kEqual, 4.0);
  m.AddConstraint({{x, 2.0}, {y, 2.0}}, Relation::kEqual, 8.0);
  LpSolution s = SolveLp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.objective_value == doctest::Approx(4.0));
}

TEST_CASE("lp: random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 60; ++trial) {
    MilpModel m = testing::RandomFeasibleLp(rng, 5, 8);
    auto oracle = testing::VertexEnumerationMin(m);
    LpSolution s = SolveLp(m);
    REQUIRE(oracle.has_value());
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective_value == doctest::Approx(*oracle).epsilon(1e-9).scale(1.0));
    CHECK(m.MaxViolation(s.values) <= kFeasibilityTol);
  }
}

TEST_CASE("lp: nonbasic values sit on bounds") {
  // With 5 structural columns and 8 rows, at most 8 columns are basic; any
  // variable strictly inside its box must be basic, so at most `rows`
  // structural variables may be interior.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    MilpModel m = testing::RandomFeasibleLp(rng, 5, 2);
    LpSolution s = SolveLp(m);
    REQUIRE(s.status == LpStatus::kOptimal);
    int interior = 0;
    for (int j = 0; j < m.num_vars(); ++j) {
      const double v = s.values[static_cast<std::size_t>(j)];
      if (v > m.variable(j).lo + 1e-7 && v < m.variable(j).hi - 1e-7) ++interior;
    }
    CHECK(interior <= 2);
  }
}

TEST_CASE("lp: determinism on identical models") {
  std::mt19937_64 rng(5);
  MilpModel m = testing::RandomFeasibleLp(rng, 6, 9);
  LpSolution a = SolveLp(m);
  LpSolution b = SolveLp(m);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t j = 0; j < a.values.size(); ++j) CHECK(a.values[j] == b.values[j]);
}

TEST_CASE("milp: two-item knapsack") {
  MilpModel m;
  m.SetSense(Sense::kMaximize);
  int a = m.AddBinary(3.0, "a");
  int b = m.AddBinary(2.0, "b");
  m.AddConstraint({{a, 1.0}, {b, 1.0}}, Relation::kLessEqual, 1.0);
  MilpSolution s = SolveMilp(m);
  REQUIRE(s.status == MilpStatus::kOptimal);
  CHECK(s.values[0] == doctest::Approx(1.0));
  CHECK(s.values[1] == doctest::Approx(0.0));
  CHECK(s.objective_value == doctest::Approx(3.0));
}

TEST_CASE("milp: contradictory bounds are infeasible") {
  MilpModel m;
  int x = m.AddBinary(1.0);
  m.AddConstraint({{x, 1.0}}, Relation::kGreaterEqual, 1.0);
  m.AddConstraint({{x, 1.0}}, Relation::kLessEqual, 0.0);
  CHECK(SolveMilp(m).status == MilpStatus::kInfeasible);
}

TEST_CASE("milp: random binary programs agree with enumeration") {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int vars = 4 + static_cast<int>(rng() % 9);
    MilpModel m = testing::RandomBinaryProgram(rng, vars, 3 + static_cast<int>(rng() % 4));
    auto oracle = testing::BinaryEnumerationOptimum(m);
    MilpSolution s = SolveMilp(m);
    if (!oracle) {
      CHECK(s.status == MilpStatus::kInfeasible);
      continue;
    }
    ++feasible;
    REQUIRE(s.status == MilpStatus::kOptimal);
    CHECK(s.objective_value == doctest::Approx(*oracle));
    CHECK(m.IsIntegral(s.values));
    CHECK(std::abs(m.EvaluateObjective(s.values) - s.objective_value) <= kObjectiveTol);
    // The relaxation bounds the integer optimum.
    LpSolution relax = SolveLp(m);
    REQUIRE(relax.status == LpStatus::kOptimal);
    CHECK(relax.objective_value <= s.objective_value + kObjectiveTol);
  }
  CHECK(feasible > 20);
}

TEST_CASE("milp: general integers and continuous mix") {
  // min -x - 2y  s.t.  x + 3y <= 7.5, x <= 3.7, x integer in [0,10], y cont.
  MilpModel m;
  int x = m.AddVariable(0, 10, VarType::kInteger, -1.0);
  int y = m.AddVariable(0, kInfinity, VarType::kContinuous, -2.0);
  m.AddConstraint({{x, 1.0}, {y, 3.0}}, Relation::kLessEqual, 7.5);
  m.AddConstraint({{x, 1.0}}, Relation::kLessEqual, 3.7);
  MilpSolution s = SolveMilp(m);
  REQUIRE(s.status == MilpStatus::kOptimal);
  CHECK(s.values[0] == doctest::Approx(3.0));
  CHECK(s.values[1] == doctest::Approx(1.5));
}

TEST_CASE("milp: initial solution and known bound stop the search") {
  std::mt19937_64 rng(3);
  MilpModel m = testing::RandomBinaryProgram(rng, 10, 4);
  MilpSolution full = SolveMilp(m);
  REQUIRE(full.status == MilpStatus::kOptimal);
  MilpOptions opts;
  opts.initial_solution = full.values;
  opts.known_bound = full.objective_value;
  MilpSolution warm = SolveMilp(m, opts);
  CHECK(warm.status == MilpStatus::kOptimal);
  CHECK(warm.nodes_explored == 0);
  CHECK(warm.objective_value == doctest::Approx(full.objective_value));
}

TEST_CASE("milp: node budget reports the incumbent") {
  std::mt19937_64 rng(11);
  MilpModel m = testing::RandomBinaryProgram(rng, 12, 5);
  MilpOptions opts;
  opts.node_limit = 1;
  MilpSolution s = SolveMilp(m, opts);
  CHECK((s.status == MilpStatus::kTimeBudgetExceeded || s.status == MilpStatus::kOptimal ||
         s.status == MilpStatus::kInfeasible));
}

TEST_CASE("model validation rejects malformed models") {
  MilpModel m;
  m.AddVariable(0, 2, VarType::kBinary, 1.0);
  CHECK_THROWS_AS(m.Validate(), Error);
  MilpModel dangling;
  dangling.AddVariable(0, 1, VarType::kContinuous, 0.0);
  dangling.AddConstraint({{3, 1.0}}, Relation::kLessEqual, 1.0);
  CHECK_THROWS_AS(SolveLp(dangling), Error);
}

TEST_CASE("lp text dump lists rows, bounds and integrality") {
  MilpModel m;
  int a = m.AddBinary(3.0, "a");
  int b = m.AddVariable(0, 4, VarType::kInteger, -1.0, "b[1]");
  m.AddConstraint({{a, 1.0}, {b, -2.5}}, Relation::kGreaterEqual, 1.0);
  std::ostringstream os;
  WriteLpFormat(os, m);
  const std::string text = os.str();
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("c0: + 1 v0_a - 2.5 v1_b_1_ >= 1") != std::string::npos);
  CHECK(text.find("General\n v1_b_1_") != std::string::npos);
  CHECK(text.find("Binary\n v0_a") != std::string::npos);
}
