#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace innet::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Solver-wide tolerances.
inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kObjectiveTol = 1e-6;

enum class VarType { kContinuous, kBinary, kInteger };
enum class Relation { kLessEqual, kGreaterEqual, kEqual };
enum class Sense { kMinimize, kMaximize };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  double lo = 0.0;
  double hi = kInfinity;
  VarType type = VarType::kContinuous;
  double objective = 0.0;
  std::string name;
};

// Rows are stored sparsely; every term index refers to an existing variable.
struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

class MilpModel {
 public:
  int AddVariable(double lo, double hi, VarType type, double objective,
                  std::string name = {});
  int AddBinary(double objective, std::string name = {}) {
    return AddVariable(0.0, 1.0, VarType::kBinary, objective, std::move(name));
  }
  int AddConstraint(std::vector<Term> terms, Relation relation, double rhs,
                    std::string name = {});

  void SetObjective(int var, double coef);
  void SetBounds(int var, double lo, double hi);
  void SetSense(Sense sense) { sense_ = sense; }
  void SetObjectiveOffset(double offset) { objective_offset_ = offset; }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int j) const { return vars_.at(static_cast<std::size_t>(j)); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Constraint& constraint(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
  const std::vector<Constraint>& constraints() const { return rows_; }
  Sense sense() const { return sense_; }
  double objective_offset() const { return objective_offset_; }

  // Throws Error(kInvalidArgument) on dangling indices, lo > hi or binary
  // variables with bounds outside [0, 1].
  void Validate() const;

  double EvaluateObjective(const std::vector<double>& values) const;
  // Largest absolute violation over rows and bounds.
  double MaxViolation(const std::vector<double>& values) const;
  bool IsIntegral(const std::vector<double>& values,
                  double tol = kIntegralityTol) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Sense sense_ = Sense::kMinimize;
  double objective_offset_ = 0.0;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;
  double objective_value = 0.0;
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  // Consecutive degenerate pivots tolerated under largest-coefficient
  // pricing before switching to Bland's rule.
  int degenerate_switch = 30;
  std::int64_t iteration_limit = 2'000'000;
};

// Two-phase bounded-variable primal simplex on a dense tableau. Integrality
// flags are ignored.
LpSolution SolveLp(const MilpModel& model, const SimplexOptions& options = {});

// Same as SolveLp but with per-variable bounds overriding the model's.
LpSolution SolveLpWithBounds(const MilpModel& model, const std::vector<double>& lo,
                             const std::vector<double>& hi,
                             const SimplexOptions& options = {});

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded, kTimeBudgetExceeded };

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  // Best incumbent; empty when none was found.
  std::vector<double> values;
  double objective_value = 0.0;
  // Root relaxation bound (in the model's sense).
  double root_bound = 0.0;
  std::int64_t nodes_explored = 0;

  bool has_incumbent() const { return !values.empty(); }
};

struct MilpOptions {
  double time_budget_seconds = 60.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  // A feasible starting point; ignored if it violates the model.
  std::optional<std::vector<double>> initial_solution;
  // A proven bound on the optimum supplied by the caller (in the model's
  // sense). Search stops as soon as the incumbent attains it.
  std::optional<double> known_bound;
  SimplexOptions simplex;
};

// Depth-first branch-and-bound over LP relaxations. Branches on the most
// fractional integer variable (ties: lowest index), exploring the rounding
// direction first.
MilpSolution SolveMilp(const MilpModel& model, const MilpOptions& options = {});

// CPLEX-LP text rendering of the model, for cross-checking with external
// solvers.
void WriteLpFormat(std::ostream& out, const MilpModel& model);

std::string StatusName(LpStatus status);
std::string StatusName(MilpStatus status);

}  // namespace innet::lp
