#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "innet/error.hpp"
#include "innet/lpsolve.hpp"

namespace innet::lp {
namespace {

struct SearchNode {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Objective is integer on every integer-feasible point, so LP bounds can be
// rounded up before comparing with the incumbent.
bool HasIntegralObjective(const MilpModel& m) {
  if (m.objective_offset() != std::round(m.objective_offset())) return false;
  for (const Variable& v : m.variables()) {
    if (v.objective == 0.0) continue;
    if (v.type == VarType::kContinuous) return false;
    if (v.objective != std::round(v.objective)) return false;
  }
  return true;
}

// Activity-based bound tightening on integer variables, one row at a time,
// until nothing moves. Continuous bounds are read but never changed.
// Returns false when some domain becomes empty.
bool PropagateBounds(const MilpModel& m, std::vector<double>& lo, std::vector<double>& hi) {
  constexpr int kMaxPasses = 20;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool changed = false;
    for (const Constraint& row : m.constraints()) {
      // Smallest and largest attainable activity, with infinite terms counted
      // separately so a single unbounded term can still be tightened.
      double min_act = 0.0, max_act = 0.0;
      int min_inf = 0, max_inf = 0;
      for (const Term& t : row.terms) {
        const auto j = static_cast<std::size_t>(t.var);
        const double a = t.coef > 0 ? lo[j] : hi[j];
        const double b = t.coef > 0 ? hi[j] : lo[j];
        if (std::isfinite(a)) min_act += t.coef * a; else ++min_inf;
        if (std::isfinite(b)) max_act += t.coef * b; else ++max_inf;
      }
      const bool upper = row.relation != Relation::kGreaterEqual;  // activity <= rhs
      const bool lower = row.relation != Relation::kLessEqual;     // activity >= rhs
      if (upper && min_inf == 0 && min_act > row.rhs + kFeasibilityTol) return false;
      if (lower && max_inf == 0 && max_act < row.rhs - kFeasibilityTol) return false;
      for (const Term& t : row.terms) {
        const auto j = static_cast<std::size_t>(t.var);
        if (m.variable(t.var).type == VarType::kContinuous || t.coef == 0.0) continue;
        const double own_min = t.coef > 0 ? lo[j] : hi[j];
        const double own_max = t.coef > 0 ? hi[j] : lo[j];
        auto rest = [&](double act, int inf, double own) -> std::optional<double> {
          if (std::isfinite(own)) {
            if (inf > 0) return std::nullopt;
            return act - t.coef * own;
          }
          if (inf > 1) return std::nullopt;
          return act;
        };
        if (upper) {
          if (auto others = rest(min_act, min_inf, own_min)) {
            const double limit = (row.rhs - *others) / t.coef;
            if (t.coef > 0) {
              const double nh = std::floor(limit + kIntegralityTol);
              if (nh < hi[j]) { hi[j] = nh; changed = true; }
            } else {
              const double nl = std::ceil(limit - kIntegralityTol);
              if (nl > lo[j]) { lo[j] = nl; changed = true; }
            }
          }
        }
        if (lower) {
          if (auto others = rest(max_act, max_inf, own_max)) {
            const double limit = (row.rhs - *others) / t.coef;
            if (t.coef > 0) {
              const double nl = std::ceil(limit - kIntegralityTol);
              if (nl > lo[j]) { lo[j] = nl; changed = true; }
            } else {
              const double nh = std::floor(limit + kIntegralityTol);
              if (nh < hi[j]) { hi[j] = nh; changed = true; }
            }
          }
        }
        if (lo[j] > hi[j]) return false;
      }
    }
    if (!changed) break;
  }
  return true;
}

}  // namespace

MilpSolution SolveMilp(const MilpModel& model, const MilpOptions& options) {
  model.Validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  const int nv = model.num_vars();
  const double sense = model.sense() == Sense::kMaximize ? -1.0 : 1.0;
  const bool integral_objective = HasIntegralObjective(model);

  SearchNode root;
  root.lo.resize(static_cast<std::size_t>(nv));
  root.hi.resize(static_cast<std::size_t>(nv));
  for (int j = 0; j < nv; ++j) {
    const Variable& v = model.variable(j);
    double lo = v.lo;
    double hi = v.hi;
    if (v.type != VarType::kContinuous) {
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "integer variable " + std::to_string(j) + " must be bounded");
      }
      lo = std::ceil(lo - kIntegralityTol);
      hi = std::floor(hi + kIntegralityTol);
    }
    root.lo[static_cast<std::size_t>(j)] = lo;
    root.hi[static_cast<std::size_t>(j)] = hi;
  }

  MilpSolution out;
  double incumbent_obj = kInfinity;  // minimization form
  auto offer = [&](std::vector<double> values) {
    for (int j = 0; j < nv; ++j) {
      if (model.variable(j).type != VarType::kContinuous) {
        values[static_cast<std::size_t>(j)] = std::round(values[static_cast<std::size_t>(j)]);
      }
    }
    const double obj = sense * model.EvaluateObjective(values);
    if (obj < incumbent_obj - kObjectiveTol || out.values.empty()) {
      incumbent_obj = obj;
      out.values = std::move(values);
    }
  };
  auto prunable = [&](double bound) {
    if (out.values.empty()) return false;
    if (integral_objective) {
      return std::ceil(bound - kObjectiveTol) >= incumbent_obj - kObjectiveTol;
    }
    return bound >= incumbent_obj - kObjectiveTol;
  };
  auto bound_reached = [&] {
    return options.known_bound && !out.values.empty() &&
           incumbent_obj <= sense * *options.known_bound + kObjectiveTol;
  };

  if (options.initial_solution &&
      options.initial_solution->size() == static_cast<std::size_t>(nv) &&
      model.IsIntegral(*options.initial_solution) &&
      model.MaxViolation(*options.initial_solution) <= kFeasibilityTol) {
    offer(*options.initial_solution);
  }

  std::vector<SearchNode> stack;
  stack.push_back(std::move(root));
  bool first = true;
  bool out_of_budget = false;
  while (!stack.empty()) {
    if (bound_reached()) break;
    if (elapsed() > options.time_budget_seconds ||
        out.nodes_explored >= options.node_limit) {
      out_of_budget = true;
      break;
    }
    SearchNode node = std::move(stack.back());
    stack.pop_back();
    ++out.nodes_explored;

    if (!PropagateBounds(model, node.lo, node.hi)) {
      if (first) {
        out.status = MilpStatus::kInfeasible;
        return out;
      }
      continue;
    }
    LpSolution relax = SolveLpWithBounds(model, node.lo, node.hi, options.simplex);
    if (relax.status == LpStatus::kUnbounded) {
      if (first) {
        out.status = MilpStatus::kUnbounded;
        return out;
      }
      continue;
    }
    if (relax.status != LpStatus::kOptimal) {
      if (first) {
        out.status = MilpStatus::kInfeasible;
        return out;
      }
      continue;
    }
    const double bound = sense * relax.objective_value;
    if (first) {
      out.root_bound = relax.objective_value;
      first = false;
    }
    if (prunable(bound)) continue;

    int branch = -1;
    double best_dist = kIntegralityTol;
    for (int j = 0; j < nv; ++j) {
      if (model.variable(j).type == VarType::kContinuous) continue;
      const double v = relax.values[static_cast<std::size_t>(j)];
      const double frac = v - std::floor(v);
      const double dist = std::min(frac, 1.0 - frac);
      if (dist > best_dist) {
        best_dist = dist;
        branch = j;
      }
    }
    if (branch < 0) {
      offer(std::move(relax.values));
      continue;
    }

    const auto b = static_cast<std::size_t>(branch);
    const double v = relax.values[b];
    SearchNode down = node;
    down.hi[b] = std::floor(v);
    SearchNode up = std::move(node);
    up.lo[b] = std::ceil(v);
    // Depth-first: the child on the rounding side of the LP value is
    // explored first.
    if (v - std::floor(v) >= 0.5) {
      stack.push_back(std::move(down));
      stack.push_back(std::move(up));
    } else {
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }

  if (!out.values.empty()) {
    out.objective_value = model.EvaluateObjective(out.values);
    out.status = out_of_budget ? MilpStatus::kTimeBudgetExceeded : MilpStatus::kOptimal;
  } else {
    out.status = out_of_budget ? MilpStatus::kTimeBudgetExceeded : MilpStatus::kInfeasible;
  }
  return out;
}

}  // namespace innet::lp
