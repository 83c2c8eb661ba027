#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "innet/lpsolve.hpp"
#include "innet/netmodel.hpp"
#include "innet/plans.hpp"
#include "innet/trees.hpp"

namespace innet {

// ---- exact communication-plan model ---------------------------------------

inline constexpr int kDefaultP1NodeCap = 7;

struct IlpP1Options {
  int max_nodes = kDefaultP1NodeCap;
  // Adds the lower halves of the product linearizations (p, t and c are
  // forced up as well as down). Off by default.
  bool strict_products = false;
};

// Variable index maps. c and t carry a level n in [0, |V|); t is only
// defined for n >= 1.
struct IlpP1Layout {
  int n = 0;
  int x_base = 0, p_base = 0, c_base = 0, t_base = 0;

  int x(NodeId i, NodeId j) const { return x_base + i * n + j; }
  int p(NodeId i, NodeId j, NodeId k) const { return p_base + (i * n + j) * n + k; }
  int c(NodeId i, NodeId j, int level) const { return c_base + (i * n + j) * n + level; }
  int t(NodeId i, NodeId j, NodeId k, int level) const {
    return t_base + ((i * n + j) * n + k) * (n - 1) + (level - 1);
  }
  int num_vars() const { return t_base + n * n * n * (n - 1); }
};

struct IlpP1 {
  lp::MilpModel model;
  IlpP1Layout layout;
};

// Throws kInstanceTooLarge above opts.max_nodes.
IlpP1 BuildIlpP1(const NetworkGraph& g, const ShortestPathTable& spt, const EnergyParams& e,
                 const DelayConstraints& c, const IlpP1Options& opts = {});

// Reads x, checks the plan and that its energy reproduces the objective.
CommPlan ExtractPlanP1(const lp::MilpSolution& sol, const IlpP1Layout& layout,
                       const ShortestPathTable& spt, const EnergyParams& e,
                       const DelayConstraints& c);

// Full variable vector for a plan: x from the plan, p/c/t at the values
// the recursion assigns. Used for warm starts and encoding checks.
std::vector<double> P1ValuesFromPlan(const CommPlan& plan, const IlpP1Layout& layout);

// ---- degree-constrained tree model -----------------------------------------

struct Arc {
  NodeId from = 0;  // child side
  NodeId to = 0;    // parent side
  double weight = 1.0;
};

struct IlpP3Layout {
  int n = 0;
  std::vector<Arc> arcs;
  std::vector<int> x;  // per arc
  std::vector<int> f;  // per arc
  std::vector<std::vector<int>> out_arcs;  // arc indices leaving v
  std::vector<std::vector<int>> in_arcs;   // arc indices entering v
  std::vector<int> l;  // per node, only with an accuracy bound
};

struct IlpP3 {
  lp::MilpModel model;
  IlpP3Layout layout;
};

// Flow model; the objective weights each f_e by the edge weight.
IlpP3 BuildIlpP3(const NetworkGraph& g, const DelayConstraints& c,
                 std::optional<int> accuracy = std::nullopt);

// Tree from the selected arcs, with flow conservation and subtree sizes
// re-checked.
RoutedTree ExtractTreeP3(const lp::MilpSolution& sol, const IlpP3Layout& layout,
                         const NetworkGraph& g);

std::vector<double> P3ValuesFromTree(const RoutedTree& t, const IlpP3Layout& layout);

// Lower bound on sum_v d_T(v) over degree-feasible trees from hop layers
// and per-level child capacity; nullopt when even that relaxation has no
// solution. Only meaningful with unit weights.
std::optional<int> DdctLayerBound(const NetworkGraph& g, const DelayConstraints& c);

struct DdctSolveOptions {
  double time_budget_seconds = 60.0;
  std::optional<int> accuracy;
  // Seed the search with a heuristic tree. With unit weights the search
  // stops once the incumbent meets the layer bound, and without an accuracy
  // bound the level search supplies the optimum as incumbent and bound.
  bool use_heuristics = true;
};

struct DdctResult {
  lp::MilpStatus status = lp::MilpStatus::kInfeasible;
  std::optional<RoutedTree> tree;
  double objective = 0.0;
  double root_bound = 0.0;
  std::int64_t nodes_explored = 0;
};

// Solves the flow model. Never throws on infeasibility or time-out; the
// status says what happened.
DdctResult SolveDdct(const NetworkGraph& g, const DelayConstraints& c,
                     const DdctSolveOptions& opts = {});

// Exact search over height levels for unit-weight graphs; child limits
// only. Reports the optimum as a sum of heights. An incumbent, if given,
// serves as the initial upper bound.
DdctResult SolveDdctByLevels(const NetworkGraph& g, const DelayConstraints& c,
                             double budget_seconds = 60.0,
                             const std::optional<RoutedTree>& incumbent = std::nullopt);

// Optimal degree-constrained tree or an exception (kInfeasible,
// kTimeBudgetExceeded).
RoutedTree BuildDdctIlp(const NetworkGraph& g, const DelayConstraints& c,
                        double budget_seconds = 60.0);

}  // namespace innet
