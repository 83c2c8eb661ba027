#include "innet/milp_models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "innet/approx.hpp"
#include "innet/error.hpp"

namespace innet {

using lp::Relation;
using lp::Term;

namespace {

std::string Name(char family, std::initializer_list<int> idx) {
  std::string s(1, family);
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

// a*u + b*v with u == v folded into one term.
std::vector<Term> Pair(int u, double a, int v, double b) {
  if (u == v) return {{u, a + b}};
  return {{u, a}, {v, b}};
}

}  // namespace

IlpP1 BuildIlpP1(const NetworkGraph& g, const ShortestPathTable& spt, const EnergyParams& e,
                 const DelayConstraints& c, const IlpP1Options& opts) {
  const int n = g.num_nodes();
  if (n > opts.max_nodes) {
    throw Error(ErrorCode::kInstanceTooLarge, "exact plan model limited to " +
                                                  std::to_string(opts.max_nodes) + " nodes, got " +
                                                  std::to_string(n));
  }
  e.Validate();
  c.Validate(n);

  IlpP1 out;
  IlpP1Layout& L = out.layout;
  L.n = n;
  L.x_base = 0;
  L.p_base = n * n;
  L.c_base = L.p_base + n * n * n;
  L.t_base = L.c_base + n * n * n;
  lp::MilpModel& m = out.model;

  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const double cost =
          e.e_b() * (e.fft_bytes * spt.dist(i, j) + e.eig_bytes * spt.dist(j, kBaseStation));
      m.AddBinary(cost, Name('x', {i, j}));
    }
  }
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      for (NodeId k = 0; k < n; ++k) m.AddBinary(0.0, Name('p', {i, j, k}));
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      for (int lv = 0; lv < n; ++lv) {
        const int var = m.AddBinary(0.0, Name('c', {i, j, lv}));
        if (i == j) m.SetBounds(var, 0.0, 0.0);
      }
    }
  }
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      for (NodeId k = 0; k < n; ++k)
        for (int lv = 1; lv < n; ++lv) m.AddBinary(0.0, Name('t', {i, j, k, lv}));

  // Head flag: x_ii is 1 exactly when some other FFT is evaluated at i.
  for (NodeId i = 0; i < n; ++i) {
    std::vector<Term> lo{{L.x(i, i), -1.0}};
    std::vector<Term> hi{{L.x(i, i), 1.0}};
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) continue;
      lo.push_back({L.x(j, i), 1.0 / n});
      hi.push_back({L.x(j, i), -1.0});
    }
    m.AddConstraint(std::move(lo), Relation::kLessEqual, 0.0, Name('h', {i}));
    m.AddConstraint(std::move(hi), Relation::kLessEqual, 0.0, Name('H', {i}));
  }
  // Coverage.
  for (NodeId i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (NodeId j = 0; j < n; ++j) row.push_back({L.x(i, j), 1.0});
    m.AddConstraint(std::move(row), Relation::kGreaterEqual, 1.0, Name('v', {i}));
  }
  // Shared member k of N_i and N_j.
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      for (NodeId k = 0; k < n; ++k) {
        std::vector<Term> row = Pair(L.x(k, i), -1.0, L.x(k, j), -1.0);
        row.push_back({L.p(i, j, k), 2.0});
        m.AddConstraint(std::move(row), Relation::kLessEqual, 0.0);
        if (opts.strict_products) {
          std::vector<Term> lo = Pair(L.x(k, i), -1.0, L.x(k, j), -1.0);
          lo.push_back({L.p(i, j, k), 1.0});
          m.AddConstraint(std::move(lo), Relation::kGreaterEqual, -1.0);
        }
      }
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      std::vector<Term> row{{L.c(i, j, 0), 1.0}};
      for (NodeId k = 0; k < n; ++k) row.push_back({L.p(i, j, k), -1.0});
      m.AddConstraint(std::move(row), Relation::kLessEqual, 0.0);
      if (opts.strict_products && i != j) {
        for (NodeId k = 0; k < n; ++k) {
          m.AddConstraint({{L.c(i, j, 0), 1.0}, {L.p(i, j, k), -1.0}}, Relation::kGreaterEqual, 0.0);
        }
      }
    }
  }
  // Every pair of heads must be linked by a chain of overlaps. A head
  // paired with itself is skipped: c_ii is pinned to zero.
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      m.AddConstraint({{L.c(i, j, n - 1), 1.0}, {L.x(i, i), -1.0}, {L.x(j, j), -1.0}},
                      Relation::kGreaterEqual, -1.0, Name('k', {i, j}));
    }
  }
  // Chain propagation through a common third cluster.
  for (int lv = 1; lv < n; ++lv) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        for (NodeId k = 0; k < n; ++k) {
          std::vector<Term> row = Pair(L.c(i, k, lv - 1), -1.0, L.c(j, k, lv - 1), -1.0);
          row.push_back({L.t(i, j, k, lv), 2.0});
          m.AddConstraint(std::move(row), Relation::kLessEqual, 0.0);
          if (opts.strict_products) {
            std::vector<Term> lo = Pair(L.c(i, k, lv - 1), -1.0, L.c(j, k, lv - 1), -1.0);
            lo.push_back({L.t(i, j, k, lv), 1.0});
            m.AddConstraint(std::move(lo), Relation::kGreaterEqual, -1.0);
          }
        }
        std::vector<Term> row{{L.c(i, j, lv), 1.0}, {L.c(i, j, lv - 1), -1.0}};
        for (NodeId k = 0; k < n; ++k) row.push_back({L.t(i, j, k, lv), -1.0});
        m.AddConstraint(std::move(row), Relation::kLessEqual, 0.0);
        if (opts.strict_products && i != j) {
          m.AddConstraint({{L.c(i, j, lv), 1.0}, {L.c(i, j, lv - 1), -1.0}},
                          Relation::kGreaterEqual, 0.0);
          for (NodeId k = 0; k < n; ++k) {
            m.AddConstraint({{L.c(i, j, lv), 1.0}, {L.t(i, j, k, lv), -1.0}},
                            Relation::kGreaterEqual, 0.0);
          }
        }
      }
    }
  }
  // Delay bound, then the optional minimum cluster size.
  for (NodeId j = 0; j < n; ++j) {
    std::vector<Term> row;
    for (NodeId i = 0; i < n; ++i) row.push_back({L.x(i, j), 1.0});
    m.AddConstraint(std::move(row), Relation::kLessEqual, c.n(j), Name('d', {j}));
  }
  if (c.min_cluster) {
    for (NodeId j = 0; j < n; ++j) {
      std::vector<Term> row;
      for (NodeId i = 0; i < n; ++i) {
        row.push_back({L.x(i, j), i == j ? 1.0 - *c.min_cluster : 1.0});
      }
      m.AddConstraint(std::move(row), Relation::kGreaterEqual, 0.0, Name('a', {j}));
    }
  }
  return out;
}

std::vector<double> P1ValuesFromPlan(const CommPlan& plan, const IlpP1Layout& L) {
  const int n = L.n;
  if (plan.num_nodes() != n) throw Error(ErrorCode::kInvalidArgument, "plan size mismatch");
  std::vector<double> v(static_cast<std::size_t>(L.num_vars()), 0.0);
  auto at = [&](int idx) -> double& { return v[static_cast<std::size_t>(idx)]; };
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) at(L.x(i, j)) = plan.assigned(i, j) ? 1.0 : 0.0;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      bool any = false;
      for (NodeId k = 0; k < n; ++k) {
        const bool both = plan.assigned(k, i) && plan.assigned(k, j);
        at(L.p(i, j, k)) = both ? 1.0 : 0.0;
        any = any || both;
      }
      at(L.c(i, j, 0)) = (any && i != j) ? 1.0 : 0.0;
    }
  }
  for (int lv = 1; lv < n; ++lv) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        bool reach = at(L.c(i, j, lv - 1)) > 0.5;
        for (NodeId k = 0; k < n; ++k) {
          const bool both = at(L.c(i, k, lv - 1)) > 0.5 && at(L.c(j, k, lv - 1)) > 0.5;
          at(L.t(i, j, k, lv)) = both ? 1.0 : 0.0;
          reach = reach || both;
        }
        at(L.c(i, j, lv)) = (reach && i != j) ? 1.0 : 0.0;
      }
    }
  }
  return v;
}

CommPlan ExtractPlanP1(const lp::MilpSolution& sol, const IlpP1Layout& L,
                       const ShortestPathTable& spt, const EnergyParams& e,
                       const DelayConstraints& c) {
  if (sol.values.size() != static_cast<std::size_t>(L.num_vars())) {
    throw Error(ErrorCode::kInconsistentSolution, "solution does not match the plan model");
  }
  CommPlan plan(L.n);
  for (NodeId i = 0; i < L.n; ++i) {
    for (NodeId j = 0; j < L.n; ++j) {
      if (sol.values[static_cast<std::size_t>(L.x(i, j))] > 0.5) plan.Assign(i, j);
    }
  }
  const auto violations = ValidatePlan(plan, c);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInconsistentSolution,
                "extracted plan violates " + ViolationName(violations.front().kind));
  }
  const double energy = PlanEnergy(plan, spt, e).total;
  if (std::abs(energy - sol.objective_value) > lp::kObjectiveTol) {
    throw Error(ErrorCode::kInconsistentSolution, "plan energy does not reproduce the objective");
  }
  return plan;
}

IlpP3 BuildIlpP3(const NetworkGraph& g, const DelayConstraints& c, std::optional<int> accuracy) {
  const int n = g.num_nodes();
  c.Validate(n);
  if (accuracy && (*accuracy < 1 || *accuracy > c.max_n())) {
    throw Error(ErrorCode::kInvalidArgument, "n_a must lie in [1, max n_v]");
  }
  IlpP3 out;
  IlpP3Layout& L = out.layout;
  lp::MilpModel& m = out.model;
  L.n = n;
  for (const Edge& e : g.edges()) {
    L.arcs.push_back({e.u, e.v, e.weight});
    L.arcs.push_back({e.v, e.u, e.weight});
  }
  L.out_arcs.assign(static_cast<std::size_t>(n), {});
  L.in_arcs.assign(static_cast<std::size_t>(n), {});
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    const Arc& arc = L.arcs[a];
    L.x.push_back(m.AddBinary(0.0, Name('x', {arc.from, arc.to})));
    L.out_arcs[static_cast<std::size_t>(arc.from)].push_back(static_cast<int>(a));
    L.in_arcs[static_cast<std::size_t>(arc.to)].push_back(static_cast<int>(a));
  }
  for (const Arc& arc : L.arcs) {
    L.f.push_back(m.AddVariable(0.0, n - 1, lp::VarType::kInteger, arc.weight,
                                Name('f', {arc.from, arc.to})));
  }
  auto arc_terms = [&](const std::vector<int>& arcs, const std::vector<int>& vars, double coef,
                       std::vector<Term>& row) {
    for (int a : arcs) row.push_back({vars[static_cast<std::size_t>(a)], coef});
  };
  // Unit supply at each node, all of it absorbed by the base.
  for (NodeId v = 0; v < n; ++v) {
    std::vector<Term> row;
    arc_terms(L.in_arcs[static_cast<std::size_t>(v)], L.f, 1.0, row);
    arc_terms(L.out_arcs[static_cast<std::size_t>(v)], L.f, -1.0, row);
    m.AddConstraint(std::move(row), Relation::kEqual, v == kBaseStation ? n - 1.0 : -1.0,
                    Name('b', {v}));
  }
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    m.AddConstraint({{L.f[a], 1.0}, {L.x[a], -(n - 1.0)}}, Relation::kLessEqual, 0.0);
  }
  {
    std::vector<Term> row;
    for (int var : L.x) row.push_back({var, 1.0});
    m.AddConstraint(std::move(row), Relation::kEqual, n - 1.0, "edges");
  }
  for (NodeId v = 1; v < n; ++v) {
    std::vector<Term> row;
    arc_terms(L.out_arcs[static_cast<std::size_t>(v)], L.x, 1.0, row);
    m.AddConstraint(std::move(row), Relation::kEqual, 1.0, Name('o', {v}));
  }
  for (NodeId v = 0; v < n; ++v) {
    std::vector<Term> row;
    arc_terms(L.in_arcs[static_cast<std::size_t>(v)], L.x, 1.0, row);
    m.AddConstraint(std::move(row), Relation::kLessEqual, c.n(v) - 1.0, Name('i', {v}));
  }
  if (accuracy) {
    for (NodeId v = 0; v < n; ++v) {
      const int l = m.AddBinary(0.0, Name('l', {v}));
      L.l.push_back(l);
      const auto& in = L.in_arcs[static_cast<std::size_t>(v)];
      std::vector<Term> enough{{l, -(*accuracy - 1.0)}};
      arc_terms(in, L.x, 1.0, enough);
      m.AddConstraint(std::move(enough), Relation::kGreaterEqual, 0.0, Name('a', {v}));
      std::vector<Term> lo{{l, -1.0}};
      arc_terms(in, L.x, 1.0 / n, lo);
      m.AddConstraint(std::move(lo), Relation::kLessEqual, 0.0);
      std::vector<Term> hi{{l, 1.0}};
      arc_terms(in, L.x, -1.0, hi);
      m.AddConstraint(std::move(hi), Relation::kLessEqual, 0.0);
    }
  }
  return out;
}

RoutedTree ExtractTreeP3(const lp::MilpSolution& sol, const IlpP3Layout& L,
                         const NetworkGraph& g) {
  const int n = L.n;
  auto val = [&](int var) { return sol.values.at(static_cast<std::size_t>(var)); };
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    if (val(L.x[a]) < 0.5) continue;
    const Arc& arc = L.arcs[a];
    if (arc.from == kBaseStation || parent[static_cast<std::size_t>(arc.from)] != kNoParent) {
      throw Error(ErrorCode::kInconsistentSolution,
                  "node " + std::to_string(arc.from) + " has several outgoing tree arcs");
    }
    parent[static_cast<std::size_t>(arc.from)] = arc.to;
  }
  RoutedTree t = [&] {
    try {
      return RoutedTree::FromParents(g, parent);
    } catch (const Error& err) {
      throw Error(ErrorCode::kInconsistentSolution, std::string("selected arcs: ") + err.what());
    }
  }();
  for (NodeId v = 0; v < n; ++v) {
    double net = 0.0;
    for (int a : L.in_arcs[static_cast<std::size_t>(v)]) net += val(L.f[static_cast<std::size_t>(a)]);
    for (int a : L.out_arcs[static_cast<std::size_t>(v)]) net -= val(L.f[static_cast<std::size_t>(a)]);
    const double want = v == kBaseStation ? n - 1.0 : -1.0;
    if (std::abs(net - want) > 1e-6) {
      throw Error(ErrorCode::kInconsistentSolution,
                  "flow not conserved at node " + std::to_string(v));
    }
  }
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    const Arc& arc = L.arcs[a];
    const bool on_tree = arc.from != kBaseStation && t.parent(arc.from) == arc.to;
    const double want = on_tree ? static_cast<double>(t.Subtree(arc.from).size()) : 0.0;
    if (std::abs(val(L.f[a]) - want) > 1e-6) {
      throw Error(ErrorCode::kInconsistentSolution, "flow on arc " + std::to_string(arc.from) +
                                                        "->" + std::to_string(arc.to) +
                                                        " differs from its subtree size");
    }
  }
  return t;
}

std::vector<double> P3ValuesFromTree(const RoutedTree& t, const IlpP3Layout& L) {
  std::size_t total = L.x.size() + L.f.size() + L.l.size();
  std::vector<double> v(total, 0.0);
  for (std::size_t a = 0; a < L.arcs.size(); ++a) {
    const Arc& arc = L.arcs[a];
    if (arc.from != kBaseStation && t.parent(arc.from) == arc.to) {
      v[static_cast<std::size_t>(L.x[a])] = 1.0;
      v[static_cast<std::size_t>(L.f[a])] = static_cast<double>(t.Subtree(arc.from).size());
    }
  }
  for (std::size_t u = 0; u < L.l.size(); ++u) {
    v[static_cast<std::size_t>(L.l[u])] = t.is_leaf(static_cast<NodeId>(u)) ? 0.0 : 1.0;
  }
  return v;
}

std::optional<int> DdctLayerBound(const NetworkGraph& g, const DelayConstraints& c) {
  const int n = g.num_nodes();
  c.Validate(n);
  if (n == 1) return 0;
  const ShortestPathTable spt = ComputeShortestPaths(g);
  // reach[k]: nodes within k hops of the base.
  std::vector<int> reach(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) {
    for (int k = spt.hops(v, kBaseStation); k < n; ++k) ++reach[static_cast<std::size_t>(k)];
  }
  // cap[m]: most children m nodes can take together.
  std::vector<int> caps;
  for (NodeId v = 1; v < n; ++v) caps.push_back(c.n(v) - 1);
  std::sort(caps.rbegin(), caps.rend());
  std::vector<int> cap(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t m = 0; m < caps.size(); ++m) cap[m + 1] = cap[m] + caps[m];

  constexpr int kInf = std::numeric_limits<int>::max();
  const auto nn = static_cast<std::size_t>(n) + 1;
  // best[A][b]: least cost with A nodes placed and b of them on the last level.
  std::vector<int> best(nn * nn, kInf);
  best[1 * nn + 1] = 0;
  int answer = kInf;
  for (int k = 1; k < n; ++k) {
    std::vector<int> next(nn * nn, kInf);
    for (int a = 1; a < n; ++a) {
      for (int b = 1; b <= a; ++b) {
        const int cur = best[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)];
        if (cur == kInf) continue;
        const int room = k == 1 ? c.n(kBaseStation) - 1 : cap[static_cast<std::size_t>(b)];
        const int most = std::min({room, reach[static_cast<std::size_t>(k)] - a, n - a});
        for (int nb = 1; nb <= most; ++nb) {
          const int cost = cur + k * nb;
          if (a + nb == n) {
            answer = std::min(answer, cost);
            continue;
          }
          int& slot = next[static_cast<std::size_t>(a + nb) * nn + static_cast<std::size_t>(nb)];
          slot = std::min(slot, cost);
        }
      }
    }
    best = std::move(next);
  }
  if (answer == kInf) return std::nullopt;
  return answer;
}

namespace {

double TreeObjective(const RoutedTree& t, const NetworkGraph& g) {
  double total = 0.0;
  for (NodeId v = 1; v < t.num_nodes(); ++v) total += TreePathWeight(t, g, v);
  return total;
}

// Fill one height level at a time with a maximum capacitated matching
// between the current level and unattached neighbors; nodes with the fewest
// candidate parents are matched first.
std::optional<RoutedTree> LevelFillTree(const NetworkGraph& g, const DelayConstraints& c) {
  const int n = g.num_nodes();
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  std::vector<char> attached(static_cast<std::size_t>(n), 0);
  std::vector<int> room(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) room[static_cast<std::size_t>(v)] = c.n(v) - 1;
  attached[0] = 1;
  int count = 1;
  std::vector<NodeId> level{kBaseStation};
  while (count < n) {
    std::vector<char> in_level(static_cast<std::size_t>(n), 0);
    for (NodeId u : level) in_level[static_cast<std::size_t>(u)] = 1;
    std::vector<NodeId> cand;
    for (NodeId v = 0; v < n; ++v) {
      if (attached[static_cast<std::size_t>(v)]) continue;
      for (const Neighbor& nb : g.neighbors(v)) {
        if (in_level[static_cast<std::size_t>(nb.node)]) {
          cand.push_back(v);
          break;
        }
      }
    }
    auto degree = [&](NodeId v) {
      int d = 0;
      for (const Neighbor& nb : g.neighbors(v)) d += in_level[static_cast<std::size_t>(nb.node)];
      return d;
    };
    std::stable_sort(cand.begin(), cand.end(),
                     [&](NodeId a, NodeId b) { return degree(a) < degree(b); });
    std::vector<NodeId> match(static_cast<std::size_t>(n), kNoParent);
    std::vector<int> used(static_cast<std::size_t>(n), 0);
    std::vector<char> visited;
    // Augmenting path from child v; parents have room[] slots.
    auto augment = [&](auto&& self, NodeId v) -> bool {
      for (const Neighbor& nb : g.neighbors(v)) {
        const NodeId u = nb.node;
        if (!in_level[static_cast<std::size_t>(u)] || visited[static_cast<std::size_t>(u)]) continue;
        visited[static_cast<std::size_t>(u)] = 1;
        if (used[static_cast<std::size_t>(u)] < room[static_cast<std::size_t>(u)]) {
          ++used[static_cast<std::size_t>(u)];
          match[static_cast<std::size_t>(v)] = u;
          return true;
        }
        for (NodeId w : cand) {
          if (match[static_cast<std::size_t>(w)] == u && self(self, w)) {
            match[static_cast<std::size_t>(v)] = u;
            return true;
          }
        }
      }
      return false;
    };
    std::vector<NodeId> next;
    for (NodeId v : cand) {
      visited.assign(static_cast<std::size_t>(n), 0);
      augment(augment, v);
    }
    for (NodeId v : cand) {
      const NodeId u = match[static_cast<std::size_t>(v)];
      if (u == kNoParent) continue;
      parent[static_cast<std::size_t>(v)] = u;
      attached[static_cast<std::size_t>(v)] = 1;
      --room[static_cast<std::size_t>(u)];
      ++count;
      next.push_back(v);
    }
    if (next.empty()) return std::nullopt;
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

// Moves whole subtrees under shallower parents with spare capacity until no
// such move lowers the objective.
RoutedTree ImproveTree(RoutedTree t, const NetworkGraph& g, const DelayConstraints& c) {
  const int n = g.num_nodes();
  bool improved = true;
  while (improved) {
    improved = false;
    for (NodeId v = 1; v < n; ++v) {
      const std::vector<NodeId> sub = t.Subtree(v);
      std::vector<char> in_sub(static_cast<std::size_t>(n), 0);
      for (NodeId u : sub) in_sub[static_cast<std::size_t>(u)] = 1;
      const double before = TreePathWeight(t, g, v);
      NodeId best = kNoParent;
      double best_gain = 1e-9;
      for (const Neighbor& nb : g.neighbors(v)) {
        const NodeId u = nb.node;
        if (in_sub[static_cast<std::size_t>(u)] || u == t.parent(v)) continue;
        if (t.children_count(u) >= c.n(u) - 1) continue;
        const double gain = (before - TreePathWeight(t, g, u) - nb.weight) * sub.size();
        if (gain > best_gain) {
          best_gain = gain;
          best = u;
        }
      }
      if (best == kNoParent) continue;
      std::vector<NodeId> parent = t.parents();
      parent[static_cast<std::size_t>(v)] = best;
      t = RoutedTree::FromParents(g, std::move(parent));
      improved = true;
    }
  }
  return t;
}

}  // namespace

DdctResult SolveDdct(const NetworkGraph& g, const DelayConstraints& c,
                     const DdctSolveOptions& opts) {
  IlpP3 ilp = BuildIlpP3(g, c, opts.accuracy);
  DelayConstraints with_accuracy = c;
  with_accuracy.min_cluster = opts.accuracy;

  lp::MilpOptions mopts;
  mopts.time_budget_seconds = opts.time_budget_seconds;
  if (opts.use_heuristics) {
    std::vector<RoutedTree> seeds;
    try {
      seeds.push_back(Daa(g, c));
    } catch (const Error&) {
    }
    if (auto t = LevelFillTree(g, c)) seeds.push_back(*t);
    std::optional<RoutedTree> start;
    double start_obj = std::numeric_limits<double>::infinity();
    for (RoutedTree& seed : seeds) {
      RoutedTree cand = ImproveTree(seed, g, c);
      if (opts.accuracy && !SatisfiesAccuracy(cand, with_accuracy)) {
        try {
          cand = RepairAccuracy(cand, g, with_accuracy);
        } catch (const Error&) {
          continue;
        }
      }
      if (ilp.model.MaxViolation(P3ValuesFromTree(cand, ilp.layout)) > lp::kFeasibilityTol) continue;
      const double obj = TreeObjective(cand, g);
      if (obj < start_obj) {
        start_obj = obj;
        start = std::move(cand);
      }
    }
    if (g.unit_weights()) {
      const std::optional<int> bound = DdctLayerBound(g, c);
      if (!bound) {
        DdctResult r;
        r.status = lp::MilpStatus::kInfeasible;
        return r;
      }
      mopts.known_bound = *bound;
      const bool at_bound = start && start_obj <= *bound;
      if (!opts.accuracy && !at_bound) {
        const auto t0 = std::chrono::steady_clock::now();
        DdctResult levels = SolveDdctByLevels(g, c, opts.time_budget_seconds, start);
        if (levels.status == lp::MilpStatus::kInfeasible) return levels;
        if (levels.tree) start = levels.tree;
        if (levels.status == lp::MilpStatus::kOptimal) {
          mopts.known_bound = levels.objective;
        } else {
          mopts.time_budget_seconds = std::max(
              0.0, opts.time_budget_seconds -
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
      }
    }
    if (start) mopts.initial_solution = P3ValuesFromTree(*start, ilp.layout);
  }

  const lp::MilpSolution sol = lp::SolveMilp(ilp.model, mopts);
  DdctResult r;
  r.status = sol.status;
  r.root_bound = sol.root_bound;
  r.nodes_explored = sol.nodes_explored;
  if (sol.has_incumbent()) {
    r.tree = ExtractTreeP3(sol, ilp.layout, g);
    r.objective = sol.objective_value;
  }
  return r;
}

RoutedTree BuildDdctIlp(const NetworkGraph& g, const DelayConstraints& c, double budget_seconds) {
  DdctSolveOptions opts;
  opts.time_budget_seconds = budget_seconds;
  DdctResult r = SolveDdct(g, c, opts);
  if (r.status == lp::MilpStatus::kTimeBudgetExceeded) {
    throw Error(ErrorCode::kTimeBudgetExceeded, "degree-constrained tree solve ran out of time");
  }
  if (r.status != lp::MilpStatus::kOptimal || !r.tree) {
    throw Error(ErrorCode::kInfeasible, "no tree satisfies the child limits");
  }
  return *r.tree;
}

}  // namespace innet
