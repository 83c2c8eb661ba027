#include "innet/approx.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>

#include "innet/error.hpp"
#include "innet/lpsolve.hpp"
#include "innet/milp_models.hpp"

namespace innet {
namespace {

constexpr int kUnset = -1;
constexpr int kInfHeight = std::numeric_limits<int>::max();

}  // namespace

RoutedTree Daa(const NetworkGraph& g, const DelayConstraints& c) {
  const int n = g.num_nodes();
  c.Validate(n);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);
  std::vector<int> h(static_cast<std::size_t>(n), kInfHeight);
  std::vector<int> children(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  in_tree[0] = 1;
  h[0] = 0;
  for (int attached = 1; attached < n; ++attached) {
    // Tentative heights are rebuilt from scratch every round.
    for (NodeId v = 0; v < n; ++v) {
      if (!in_tree[static_cast<std::size_t>(v)]) h[static_cast<std::size_t>(v)] = kInfHeight;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (!in_tree[static_cast<std::size_t>(v)] ||
          children[static_cast<std::size_t>(v)] >= c.n(v) - 1) {
        continue;
      }
      for (const Neighbor& nb : g.neighbors(v)) {
        if (in_tree[static_cast<std::size_t>(nb.node)]) continue;
        int& hv = h[static_cast<std::size_t>(nb.node)];
        hv = std::min(hv, h[static_cast<std::size_t>(v)] + 1);
      }
    }
    NodeId pick = kNoParent;
    for (NodeId v = 0; v < n; ++v) {
      if (in_tree[static_cast<std::size_t>(v)] || h[static_cast<std::size_t>(v)] == kInfHeight) continue;
      if (pick == kNoParent || h[static_cast<std::size_t>(v)] < h[static_cast<std::size_t>(pick)]) {
        pick = v;
      }
    }
    if (pick == kNoParent) {
      throw Error(ErrorCode::kInfeasible,
                  "every attached neighbor of the remaining nodes is saturated");
    }
    NodeId best = kNoParent;
    for (const Neighbor& nb : g.neighbors(pick)) {
      const NodeId u = nb.node;
      if (!in_tree[static_cast<std::size_t>(u)] || children[static_cast<std::size_t>(u)] >= c.n(u) - 1) {
        continue;
      }
      if (best == kNoParent || h[static_cast<std::size_t>(u)] < h[static_cast<std::size_t>(best)]) best = u;
    }
    in_tree[static_cast<std::size_t>(pick)] = 1;
    parent[static_cast<std::size_t>(pick)] = best;
    ++children[static_cast<std::size_t>(best)];
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

int DaaMessageEstimate(const RoutedTree& t) { return 2 * (t.num_nodes() - 1); }

RoutedTree Lpr(const NetworkGraph& g, const DelayConstraints& c, double budget_seconds,
               std::ostream* trace) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const int n = g.num_nodes();
  IlpP3 ilp = BuildIlpP3(g, c);
  const IlpP3Layout& L = ilp.layout;
  const lp::MilpModel& m = ilp.model;
  std::vector<double> lo(static_cast<std::size_t>(m.num_vars()));
  std::vector<double> hi(static_cast<std::size_t>(m.num_vars()));
  for (int j = 0; j < m.num_vars(); ++j) {
    lo[static_cast<std::size_t>(j)] = m.variable(j).lo;
    hi[static_cast<std::size_t>(j)] = m.variable(j).hi;
  }

  std::vector<int> height(static_cast<std::size_t>(n), kUnset);
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  std::vector<int> children(static_cast<std::size_t>(n), 0);
  height[0] = 0;
  int attached = 1;
  auto attach = [&](int arc, int h) {
    const Arc& a = L.arcs[static_cast<std::size_t>(arc)];
    parent[static_cast<std::size_t>(a.from)] = a.to;
    height[static_cast<std::size_t>(a.from)] = h;
    ++children[static_cast<std::size_t>(a.to)];
    lo[static_cast<std::size_t>(L.x[static_cast<std::size_t>(arc)])] = 1.0;
    ++attached;
    if (trace) *trace << "attach " << a.from << " -> " << a.to << " height " << h << '\n';
  };

  for (int h = 1; attached < n; ++h) {
    if (std::chrono::duration<double>(Clock::now() - start).count() > budget_seconds) {
      throw Error(ErrorCode::kTimeBudgetExceeded, "LP rounding ran out of time");
    }
    const lp::LpSolution sol = lp::SolveLpWithBounds(m, lo, hi);
    if (sol.status != lp::LpStatus::kOptimal) {
      throw Error(ErrorCode::kInfeasible, "LP relaxation with fixed edges is " +
                                              lp::StatusName(sol.status));
    }
    if (trace) *trace << "round " << h << " lp " << sol.objective_value << '\n';
    auto xval = [&](int arc) {
      return sol.values[static_cast<std::size_t>(L.x[static_cast<std::size_t>(arc)])];
    };
    std::vector<char> claimed(static_cast<std::size_t>(n), 0);
    bool any = false;
    for (NodeId v = 0; v < n; ++v) {
      if (height[static_cast<std::size_t>(v)] != h - 1) continue;
      const int room = c.n(v) - 1 - children[static_cast<std::size_t>(v)];
      if (room <= 0) continue;
      // Incoming arcs from nodes not yet in the tree, ordered by source id.
      std::vector<int> incoming;
      for (int arc : L.in_arcs[static_cast<std::size_t>(v)]) {
        const NodeId src = L.arcs[static_cast<std::size_t>(arc)].from;
        if (height[static_cast<std::size_t>(src)] == kUnset && !claimed[static_cast<std::size_t>(src)]) {
          incoming.push_back(arc);
        }
      }
      std::sort(incoming.begin(), incoming.end(), [&](int a, int b) {
        return L.arcs[static_cast<std::size_t>(a)].from < L.arcs[static_cast<std::size_t>(b)].from;
      });
      std::vector<int> positive;
      for (int arc : incoming) {
        if (xval(arc) > lp::kFeasibilityTol) positive.push_back(arc);
      }
      std::vector<int> chosen;
      if (static_cast<int>(positive.size()) > room) {
        std::stable_sort(positive.begin(), positive.end(),
                         [&](int a, int b) { return xval(a) > xval(b); });
        chosen.assign(positive.begin(), positive.begin() + room);
      } else {
        // All positive arcs, then zero-valued ones by source id while
        // capacity remains.
        chosen = positive;
        for (int arc : incoming) {
          if (static_cast<int>(chosen.size()) >= room) break;
          if (xval(arc) <= lp::kFeasibilityTol) chosen.push_back(arc);
        }
      }
      for (int arc : chosen) {
        claimed[static_cast<std::size_t>(L.arcs[static_cast<std::size_t>(arc)].from)] = 1;
        attach(arc, h);
        any = true;
      }
    }
    if (any) continue;
    // Nothing grew at this level: hang the single best arc on any attached
    // node that still has room.
    int best = -1;
    for (std::size_t arc = 0; arc < L.arcs.size(); ++arc) {
      const Arc& a = L.arcs[arc];
      if (height[static_cast<std::size_t>(a.from)] != kUnset ||
          height[static_cast<std::size_t>(a.to)] == kUnset ||
          children[static_cast<std::size_t>(a.to)] >= c.n(a.to) - 1) {
        continue;
      }
      const double x = xval(static_cast<int>(arc));
      if (x <= lp::kFeasibilityTol) continue;
      if (best < 0 || x > xval(best)) best = static_cast<int>(arc);
    }
    if (best < 0) {
      throw Error(ErrorCode::kStalled, "LP rounding made no progress at height " + std::to_string(h));
    }
    const NodeId to = L.arcs[static_cast<std::size_t>(best)].to;
    attach(best, height[static_cast<std::size_t>(to)] + 1);
    h = height[static_cast<std::size_t>(L.arcs[static_cast<std::size_t>(best)].from)];
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

bool CheckNonfullFrontierProperty(const RoutedTree& t, const NetworkGraph& g,
                                  const DelayConstraints& c) {
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (t.children_count(v) >= c.n(v) - 1) continue;
    for (const Neighbor& nb : g.neighbors(v)) {
      if (t.height(nb.node) > t.height(v) + 1) return false;
    }
  }
  return true;
}

bool SatisfiesAccuracy(const RoutedTree& t, const DelayConstraints& c) {
  if (!c.min_cluster) return true;
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (!t.is_leaf(v) && t.children_count(v) < *c.min_cluster - 1) return false;
  }
  return true;
}

RoutedTree RepairAccuracy(const RoutedTree& t, const NetworkGraph& g, const DelayConstraints& c) {
  c.Validate(g.num_nodes());
  const int n = t.num_nodes();
  for (NodeId v = 0; v < n; ++v) {
    if (t.children_count(v) > c.n(v) - 1) {
      throw Error(ErrorCode::kInvalidArgument, "tree exceeds the child limit at node " + std::to_string(v));
    }
  }
  if (!c.min_cluster || *c.min_cluster <= 2) return t;
  const int need = *c.min_cluster - 1;
  RoutedTree cur = t;
  auto undersized = [&](NodeId v) {
    return cur.children_count(v) > 0 && cur.children_count(v) < need;
  };
  auto has_room = [&](NodeId u) { return cur.children_count(u) < c.n(u) - 1; };

  for (int guard = 0; guard < 4 * n * n; ++guard) {
    NodeId worst = kNoParent;
    for (NodeId v = 0; v < n; ++v) {
      if (!undersized(v)) continue;
      if (worst == kNoParent || cur.height(v) > cur.height(worst)) worst = v;
    }
    if (worst == kNoParent) return cur;

    if (worst == kBaseStation) {
      // The base cannot be dissolved; pull in a neighbor whose current
      // parent stays valid without it.
      NodeId pull = kNoParent;
      for (const Neighbor& nb : g.neighbors(kBaseStation)) {
        const NodeId w = nb.node;
        const NodeId p = cur.parent(w);
        if (p == kBaseStation || !has_room(kBaseStation)) continue;
        const int left = cur.children_count(p) - 1;
        if (left != 0 && left < need) continue;
        if (pull == kNoParent || cur.height(w) < cur.height(pull)) pull = w;
      }
      if (pull == kNoParent) {
        throw Error(ErrorCode::kInfeasible, "base station cannot reach the minimum cluster size");
      }
      std::vector<NodeId> parent = cur.parents();
      parent[static_cast<std::size_t>(pull)] = kBaseStation;
      cur = RoutedTree::FromParents(g, std::move(parent));
      continue;
    }

    // Dissolve `worst`: every child subtree moves elsewhere.
    std::vector<NodeId> kids;
    for (NodeId u = 0; u < n; ++u) {
      if (cur.parent(u) == worst) kids.push_back(u);
    }
    for (NodeId child : kids) {
      std::vector<char> in_sub(static_cast<std::size_t>(n), 0);
      for (NodeId u : cur.Subtree(child)) in_sub[static_cast<std::size_t>(u)] = 1;
      // Rank: settled parents (or the base) first, then other undersized
      // parents, each by height then id.
      NodeId best = kNoParent;
      std::tuple<int, int, NodeId> best_key{};
      for (const Neighbor& nb : g.neighbors(child)) {
        const NodeId u = nb.node;
        if (u == worst || in_sub[static_cast<std::size_t>(u)] || !has_room(u)) continue;
        int tier;
        if (u == kBaseStation || cur.children_count(u) >= need) {
          tier = 0;
        } else if (cur.children_count(u) > 0) {
          tier = 1;
        } else {
          continue;
        }
        const std::tuple<int, int, NodeId> key{tier, cur.height(u), u};
        if (best == kNoParent || key < best_key) {
          best = u;
          best_key = key;
        }
      }
      if (best == kNoParent) {
        throw Error(ErrorCode::kInfeasible,
                    "no parent can adopt the subtree of node " + std::to_string(child));
      }
      std::vector<NodeId> next = cur.parents();
      next[static_cast<std::size_t>(child)] = best;
      cur = RoutedTree::FromParents(g, std::move(next));
    }
  }
  throw Error(ErrorCode::kInfeasible, "accuracy repair did not converge");
}

}  // namespace innet
