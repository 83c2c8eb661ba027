#include "innet/trees.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "innet/error.hpp"
#include "innet/lpsolve.hpp"

namespace innet {

RoutedTree RoutedTree::FromParents(const NetworkGraph& g, std::vector<NodeId> parent) {
  const int n = g.num_nodes();
  if (parent.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::kInvalidArgument, "parent list must cover every node");
  }
  if (parent[0] != kNoParent) {
    throw Error(ErrorCode::kInvalidArgument, "base station cannot have a parent");
  }
  RoutedTree t;
  t.children_.assign(static_cast<std::size_t>(n), 0);
  for (NodeId v = 1; v < n; ++v) {
    const NodeId p = parent[static_cast<std::size_t>(v)];
    if (p < 0 || p >= n || p == v) {
      throw Error(ErrorCode::kInvalidArgument, "node " + std::to_string(v) + " has no valid parent");
    }
    if (!g.has_edge(v, p)) {
      throw Error(ErrorCode::kInvalidArgument, "tree edge " + std::to_string(v) + "-" +
                                                   std::to_string(p) + " not in graph");
    }
    ++t.children_[static_cast<std::size_t>(p)];
  }
  // Heights by walking up; a walk longer than n means a cycle.
  t.height_.assign(static_cast<std::size_t>(n), -1);
  t.height_[0] = 0;
  std::vector<NodeId> walk;
  for (NodeId v = 1; v < n; ++v) {
    walk.clear();
    NodeId cur = v;
    while (t.height_[static_cast<std::size_t>(cur)] < 0) {
      walk.push_back(cur);
      if (static_cast<int>(walk.size()) > n) {
        throw Error(ErrorCode::kInvalidArgument, "parent pointers contain a cycle");
      }
      cur = parent[static_cast<std::size_t>(cur)];
    }
    int h = t.height_[static_cast<std::size_t>(cur)];
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
      t.height_[static_cast<std::size_t>(*it)] = ++h;
    }
  }
  t.parent_ = std::move(parent);
  return t;
}

std::vector<NodeId> RoutedTree::Subtree(NodeId v) const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < num_nodes(); ++u) {
    NodeId cur = u;
    while (cur != kNoParent && cur != v) cur = parent(cur);
    if (cur == v) out.push_back(u);
  }
  return out;
}

TreeMetrics ComputeTreeMetrics(const RoutedTree& t) {
  TreeMetrics m;
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    m.height = std::max(m.height, t.height(v));
    m.sum_heights += t.height(v);
    if (!t.is_leaf(v)) ++m.non_leaf_count;
    m.max_children = std::max(m.max_children, t.children_count(v));
  }
  return m;
}

double TreePathWeight(const RoutedTree& t, const NetworkGraph& g, NodeId v) {
  double w = 0.0;
  while (v != kBaseStation) {
    w += *g.edge_weight(v, t.parent(v));
    v = t.parent(v);
  }
  return w;
}

std::vector<std::vector<NodeId>> DctParentChoices(const NetworkGraph& g,
                                                  const ShortestPathTable& spt) {
  std::vector<std::vector<NodeId>> out(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 1; v < g.num_nodes(); ++v) {
    for (const Neighbor& nb : g.neighbors(v)) {
      if (std::abs(spt.dist(nb.node, kBaseStation) + nb.weight - spt.dist(v, kBaseStation)) <=
              kWeightTolerance &&
          spt.hops(nb.node, kBaseStation) + 1 == spt.hops(v, kBaseStation)) {
        out[static_cast<std::size_t>(v)].push_back(nb.node);
      }
    }
  }
  return out;
}

RoutedTree BuildDct(const NetworkGraph& g) {
  const ShortestPathTable spt = ComputeShortestPaths(g);
  const auto choices = DctParentChoices(g, spt);
  std::vector<NodeId> parent(static_cast<std::size_t>(g.num_nodes()), kNoParent);
  for (NodeId v = 1; v < g.num_nodes(); ++v) {
    parent[static_cast<std::size_t>(v)] = choices[static_cast<std::size_t>(v)].front();
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

namespace {

RoutedTree MdctExact(const NetworkGraph& g, const std::vector<std::vector<NodeId>>& choices,
                     double budget) {
  const int n = g.num_nodes();
  lp::MilpModel m;
  std::vector<int> y(static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    y[static_cast<std::size_t>(u)] = m.AddBinary(1.0, "y" + std::to_string(u));
  }
  // x[v][k] chooses choices[v][k] as the parent of v.
  std::vector<std::vector<int>> x(static_cast<std::size_t>(n));
  for (NodeId v = 1; v < n; ++v) {
    std::vector<lp::Term> pick;
    for (NodeId u : choices[static_cast<std::size_t>(v)]) {
      const int var = m.AddBinary(0.0, "x" + std::to_string(u) + "_" + std::to_string(v));
      x[static_cast<std::size_t>(v)].push_back(var);
      pick.push_back({var, 1.0});
      m.AddConstraint({{var, 1.0}, {y[static_cast<std::size_t>(u)], -1.0}},
                      lp::Relation::kLessEqual, 0.0);
    }
    m.AddConstraint(std::move(pick), lp::Relation::kEqual, 1.0);
  }
  lp::MilpOptions opts;
  opts.time_budget_seconds = budget;
  lp::MilpSolution sol = lp::SolveMilp(m, opts);
  if (sol.status == lp::MilpStatus::kTimeBudgetExceeded) {
    throw Error(ErrorCode::kTimeBudgetExceeded, "MDCT solve exceeded its time budget");
  }
  if (sol.status != lp::MilpStatus::kOptimal) {
    throw Error(ErrorCode::kInconsistentSolution, "MDCT model unexpectedly unsolved");
  }
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  for (NodeId v = 1; v < n; ++v) {
    const auto& vars = x[static_cast<std::size_t>(v)];
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (sol.values[static_cast<std::size_t>(vars[k])] > 0.5) {
        parent[static_cast<std::size_t>(v)] = choices[static_cast<std::size_t>(v)][k];
        break;
      }
    }
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

// Greedy set cover, one layer at a time: the parent covering the most
// still-unassigned children goes first (ties: lowest id).
RoutedTree MdctGreedy(const NetworkGraph& g, const ShortestPathTable& spt,
                      const std::vector<std::vector<NodeId>>& choices) {
  const int n = g.num_nodes();
  std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
  int max_hops = 0;
  for (NodeId v = 0; v < n; ++v) max_hops = std::max(max_hops, spt.hops(v, kBaseStation));
  for (int layer = 1; layer <= max_hops; ++layer) {
    std::vector<NodeId> open;
    for (NodeId v = 1; v < n; ++v) {
      if (spt.hops(v, kBaseStation) == layer) open.push_back(v);
    }
    while (!open.empty()) {
      NodeId best = -1;
      int best_cover = 0;
      for (NodeId u = 0; u < n; ++u) {
        int cover = 0;
        for (NodeId v : open) {
          const auto& c = choices[static_cast<std::size_t>(v)];
          if (std::binary_search(c.begin(), c.end(), u)) ++cover;
        }
        if (cover > best_cover) {
          best_cover = cover;
          best = u;
        }
      }
      std::vector<NodeId> rest;
      for (NodeId v : open) {
        const auto& c = choices[static_cast<std::size_t>(v)];
        if (std::binary_search(c.begin(), c.end(), best)) {
          parent[static_cast<std::size_t>(v)] = best;
        } else {
          rest.push_back(v);
        }
      }
      open = std::move(rest);
    }
  }
  return RoutedTree::FromParents(g, std::move(parent));
}

}  // namespace

RoutedTree BuildMdct(const NetworkGraph& g, MdctMode mode, double budget_seconds) {
  const ShortestPathTable spt = ComputeShortestPaths(g);
  const auto choices = DctParentChoices(g, spt);
  if (mode == MdctMode::kExact) return MdctExact(g, choices, budget_seconds);
  RoutedTree greedy = MdctGreedy(g, spt, choices);
  RoutedTree dct = BuildDct(g);
  // Greedy set cover carries no per-instance guarantee against the plain
  // DCT, so keep whichever has fewer heads.
  if (ComputeTreeMetrics(dct).non_leaf_count < ComputeTreeMetrics(greedy).non_leaf_count) {
    return dct;
  }
  return greedy;
}

void WriteTree(std::ostream& out, const RoutedTree& t) {
  for (NodeId v = 1; v < t.num_nodes(); ++v) {
    out << "parent " << v << ' ' << t.parent(v) << '\n';
  }
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    out << "# height " << v << ' ' << t.height(v) << '\n';
  }
}

}  // namespace innet
