#pragma once

// Small graph builders and brute-force oracles shared by the unit tests and
// the acceptance binary. Oracles deliberately avoid the library's own
// algorithms: they work from the raw edge list.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "innet/netmodel.hpp"

namespace innet::testing {

inline NetworkGraph Chain(int n) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({v - 1, v, 1.0});
  return NetworkGraph(n, edges);
}

inline NetworkGraph Star(int n) {
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({0, v, 1.0});
  return NetworkGraph(n, edges);
}

inline NetworkGraph Complete(int n) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return NetworkGraph(n, edges);
}

// 0-1, 1-2, 1-3.
inline NetworkGraph TreeB() { return NetworkGraph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}}); }

// Random spanning tree plus `extra` further edges. Weights are 1 unless
// weighted, then multiples of 0.5 in [0.5, 2].
inline NetworkGraph RandomGraph(std::uint64_t seed, int n, int extra, bool weighted = false) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> used;
  auto weight = [&] { return weighted ? 0.5 * static_cast<double>(1 + rng() % 4) : 1.0; };
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
    edges.push_back({u, v, weight()});
    used.insert({u, v});
  }
  const int max_extra = n * (n - 1) / 2 - (n - 1);
  extra = std::min(extra, max_extra);
  while (extra > 0) {
    int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    edges.push_back({a, b, weight()});
    --extra;
  }
  return NetworkGraph(n, edges);
}

struct RawAdjacency {
  int n = 0;
  std::vector<std::vector<double>> w;  // +inf where no edge

  explicit RawAdjacency(const NetworkGraph& g)
      : n(g.num_nodes()),
        w(static_cast<std::size_t>(n),
          std::vector<double>(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity())) {
    for (const Edge& e : g.edges()) {
      w[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = e.weight;
      w[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = e.weight;
    }
  }
  bool adj(int u, int v) const {
    return w[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] < std::numeric_limits<double>::infinity();
  }
};

// Floyd-Warshall on the raw edge list.
inline std::vector<std::vector<double>> AllPairs(const NetworkGraph& g) {
  RawAdjacency a(g);
  auto d = a.w;
  const auto n = static_cast<std::size_t>(a.n);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline std::vector<int> BfsHops(const NetworkGraph& g) {
  RawAdjacency a(g);
  std::vector<int> h(static_cast<std::size_t>(a.n), -1);
  std::queue<int> q;
  h[0] = 0;
  q.push(0);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v = 0; v < a.n; ++v) {
      if (a.adj(u, v) && h[static_cast<std::size_t>(v)] < 0) {
        h[static_cast<std::size_t>(v)] = h[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return h;
}

// Calls visit(parent) for every spanning tree of g rooted at 0, given as a
// parent vector with parent[0] = -1.
inline void ForEachRootedSpanningTree(const NetworkGraph& g,
                                      const std::function<void(const std::vector<int>&)>& visit) {
  RawAdjacency a(g);
  const int n = a.n;
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  auto acyclic = [&] {
    for (int v = 1; v < n; ++v) {
      int u = v;
      for (int steps = 0; steps < n && u != 0; ++steps) u = parent[static_cast<std::size_t>(u)];
      if (u != 0) return false;
    }
    return true;
  };
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      if (acyclic()) visit(parent);
      return;
    }
    for (int u = 0; u < n; ++u) {
      if (u != v && a.adj(u, v)) {
        parent[static_cast<std::size_t>(v)] = u;
        rec(v + 1);
      }
    }
  };
  if (n == 1) {
    visit(parent);
    return;
  }
  rec(1);
}

inline std::vector<int> ChildCounts(const std::vector<int>& parent) {
  std::vector<int> c(parent.size(), 0);
  for (std::size_t v = 1; v < parent.size(); ++v) ++c[static_cast<std::size_t>(parent[v])];
  return c;
}

// Sum over nodes of the weighted tree path to the root.
inline double WeightedDepthSum(const NetworkGraph& g, const std::vector<int>& parent) {
  RawAdjacency a(g);
  double total = 0.0;
  for (std::size_t v = 1; v < parent.size(); ++v) {
    int u = static_cast<int>(v);
    while (u != 0) {
      int p = parent[static_cast<std::size_t>(u)];
      total += a.w[static_cast<std::size_t>(u)][static_cast<std::size_t>(p)];
      u = p;
    }
  }
  return total;
}

// Min weighted depth sum over spanning trees with children(v) <= nv[v] - 1
// and, with n_a, children >= n_a - 1 on every non-leaf.
inline std::optional<double> BruteForceDdct(const NetworkGraph& g, const std::vector<int>& nv,
                                            std::optional<int> n_a = std::nullopt) {
  std::optional<double> best;
  ForEachRootedSpanningTree(g, [&](const std::vector<int>& parent) {
    auto c = ChildCounts(parent);
    for (std::size_t v = 0; v < c.size(); ++v) {
      if (c[v] > nv[v] - 1) return;
      if (n_a && c[v] > 0 && c[v] < *n_a - 1) return;
    }
    double s = WeightedDepthSum(g, parent);
    if (!best || s < *best) best = s;
  });
  return best;
}

// Exhaustive search over every 0/1 assignment x (|V| <= 4). A plan is
// valid when every FFT is evaluated somewhere, j evaluates its own FFT iff
// it evaluates another one, clusters fit n_j (and n_a), and the overlap
// graph of the heads is connected.
inline std::optional<double> BruteForcePlanOptimum(const NetworkGraph& g, const std::vector<int>& nv,
                                                   std::optional<int> n_a, double R, double r) {
  const int n = g.num_nodes();
  const auto W = AllPairs(g);
  const int cells = n * n;
  std::optional<double> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
    auto x = [&](int i, int j) { return ((mask >> (i * n + j)) & 1U) != 0; };
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      bool any = false;
      for (int j = 0; j < n; ++j) any = any || x(i, j);
      ok = any;
    }
    std::vector<int> heads;
    for (int j = 0; j < n && ok; ++j) {
      bool other = false;
      int size = 0;
      for (int i = 0; i < n; ++i) {
        if (x(i, j)) ++size;
        if (i != j && x(i, j)) other = true;
      }
      if (x(j, j) != other) ok = false;
      if (size > nv[static_cast<std::size_t>(j)]) ok = false;
      if (x(j, j)) {
        heads.push_back(j);
        if (n_a && size < *n_a) ok = false;
      }
    }
    if (!ok) continue;
    if (heads.size() > 1) {
      std::vector<char> seen(heads.size(), 0);
      std::vector<std::size_t> stack{0};
      seen[0] = 1;
      while (!stack.empty()) {
        std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < heads.size(); ++b) {
          if (seen[b]) continue;
          for (int i = 0; i < n; ++i) {
            if (x(i, heads[a]) && x(i, heads[b])) {
              seen[b] = 1;
              stack.push_back(b);
              break;
            }
          }
        }
      }
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) continue;
    }
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (x(i, j)) e += R * W[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                          r * W[static_cast<std::size_t>(j)][0];
    if (!best || e < *best) best = e;
  }
  return best;
}

struct SaOracleStep {
  int k = 1;
  double weight = 1.0;  // a_j * N_j
};

// Min chain cost over every assignment of disjoint clusters and heads.
inline double BruteForceSa(const std::vector<std::vector<double>>& H,
                           const std::vector<SaOracleStep>& steps) {
  const int n = static_cast<int>(H.size());
  const int m = static_cast<int>(steps.size());
  std::vector<int> label(static_cast<std::size_t>(n), -1);  // step index or -1
  std::vector<int> head(static_cast<std::size_t>(m), -1);
  double best = std::numeric_limits<double>::infinity();

  auto cost = [&] {
    std::vector<double> spread(static_cast<std::size_t>(m), 0.0);
    for (int v = 0; v < n; ++v) {
      int j = label[static_cast<std::size_t>(v)];
      if (j >= 0) spread[static_cast<std::size_t>(j)] += H[static_cast<std::size_t>(head[static_cast<std::size_t>(j)])][static_cast<std::size_t>(v)];
    }
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
      double per = spread[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < m; ++l) {
        per += H[static_cast<std::size_t>(head[static_cast<std::size_t>(l - 1)])][static_cast<std::size_t>(head[static_cast<std::size_t>(l)])];
        per += spread[static_cast<std::size_t>(l)];
      }
      total += steps[static_cast<std::size_t>(j)].weight * per;
    }
    return total;
  };

  std::function<void(int)> pick_heads = [&](int j) {
    if (j == m) {
      best = std::min(best, cost());
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (label[static_cast<std::size_t>(v)] == j) {
        head[static_cast<std::size_t>(j)] = v;
        pick_heads(j + 1);
      }
    }
  };
  std::function<void(int)> assign = [&](int v) {
    if (v == n) {
      std::vector<int> count(static_cast<std::size_t>(m), 0);
      for (int l : label)
        if (l >= 0) ++count[static_cast<std::size_t>(l)];
      for (int j = 0; j < m; ++j)
        if (count[static_cast<std::size_t>(j)] != steps[static_cast<std::size_t>(j)].k) return;
      pick_heads(0);
      return;
    }
    for (int l = -1; l < m; ++l) {
      label[static_cast<std::size_t>(v)] = l;
      assign(v + 1);
    }
    label[static_cast<std::size_t>(v)] = -1;
  };
  assign(0);
  return best;
}

}  // namespace innet::testing
