#include "innet/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "innet/error.hpp"
#include "innet/text.hpp"

namespace innet {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool IsConnected(int n, const std::vector<std::vector<Neighbor>>& adj) {
  if (n == 0) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> stack{kBaseStation};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(nb.node)]) {
        seen[static_cast<std::size_t>(nb.node)] = 1;
        ++count;
        stack.push_back(nb.node);
      }
    }
  }
  return count == n;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double UnitDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

NetworkGraph::NetworkGraph(int num_nodes, std::vector<Edge> edges,
                           std::optional<std::vector<Point>> positions)
    : num_nodes_(num_nodes), positions_(std::move(positions)) {
  if (num_nodes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "graph needs at least one node");
  }
  if (positions_ && positions_->size() != static_cast<std::size_t>(num_nodes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "position count does not match node count");
  }
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop at node " + std::to_string(e.u));
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "edge weight must be >= 0");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate edge " + std::to_string(edges[i].u) + "-" +
                      std::to_string(edges[i].v));
    }
  }
  edges_ = std::move(edges);
  adjacency_.assign(static_cast<std::size_t>(num_nodes), {});
  for (const Edge& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.u)].push_back({e.v, e.weight});
    adjacency_[static_cast<std::size_t>(e.v)].push_back({e.u, e.weight});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
  }
  if (!IsConnected(num_nodes_, adjacency_)) {
    throw Error(ErrorCode::kDisconnectedGraph, "graph is not connected");
  }
}

std::span<const Neighbor> NetworkGraph::neighbors(NodeId v) const {
  return adjacency_.at(static_cast<std::size_t>(v));
}

bool NetworkGraph::has_edge(NodeId u, NodeId v) const {
  return edge_weight(u, v).has_value();
}

std::optional<double> NetworkGraph::edge_weight(NodeId u, NodeId v) const {
  if (u < 0 || u >= num_nodes_) return std::nullopt;
  const auto& list = adjacency_[static_cast<std::size_t>(u)];
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Neighbor& nb, NodeId id) { return nb.node < id; });
  if (it == list.end() || it->node != v) return std::nullopt;
  return it->weight;
}

const std::vector<Point>& NetworkGraph::positions() const {
  if (!positions_) {
    throw Error(ErrorCode::kInvalidArgument, "graph has no positions");
  }
  return *positions_;
}

bool NetworkGraph::unit_weights() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.weight == 1.0; });
}

NetworkGraph NetworkGraph::Relabeled(std::span<const NodeId> perm) const {
  if (perm.size() != static_cast<std::size_t>(num_nodes_) ||
      perm[0] != kBaseStation) {
    throw Error(ErrorCode::kInvalidArgument,
                "relabeling must cover all nodes and fix the base station");
  }
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const Edge& e : edges_) {
    edges.push_back({perm[static_cast<std::size_t>(e.u)],
                     perm[static_cast<std::size_t>(e.v)], e.weight});
  }
  std::optional<std::vector<Point>> pos;
  if (positions_) {
    pos.emplace(positions_->size());
    for (std::size_t v = 0; v < positions_->size(); ++v) {
      (*pos)[static_cast<std::size_t>(perm[v])] = (*positions_)[v];
    }
  }
  return NetworkGraph(num_nodes_, std::move(edges), std::move(pos));
}

void EnergyParams::Validate() const {
  if (!(eig_bytes > 0.0) || !(fft_bytes > eig_bytes)) {
    throw Error(ErrorCode::kInvalidArgument, "energy params need R > r > 0");
  }
  if (!(e_b() > 0.0) || e_tx < 0.0 || e_rx < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "energy params need e_b > 0");
  }
}

DelayConstraints DelayConstraints::Uniform(int num_nodes, int n,
                                           std::optional<int> n_a) {
  DelayConstraints c;
  c.max_cluster.assign(static_cast<std::size_t>(num_nodes), n);
  c.min_cluster = n_a;
  return c;
}

int DelayConstraints::max_n() const {
  if (max_cluster.empty()) return 0;
  return *std::max_element(max_cluster.begin(), max_cluster.end());
}

void DelayConstraints::Validate(int num_nodes) const {
  if (max_cluster.size() != static_cast<std::size_t>(num_nodes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "delay constraints must list one n_v per node");
  }
  for (int n : max_cluster) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n_v must be >= 1");
  }
  if (min_cluster) {
    if (*min_cluster < 1 || *min_cluster > max_n()) {
      throw Error(ErrorCode::kInvalidArgument, "n_a must lie in [1, max n_v]");
    }
  }
}

ShortestPathTable::ShortestPathTable(int n, std::vector<double> dist,
                                     std::vector<int> hops,
                                     std::vector<NodeId> next_hop)
    : n_(n),
      dist_(std::move(dist)),
      hops_(std::move(hops)),
      next_hop_(std::move(next_hop)) {}

std::vector<NodeId> ShortestPathTable::Path(NodeId from, NodeId to) const {
  std::vector<NodeId> path{from};
  NodeId cur = from;
  while (cur != to) {
    cur = next_hop(cur, to);
    if (cur < 0 || static_cast<int>(path.size()) > n_) {
      throw Error(ErrorCode::kInconsistentSolution, "broken next-hop table");
    }
    path.push_back(cur);
  }
  return path;
}

ShortestPathTable ComputeShortestPaths(const NetworkGraph& g) {
  const int n = g.num_nodes();
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> dist(nn * nn, kInf);
  std::vector<int> hops(nn * nn, std::numeric_limits<int>::max());
  std::vector<NodeId> next(nn * nn, -1);

  // Dijkstra per source on the lexicographic key (weight, hops).
  using Key = std::tuple<double, int, NodeId>;
  for (NodeId s = 0; s < n; ++s) {
    double* d = &dist[static_cast<std::size_t>(s) * nn];
    int* h = &hops[static_cast<std::size_t>(s) * nn];
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    d[s] = 0.0;
    h[s] = 0;
    pq.emplace(0.0, 0, s);
    while (!pq.empty()) {
      auto [dv, hv, v] = pq.top();
      pq.pop();
      if (dv != d[v] || hv != h[v]) continue;
      for (const Neighbor& nb : g.neighbors(v)) {
        double nd = dv + nb.weight;
        int nh = hv + 1;
        if (nd < d[nb.node] || (nd == d[nb.node] && nh < h[nb.node])) {
          d[nb.node] = nd;
          h[nb.node] = nh;
          pq.emplace(nd, nh, nb.node);
        }
      }
    }
  }
  for (std::size_t i = 0; i < nn; ++i) {
    for (std::size_t j = i + 1; j < nn; ++j) {
      double m = std::min(dist[i * nn + j], dist[j * nn + i]);
      dist[i * nn + j] = dist[j * nn + i] = m;
    }
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j);
      if (i == j) {
        next[ij] = i;
        continue;
      }
      // Hop counts along equal-weight paths strictly decrease, so following
      // the chosen successors always terminates.
      for (const Neighbor& nb : g.neighbors(i)) {
        const std::size_t uj = static_cast<std::size_t>(nb.node) * nn + static_cast<std::size_t>(j);
        if (std::abs(nb.weight + dist[uj] - dist[ij]) <= kWeightTolerance &&
            hops[uj] + 1 <= hops[ij]) {
          next[ij] = nb.node;
          break;
        }
      }
      if (next[ij] < 0) {
        // Floating noise can push the hop tie-break off by one; fall back to
        // the smallest neighbor on a minimum-weight path with fewer hops.
        for (const Neighbor& nb : g.neighbors(i)) {
          const std::size_t uj = static_cast<std::size_t>(nb.node) * nn + static_cast<std::size_t>(j);
          if (std::abs(nb.weight + dist[uj] - dist[ij]) <= kWeightTolerance &&
              hops[uj] < hops[ij]) {
            next[ij] = nb.node;
            break;
          }
        }
      }
    }
  }
  return ShortestPathTable(n, std::move(dist), std::move(hops), std::move(next));
}

NetworkGraph GenerateRandomTopology(std::uint64_t seed, int num_nodes,
                                    double side, double tx_range) {
  if (num_nodes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two nodes");
  }
  if (!(side > 0.0) || !(tx_range > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "side and tx_range must be > 0");
  }
  for (int attempt = 0; attempt < kTopologyRetries; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<Point> pos(static_cast<std::size_t>(num_nodes));
    for (Point& p : pos) {
      p.x = UnitDouble(rng) * side;
      p.y = UnitDouble(rng) * side;
    }
    std::vector<Edge> edges;
    for (NodeId i = 0; i < num_nodes; ++i) {
      for (NodeId j = i + 1; j < num_nodes; ++j) {
        const Point& a = pos[static_cast<std::size_t>(i)];
        const Point& b = pos[static_cast<std::size_t>(j)];
        if (std::hypot(a.x - b.x, a.y - b.y) <= tx_range) {
          edges.push_back({i, j, 1.0});
        }
      }
    }
    try {
      return NetworkGraph(num_nodes, std::move(edges), std::move(pos));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDisconnectedGraph) throw;
    }
  }
  throw Error(ErrorCode::kTopologyUnconnectable,
              "no connected topology within " + std::to_string(kTopologyRetries) +
                  " attempts from seed " + std::to_string(seed));
}

double NaradaLinkWeight(double rssi_dbm, double p_cf) {
  if (!(p_cf >= 0.0 && p_cf <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "p_cf must lie in [0, 1]");
  }
  return (1.0 - p_cf) / (1.0 + std::exp(-0.4 * (40.0 + rssi_dbm)));
}

void WriteGraph(std::ostream& out, const NetworkGraph& g) {
  out << "nodes " << g.num_nodes() << " base " << kBaseStation << '\n';
  for (const Edge& e : g.edges()) {
    out << "edge " << e.u << ' ' << e.v << ' ' << FormatDouble(e.weight) << '\n';
  }
  if (g.has_positions()) {
    const auto& pos = g.positions();
    for (std::size_t v = 0; v < pos.size(); ++v) {
      out << "pos " << v << ' ' << FormatDouble(pos[v].x) << ' '
          << FormatDouble(pos[v].y) << '\n';
    }
  }
}

NetworkGraph ReadGraph(std::istream& in) {
  std::string line;
  int line_no = 0;
  int num_nodes = -1;
  std::vector<Edge> edges;
  std::vector<Point> pos;
  std::vector<char> has_pos;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kParse,
                "graph line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tok = SplitWhitespace(view);
    if (tok[0] == "nodes") {
      if (tok.size() != 4 || tok[2] != "base") fail("expected 'nodes N base 0'");
      if (num_nodes >= 0) fail("duplicate header");
      num_nodes = static_cast<int>(ParseInt(tok[1]));
      if (ParseInt(tok[3]) != kBaseStation) fail("base station must be node 0");
      if (num_nodes < 1) fail("node count must be positive");
      pos.assign(static_cast<std::size_t>(num_nodes), {});
      has_pos.assign(static_cast<std::size_t>(num_nodes), 0);
    } else if (num_nodes < 0) {
      fail("header 'nodes N base 0' must come first");
    } else if (tok[0] == "edge") {
      if (tok.size() != 4) fail("expected 'edge i j w'");
      edges.push_back({static_cast<NodeId>(ParseInt(tok[1])),
                       static_cast<NodeId>(ParseInt(tok[2])), ParseDouble(tok[3])});
    } else if (tok[0] == "pos") {
      if (tok.size() != 4) fail("expected 'pos i x y'");
      long long v = ParseInt(tok[1]);
      if (v < 0 || v >= num_nodes) fail("position for unknown node");
      pos[static_cast<std::size_t>(v)] = {ParseDouble(tok[2]), ParseDouble(tok[3])};
      has_pos[static_cast<std::size_t>(v)] = 1;
    } else {
      fail("unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (num_nodes < 0) {
    throw Error(ErrorCode::kParse, "graph file has no header");
  }
  std::optional<std::vector<Point>> positions;
  bool any = std::any_of(has_pos.begin(), has_pos.end(), [](char c) { return c; });
  if (any) {
    if (!std::all_of(has_pos.begin(), has_pos.end(), [](char c) { return c; })) {
      throw Error(ErrorCode::kParse, "positions given for only some nodes");
    }
    positions = std::move(pos);
  }
  return NetworkGraph(num_nodes, std::move(edges), std::move(positions));
}

NetworkGraph LoadGraphFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open graph file " + path);
  return ReadGraph(in);
}

void SaveGraphFile(const std::string& path, const NetworkGraph& g) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write graph file " + path);
  WriteGraph(out, g);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace innet
