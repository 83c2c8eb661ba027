#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace innet {

// Nodes are numbered 0..|V|-1; node 0 is always the base station.
using NodeId = int;
inline constexpr NodeId kBaseStation = 0;

// Absolute tolerance for comparing path weights.
inline constexpr double kWeightTolerance = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
};

struct Neighbor {
  NodeId node = 0;
  double weight = 1.0;
};

// Undirected weighted connectivity graph. Immutable once built; the
// constructor rejects self-loops, parallel edges, negative weights and
// disconnected inputs.
class NetworkGraph {
 public:
  NetworkGraph(int num_nodes, std::vector<Edge> edges,
               std::optional<std::vector<Point>> positions = std::nullopt);

  int num_nodes() const { return num_nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  // Sorted by neighbor id.
  std::span<const Neighbor> neighbors(NodeId v) const;

  bool has_edge(NodeId u, NodeId v) const;
  std::optional<double> edge_weight(NodeId u, NodeId v) const;

  bool has_positions() const { return positions_.has_value(); }
  const std::vector<Point>& positions() const;

  // True when every edge weight is exactly 1.
  bool unit_weights() const;

  // Same topology with a relabeling applied: node v becomes perm[v].
  // perm must fix the base station.
  NetworkGraph Relabeled(std::span<const NodeId> perm) const;

 private:
  int num_nodes_;
  std::vector<Edge> edges_;  // u < v, sorted
  std::vector<std::vector<Neighbor>> adjacency_;
  std::optional<std::vector<Point>> positions_;
};

// Energy model: bytes moved over an edge of weight w cost w * bytes * e_b.
struct EnergyParams {
  double fft_bytes = 8192.0;   // R
  double eig_bytes = 32.0;     // r
  double e_tx = 0.5;
  double e_rx = 0.5;

  double e_b() const { return e_tx + e_rx; }
  void Validate() const;
};

// Per-node maximum cluster size n_v (counts the node's own FFT) and an
// optional minimum cluster size n_a.
struct DelayConstraints {
  std::vector<int> max_cluster;
  std::optional<int> min_cluster;

  static DelayConstraints Uniform(int num_nodes, int n,
                                  std::optional<int> n_a = std::nullopt);

  int n(NodeId v) const { return max_cluster[static_cast<std::size_t>(v)]; }
  int max_n() const;
  void Validate(int num_nodes) const;
};

// All-pairs minimum path weights plus a successor matrix. Among equal
// weight paths the one with fewer hops wins, then the smallest next hop.
class ShortestPathTable {
 public:
  ShortestPathTable() = default;
  ShortestPathTable(int n, std::vector<double> dist, std::vector<int> hops,
                    std::vector<NodeId> next_hop);

  int num_nodes() const { return n_; }
  double dist(NodeId i, NodeId j) const { return dist_[Index(i, j)]; }
  int hops(NodeId i, NodeId j) const { return hops_[Index(i, j)]; }
  NodeId next_hop(NodeId i, NodeId j) const { return next_hop_[Index(i, j)]; }

  std::vector<NodeId> Path(NodeId from, NodeId to) const;

 private:
  std::size_t Index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<double> dist_;
  std::vector<int> hops_;
  std::vector<NodeId> next_hop_;
};

ShortestPathTable ComputeShortestPaths(const NetworkGraph& g);

// Uniform i.i.d. positions in a side x side square, unit-weight edges
// between nodes within tx_range. Retries with seed+1, seed+2, ... until the
// graph is connected.
inline constexpr int kTopologyRetries = 1000;
NetworkGraph GenerateRandomTopology(std::uint64_t seed, int num_nodes,
                                    double side, double tx_range);

double NaradaLinkWeight(double rssi_dbm, double p_cf);

// Line format:
//   nodes N base 0
//   edge i j w
//   pos i x y
void WriteGraph(std::ostream& out, const NetworkGraph& g);
NetworkGraph ReadGraph(std::istream& in);
NetworkGraph LoadGraphFile(const std::string& path);
void SaveGraphFile(const std::string& path, const NetworkGraph& g);

}  // namespace innet
