#pragma once

#include <iosfwd>
#include <vector>

#include "innet/netmodel.hpp"

namespace innet {

inline constexpr NodeId kNoParent = -1;

// Spanning tree rooted at the base station. Heights are hop counts.
class RoutedTree {
 public:
  // Validates that parent describes a spanning tree rooted at 0 whose
  // (child, parent) pairs are edges of g.
  static RoutedTree FromParents(const NetworkGraph& g, std::vector<NodeId> parent);

  int num_nodes() const { return static_cast<int>(parent_.size()); }
  NodeId parent(NodeId v) const { return parent_[static_cast<std::size_t>(v)]; }
  int height(NodeId v) const { return height_[static_cast<std::size_t>(v)]; }
  int children_count(NodeId v) const { return children_[static_cast<std::size_t>(v)]; }
  bool is_leaf(NodeId v) const { return children_count(v) == 0; }

  const std::vector<NodeId>& parents() const { return parent_; }
  const std::vector<int>& heights() const { return height_; }

  // Nodes in the subtree rooted at v, v included, ascending.
  std::vector<NodeId> Subtree(NodeId v) const;

 private:
  RoutedTree() = default;
  std::vector<NodeId> parent_;
  std::vector<int> height_;
  std::vector<int> children_;
};

struct TreeMetrics {
  int height = 0;
  int sum_heights = 0;
  int non_leaf_count = 0;
  int max_children = 0;
};

TreeMetrics ComputeTreeMetrics(const RoutedTree& t);

// Sum of edge weights from v up to the root.
double TreePathWeight(const RoutedTree& t, const NetworkGraph& g, NodeId v);

// Minimum-weight tree; among equal-weight routes the fewest hops, then the
// lowest-id parent.
RoutedTree BuildDct(const NetworkGraph& g);

// Eligible DCT parents of v: neighbors u on a minimum-weight route with one
// hop fewer. Ascending ids. Empty for the base.
std::vector<std::vector<NodeId>> DctParentChoices(const NetworkGraph& g,
                                                  const ShortestPathTable& spt);

enum class MdctMode { kExact, kGreedy };

// DCT with as few non-leaf nodes as the mode manages. Exact mode solves a
// MILP and throws kTimeBudgetExceeded if the budget runs out.
RoutedTree BuildMdct(const NetworkGraph& g, MdctMode mode, double budget_seconds = 60.0);

// One `parent v p` line per non-root node followed by `# height v h`.
void WriteTree(std::ostream& out, const RoutedTree& t);

}  // namespace innet
