#pragma once

#include <iosfwd>
#include <vector>

#include "innet/lpsolve.hpp"
#include "innet/netmodel.hpp"

namespace innet {

// Temperature steps 1..M are stored at indices 0..M-1.
struct SaStep {
  int cluster_size = 1;       // k_j
  double iterations = 1.0;    // N_j
  double new_min_prob = 0.0;  // a_j
};

struct SaSchedule {
  std::vector<SaStep> steps;

  int num_steps() const { return static_cast<int>(steps.size()); }
  void Validate(int num_nodes) const;
};

struct SaPlan {
  std::vector<std::vector<NodeId>> clusters;  // K_j, ascending, head included
  std::vector<NodeId> heads;                  // b_j

  bool operator==(const SaPlan&) const = default;
};

// Throws kInvalidPlan unless clusters are disjoint, sized k_j and contain
// their heads.
void ValidateSaPlan(const SaPlan& plan, const SaSchedule& sched, int num_nodes);

enum class HeadRouting {
  kChain,   // b_j -> b_{j+1} -> ... -> b_M
  kDirect,  // b_j -> b_l for every l > j
};

// Expected transmissions triggered by new minima.
double SaCost(const SaPlan& plan, const SaSchedule& sched, const ShortestPathTable& spt,
              HeadRouting routing = HeadRouting::kChain);

inline constexpr int kSaIlpNodeCap = 12;

struct SaIlpLayout {
  int n = 0;
  int m = 0;
  int x_base = 0, y_base = 0, t_base = 0, p_base = 0;

  int x(NodeId i, int j) const { return x_base + i * m + j; }
  int y(NodeId i, int j) const { return y_base + i * m + j; }
  int t(NodeId i, NodeId k, int j) const { return t_base + (i * n + k) * m + j; }
  // Defined for j < m - 1.
  int p(NodeId i, NodeId k, int j) const { return p_base + (i * n + k) * (m - 1) + j; }
};

struct SaIlp {
  lp::MilpModel model;
  SaIlpLayout layout;
};

// Throws kInvalidArgument for an infeasible schedule and kInstanceTooLarge
// above max_nodes.
SaIlp BuildSaIlp(const NetworkGraph& g, const ShortestPathTable& spt, const SaSchedule& sched,
                 int max_nodes = kSaIlpNodeCap);

SaPlan ExtractSaPlan(const lp::MilpSolution& sol, const SaIlpLayout& layout);

// Greedy from the coldest step upwards.
SaPlan SaGreedy(const NetworkGraph& g, const ShortestPathTable& spt, const SaSchedule& sched);

// `cluster j head b members ...`, j counted from 1.
void WriteSaPlan(std::ostream& out, const SaPlan& plan);

}  // namespace innet
