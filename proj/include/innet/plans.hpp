#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "innet/netmodel.hpp"
#include "innet/trees.hpp"

namespace innet {

// x_ij = 1 when the FFT of node i is evaluated at node j.
class CommPlan {
 public:
  explicit CommPlan(int num_nodes);

  int num_nodes() const { return n_; }
  void Assign(NodeId i, NodeId j);
  void Unassign(NodeId i, NodeId j);
  bool assigned(NodeId i, NodeId j) const {
    return x_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)] != 0;
  }

  // Nodes j with x_jj = 1, ascending.
  std::vector<NodeId> heads() const;
  // N_j: nodes i with x_ij = 1, ascending.
  std::vector<NodeId> cluster(NodeId j) const;
  // Evaluation sites of i's FFT, ascending.
  std::vector<NodeId> evaluators(NodeId i) const;

  bool operator==(const CommPlan& other) const = default;

 private:
  int n_;
  std::vector<char> x_;
};

enum class Accounting { kPerEvaluation, kMergedClosedForm };

struct EnergyReport {
  double total = 0.0;
  double fft_component = 0.0;
  double eig_component = 0.0;
  Accounting accounting = Accounting::kPerEvaluation;
};

enum class ViolationKind {
  kUncovered,          // node's FFT evaluated nowhere
  kHeadInconsistent,   // x_jj disagrees with whether j evaluates other FFTs
  kDelayViolation,     // |N_j| > n_j
  kNotCombinable,      // overlap graph on heads disconnected
  kAccuracyViolation,  // |N_j| < n_a
};

struct PlanViolation {
  ViolationKind kind;
  NodeId node = -1;  // -1 when the violation is global
  bool operator==(const PlanViolation&) const = default;
};

std::string ViolationName(ViolationKind kind);

// Overlap graph on heads (edge when clusters share a member) is connected.
bool CheckCombinable(const CommPlan& p);

// Empty iff the plan is valid under c.
std::vector<PlanViolation> ValidatePlan(const CommPlan& p, const DelayConstraints& c);

// Sum over x_ij = 1 of e_b (R W_ij + r W_j0). Throws kInvalidPlan when a
// node is uncovered or head flags are inconsistent.
EnergyReport PlanEnergy(const CommPlan& p, const ShortestPathTable& spt, const EnergyParams& e);

// Every node ships its FFT to its parent; non-leaf nodes are heads.
CommPlan TreeSolution(const RoutedTree& t);

// ((|V|-1)R + sum_v (d_T(v)-1) r + |S| r) e_b, sum over every node.
EnergyReport ClosedFormTreeEnergy(const RoutedTree& t, const EnergyParams& e);

// Same formula with DCT hop heights and a given head count.
double LowerBound(const NetworkGraph& g, const EnergyParams& e, int s_count);
// Head count ceil(|V| / max n_v).
double LowerBound(const NetworkGraph& g, const DelayConstraints& c, const EnergyParams& e);

// Every node sends its FFT to the base along shortest paths.
double CentralizedBaselineEnergy(const NetworkGraph& g, const ShortestPathTable& spt,
                                 const EnergyParams& e);

// `eval i j` per assignment, ordered by (i, j).
void WritePlan(std::ostream& out, const CommPlan& p);
CommPlan ReadPlan(std::istream& in, int num_nodes);

std::string AccountingName(Accounting a);
void WriteEnergyReportCsv(std::ostream& out, const EnergyReport& r);

}  // namespace innet
