#include "innet/plans.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "innet/error.hpp"
#include "innet/text.hpp"

namespace innet {

CommPlan::CommPlan(int num_nodes) : n_(num_nodes) {
  if (num_nodes < 1) throw Error(ErrorCode::kInvalidArgument, "plan needs at least one node");
  x_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
}

void CommPlan::Assign(NodeId i, NodeId j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorCode::kInvalidArgument, "plan assignment out of range");
  }
  x_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = 1;
}

void CommPlan::Unassign(NodeId i, NodeId j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw Error(ErrorCode::kInvalidArgument, "plan assignment out of range");
  }
  x_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = 0;
}

std::vector<NodeId> CommPlan::heads() const {
  std::vector<NodeId> out;
  for (NodeId j = 0; j < n_; ++j) {
    if (assigned(j, j)) out.push_back(j);
  }
  return out;
}

std::vector<NodeId> CommPlan::cluster(NodeId j) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < n_; ++i) {
    if (assigned(i, j)) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> CommPlan::evaluators(NodeId i) const {
  std::vector<NodeId> out;
  for (NodeId j = 0; j < n_; ++j) {
    if (assigned(i, j)) out.push_back(j);
  }
  return out;
}

std::string ViolationName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kUncovered: return "Uncovered";
    case ViolationKind::kHeadInconsistent: return "HeadInconsistent";
    case ViolationKind::kDelayViolation: return "DelayViolation";
    case ViolationKind::kNotCombinable: return "NotCombinable";
    case ViolationKind::kAccuracyViolation: return "AccuracyViolation";
  }
  return "Unknown";
}

bool CheckCombinable(const CommPlan& p) {
  const std::vector<NodeId> s = p.heads();
  if (s.size() <= 1) return true;
  std::vector<char> seen(s.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (seen[b]) continue;
      for (NodeId i = 0; i < p.num_nodes(); ++i) {
        if (p.assigned(i, s[a]) && p.assigned(i, s[b])) {
          seen[b] = 1;
          ++reached;
          stack.push_back(b);
          break;
        }
      }
    }
  }
  return reached == s.size();
}

namespace {

void BasicViolations(const CommPlan& p, std::vector<PlanViolation>& out) {
  const int n = p.num_nodes();
  for (NodeId i = 0; i < n; ++i) {
    bool covered = false;
    for (NodeId j = 0; j < n && !covered; ++j) covered = p.assigned(i, j);
    if (!covered) out.push_back({ViolationKind::kUncovered, i});
  }
  for (NodeId j = 0; j < n; ++j) {
    bool others = false;
    for (NodeId i = 0; i < n && !others; ++i) others = i != j && p.assigned(i, j);
    if (others != p.assigned(j, j)) out.push_back({ViolationKind::kHeadInconsistent, j});
  }
}

}  // namespace

std::vector<PlanViolation> ValidatePlan(const CommPlan& p, const DelayConstraints& c) {
  c.Validate(p.num_nodes());
  std::vector<PlanViolation> out;
  BasicViolations(p, out);
  for (NodeId j : p.heads()) {
    const int size = static_cast<int>(p.cluster(j).size());
    if (size > c.n(j)) out.push_back({ViolationKind::kDelayViolation, j});
    if (c.min_cluster && size < *c.min_cluster) {
      out.push_back({ViolationKind::kAccuracyViolation, j});
    }
  }
  if (!CheckCombinable(p)) out.push_back({ViolationKind::kNotCombinable, -1});
  return out;
}

EnergyReport PlanEnergy(const CommPlan& p, const ShortestPathTable& spt, const EnergyParams& e) {
  if (spt.num_nodes() != p.num_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "plan and path table sizes differ");
  }
  std::vector<PlanViolation> bad;
  BasicViolations(p, bad);
  if (!bad.empty()) {
    throw Error(ErrorCode::kInvalidPlan,
                ViolationName(bad.front().kind) + " at node " + std::to_string(bad.front().node));
  }
  EnergyReport r;
  for (NodeId i = 0; i < p.num_nodes(); ++i) {
    for (NodeId j = 0; j < p.num_nodes(); ++j) {
      if (!p.assigned(i, j)) continue;
      r.fft_component += e.fft_bytes * spt.dist(i, j);
      r.eig_component += e.eig_bytes * spt.dist(j, kBaseStation);
    }
  }
  r.fft_component *= e.e_b();
  r.eig_component *= e.e_b();
  r.total = r.fft_component + r.eig_component;
  r.accounting = Accounting::kPerEvaluation;
  return r;
}

CommPlan TreeSolution(const RoutedTree& t) {
  CommPlan p(t.num_nodes());
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (v != kBaseStation) p.Assign(v, t.parent(v));
    if (!t.is_leaf(v)) p.Assign(v, v);
  }
  return p;
}

EnergyReport ClosedFormTreeEnergy(const RoutedTree& t, const EnergyParams& e) {
  const TreeMetrics m = ComputeTreeMetrics(t);
  const int n = t.num_nodes();
  EnergyReport r;
  r.fft_component = (n - 1) * e.fft_bytes * e.e_b();
  r.eig_component = ((m.sum_heights - n) + m.non_leaf_count) * e.eig_bytes * e.e_b();
  r.total = r.fft_component + r.eig_component;
  r.accounting = Accounting::kMergedClosedForm;
  return r;
}

double LowerBound(const NetworkGraph& g, const EnergyParams& e, int s_count) {
  if (s_count < 1) throw Error(ErrorCode::kInvalidArgument, "s_count must be >= 1");
  const int n = g.num_nodes();
  const int sum_d = ComputeTreeMetrics(BuildDct(g)).sum_heights;
  return ((n - 1) * e.fft_bytes + ((sum_d - n) + s_count) * e.eig_bytes) * e.e_b();
}

double LowerBound(const NetworkGraph& g, const DelayConstraints& c, const EnergyParams& e) {
  c.Validate(g.num_nodes());
  const int n_max = c.max_n();
  return LowerBound(g, e, (g.num_nodes() + n_max - 1) / n_max);
}

double CentralizedBaselineEnergy(const NetworkGraph& g, const ShortestPathTable& spt,
                                 const EnergyParams& e) {
  double total = 0.0;
  for (NodeId v = 1; v < g.num_nodes(); ++v) total += e.fft_bytes * spt.dist(v, kBaseStation);
  return total * e.e_b();
}

void WritePlan(std::ostream& out, const CommPlan& p) {
  for (NodeId i = 0; i < p.num_nodes(); ++i) {
    for (NodeId j = 0; j < p.num_nodes(); ++j) {
      if (p.assigned(i, j)) out << "eval " << i << ' ' << j << '\n';
    }
  }
}

CommPlan ReadPlan(std::istream& in, int num_nodes) {
  CommPlan p(num_nodes);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto tok = SplitWhitespace(view);
    if (tok.size() != 3 || tok[0] != "eval") {
      throw Error(ErrorCode::kParse, "plan line " + std::to_string(line_no) + ": expected 'eval i j'");
    }
    p.Assign(static_cast<NodeId>(ParseInt(tok[1])), static_cast<NodeId>(ParseInt(tok[2])));
  }
  return p;
}

std::string AccountingName(Accounting a) {
  return a == Accounting::kPerEvaluation ? "PerEvaluation" : "MergedClosedForm";
}

void WriteEnergyReportCsv(std::ostream& out, const EnergyReport& r) {
  out << "total,fft_component,eig_component,accounting\n"
      << FormatDouble(r.total) << ',' << FormatDouble(r.fft_component) << ','
      << FormatDouble(r.eig_component) << ',' << AccountingName(r.accounting) << '\n';
}

}  // namespace innet
