#include "innet/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "innet/error.hpp"

namespace innet {

void SaSchedule::Validate(int num_nodes) const {
  if (steps.empty()) throw Error(ErrorCode::kInvalidArgument, "schedule needs at least one step");
  int total = 0;
  for (const SaStep& s : steps) {
    if (s.cluster_size < 1) throw Error(ErrorCode::kInvalidArgument, "k_j must be >= 1");
    if (!(s.new_min_prob >= 0.0 && s.new_min_prob <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "a_j must lie in [0, 1]");
    }
    if (!(s.iterations >= 0.0) || !std::isfinite(s.iterations)) {
      throw Error(ErrorCode::kInvalidArgument, "N_j must be finite and >= 0");
    }
    total += s.cluster_size;
  }
  if (total > num_nodes) {
    throw Error(ErrorCode::kInvalidArgument, "cluster sizes add up to " + std::to_string(total) +
                                                 " but only " + std::to_string(num_nodes) +
                                                 " nodes exist");
  }
}

void ValidateSaPlan(const SaPlan& plan, const SaSchedule& sched, int num_nodes) {
  const int m = sched.num_steps();
  if (static_cast<int>(plan.clusters.size()) != m || static_cast<int>(plan.heads.size()) != m) {
    throw Error(ErrorCode::kInvalidPlan, "plan does not have one cluster per step");
  }
  std::vector<char> used(static_cast<std::size_t>(num_nodes), 0);
  for (int j = 0; j < m; ++j) {
    const auto& k = plan.clusters[static_cast<std::size_t>(j)];
    if (static_cast<int>(k.size()) != sched.steps[static_cast<std::size_t>(j)].cluster_size) {
      throw Error(ErrorCode::kInvalidPlan, "cluster " + std::to_string(j + 1) + " has the wrong size");
    }
    for (NodeId v : k) {
      if (v < 0 || v >= num_nodes || used[static_cast<std::size_t>(v)]) {
        throw Error(ErrorCode::kInvalidPlan, "clusters overlap or name unknown nodes");
      }
      used[static_cast<std::size_t>(v)] = 1;
    }
    if (std::find(k.begin(), k.end(), plan.heads[static_cast<std::size_t>(j)]) == k.end()) {
      throw Error(ErrorCode::kInvalidPlan, "head of cluster " + std::to_string(j + 1) + " is not a member");
    }
  }
}

double SaCost(const SaPlan& plan, const SaSchedule& sched, const ShortestPathTable& spt,
              HeadRouting routing) {
  ValidateSaPlan(plan, sched, spt.num_nodes());
  const int m = sched.num_steps();
  // spread[l]: transmissions for head l to reach its own members.
  std::vector<double> spread(static_cast<std::size_t>(m), 0.0);
  for (int l = 0; l < m; ++l) {
    const NodeId b = plan.heads[static_cast<std::size_t>(l)];
    for (NodeId v : plan.clusters[static_cast<std::size_t>(l)]) {
      spread[static_cast<std::size_t>(l)] += spt.dist(b, v);
    }
  }
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    double per = spread[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < m; ++l) {
      const NodeId from = routing == HeadRouting::kChain ? plan.heads[static_cast<std::size_t>(l - 1)]
                                                         : plan.heads[static_cast<std::size_t>(j)];
      per += spt.dist(from, plan.heads[static_cast<std::size_t>(l)]);
      per += spread[static_cast<std::size_t>(l)];
    }
    const SaStep& s = sched.steps[static_cast<std::size_t>(j)];
    total += s.new_min_prob * s.iterations * per;
  }
  return total;
}

SaIlp BuildSaIlp(const NetworkGraph& g, const ShortestPathTable& spt, const SaSchedule& sched,
                 int max_nodes) {
  const int n = g.num_nodes();
  sched.Validate(n);
  if (n > max_nodes) {
    throw Error(ErrorCode::kInstanceTooLarge, "annealing model limited to " +
                                                  std::to_string(max_nodes) + " nodes");
  }
  const int m = sched.num_steps();
  SaIlp out;
  SaIlpLayout& L = out.layout;
  L.n = n;
  L.m = m;
  L.x_base = 0;
  L.y_base = n * m;
  L.t_base = 2 * n * m;
  L.p_base = L.t_base + n * n * m;
  lp::MilpModel& model = out.model;

  auto weight = [&](int j) {
    return sched.steps[static_cast<std::size_t>(j)].new_min_prob *
           sched.steps[static_cast<std::size_t>(j)].iterations;
  };
  // Coefficient of t_ikl and p_ikl: every step at or above l (for t),
  // strictly above l + 1 (for p), contributes its a_j N_j.
  std::vector<double> upto(static_cast<std::size_t>(m), 0.0);
  double run = 0.0;
  for (int l = 0; l < m; ++l) {
    run += weight(l);
    upto[static_cast<std::size_t>(l)] = run;
  }

  for (NodeId i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) model.AddBinary(0.0, "x_" + std::to_string(i) + "_" + std::to_string(j + 1));
  for (NodeId i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) model.AddBinary(0.0, "y_" + std::to_string(i) + "_" + std::to_string(j + 1));
  for (NodeId i = 0; i < n; ++i)
    for (NodeId k = 0; k < n; ++k)
      for (int j = 0; j < m; ++j) {
        model.AddBinary(spt.dist(i, k) * upto[static_cast<std::size_t>(j)],
                        "t_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(j + 1));
      }
  for (NodeId i = 0; i < n; ++i)
    for (NodeId k = 0; k < n; ++k)
      for (int j = 0; j + 1 < m; ++j) {
        // Link b_j -> b_{j+1} is paid by every step at or above j.
        model.AddBinary(spt.dist(i, k) * upto[static_cast<std::size_t>(j)],
                        "p_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(j + 1));
      }

  for (int j = 0; j < m; ++j) {
    std::vector<lp::Term> size;
    std::vector<lp::Term> one_head;
    for (NodeId i = 0; i < n; ++i) {
      size.push_back({L.x(i, j), 1.0});
      one_head.push_back({L.y(i, j), 1.0});
      model.AddConstraint({{L.y(i, j), 1.0}, {L.x(i, j), -1.0}}, lp::Relation::kLessEqual, 0.0);
    }
    model.AddConstraint(std::move(size), lp::Relation::kEqual,
                        sched.steps[static_cast<std::size_t>(j)].cluster_size);
    model.AddConstraint(std::move(one_head), lp::Relation::kEqual, 1.0);
  }
  for (NodeId i = 0; i < n; ++i) {
    std::vector<lp::Term> once;
    for (int j = 0; j < m; ++j) once.push_back({L.x(i, j), 1.0});
    model.AddConstraint(std::move(once), lp::Relation::kLessEqual, 1.0);
  }
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId k = 0; k < n; ++k) {
      for (int j = 0; j < m; ++j) {
        model.AddConstraint({{L.t(i, k, j), 2.0}, {L.y(i, j), -1.0}, {L.x(k, j), -1.0}},
                            lp::Relation::kGreaterEqual, -1.0);
        if (j + 1 < m) {
          model.AddConstraint({{L.p(i, k, j), 2.0}, {L.y(i, j), -1.0}, {L.y(k, j + 1), -1.0}},
                              lp::Relation::kGreaterEqual, -1.0);
        }
      }
    }
  }
  return out;
}

SaPlan ExtractSaPlan(const lp::MilpSolution& sol, const SaIlpLayout& L) {
  if (!sol.has_incumbent()) throw Error(ErrorCode::kInconsistentSolution, "no annealing solution");
  SaPlan plan;
  plan.clusters.resize(static_cast<std::size_t>(L.m));
  plan.heads.assign(static_cast<std::size_t>(L.m), -1);
  for (int j = 0; j < L.m; ++j) {
    for (NodeId i = 0; i < L.n; ++i) {
      if (sol.values[static_cast<std::size_t>(L.x(i, j))] > 0.5) {
        plan.clusters[static_cast<std::size_t>(j)].push_back(i);
      }
      if (sol.values[static_cast<std::size_t>(L.y(i, j))] > 0.5) {
        plan.heads[static_cast<std::size_t>(j)] = i;
      }
    }
  }
  return plan;
}

SaPlan SaGreedy(const NetworkGraph& g, const ShortestPathTable& spt, const SaSchedule& sched) {
  const int n = g.num_nodes();
  sched.Validate(n);
  const int m = sched.num_steps();
  SaPlan plan;
  plan.clusters.resize(static_cast<std::size_t>(m));
  plan.heads.assign(static_cast<std::size_t>(m), -1);
  std::vector<char> pool(static_cast<std::size_t>(n), 1);
  for (int j = m - 1; j >= 0; --j) {
    const int want = sched.steps[static_cast<std::size_t>(j)].cluster_size - 1;
    double min_e = std::numeric_limits<double>::infinity();
    for (NodeId b = 0; b < n; ++b) {
      if (!pool[static_cast<std::size_t>(b)]) continue;
      std::vector<NodeId> others;
      for (NodeId v = 0; v < n; ++v) {
        if (v != b && pool[static_cast<std::size_t>(v)]) others.push_back(v);
      }
      std::stable_sort(others.begin(), others.end(),
                       [&](NodeId u, NodeId v) { return spt.dist(u, b) < spt.dist(v, b); });
      others.resize(static_cast<std::size_t>(want));
      double e = 0.0;
      for (NodeId v : others) e += spt.dist(v, b);
      if (j + 1 < m) e += spt.dist(plan.heads[static_cast<std::size_t>(j + 1)], b);
      if (min_e > e) {
        min_e = e;
        others.push_back(b);
        std::sort(others.begin(), others.end());
        plan.clusters[static_cast<std::size_t>(j)] = std::move(others);
        plan.heads[static_cast<std::size_t>(j)] = b;
      }
    }
    for (NodeId v : plan.clusters[static_cast<std::size_t>(j)]) pool[static_cast<std::size_t>(v)] = 0;
  }
  return plan;
}

void WriteSaPlan(std::ostream& out, const SaPlan& plan) {
  for (std::size_t j = 0; j < plan.clusters.size(); ++j) {
    out << "cluster " << j + 1 << " head " << plan.heads[j] << " members";
    for (NodeId v : plan.clusters[j]) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace innet
