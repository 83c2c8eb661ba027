// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "innet/annealing.hpp"
#include "innet/approx.hpp"
#include "innet/error.hpp"
#include "innet/milp_models.hpp"
#include "innet/plans.hpp"
#include "support/graph_fixtures.hpp"
#include "support/lp_oracles.hpp"

using namespace innet;
using namespace innet::testing;

namespace {

using Clock = std::chrono::steady_clock;

const EnergyParams kEnergy{};  // R = 8192, r = 32, e_b = 1

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void Require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

bool Close(double a, double b, double tol = 1e-6) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

void GoldenFixtures(Outcome& out) {
  auto chain = Chain(4);
  auto cspt = ComputeShortestPaths(chain);
  const double c_central = CentralizedBaselineEnergy(chain, cspt, kEnergy);
  const double c_tree = PlanEnergy(TreeSolution(BuildDct(chain)), cspt, kEnergy).total;
  out.Require(c_central == 49152.0, "chain centralized " + Num(c_central));
  out.Require(c_tree == 24768.0, "chain tree solution " + Num(c_tree));

  auto b = TreeB();
  auto bspt = ComputeShortestPaths(b);
  const double b_central = CentralizedBaselineEnergy(b, bspt, kEnergy);
  const double b_tree =
      PlanEnergy(TreeSolution(RoutedTree::FromParents(b, {kNoParent, 0, 1, 1})), bspt, kEnergy).total;
  out.Require(b_central == 40960.0, "branched centralized " + Num(b_central));
  out.Require(b_tree == 24672.0, "branched tree solution " + Num(b_tree));
  out.detail << "chain " << c_central << " vs " << c_tree << ", branched " << b_central << " vs "
             << b_tree;
}

void TreeModelExactness(Outcome& out) {
  int mismatches = 0, infeasible = 0;
  for (std::uint64_t i = 1; i <= 25; ++i) {
    const int n_nodes = 5 + static_cast<int>(i % 3);
    const int n = 2 + static_cast<int>(i % 3);
    auto g = RandomGraph(1000 + i * 7, n_nodes, static_cast<int>(i % 5) + 1, i % 2 == 0);
    auto c = DelayConstraints::Uniform(n_nodes, n);
    auto want = BruteForceDdct(g, c.max_cluster);
    auto sol = lp::SolveMilp(BuildIlpP3(g, c).model);
    bool ok;
    if (!want) {
      ++infeasible;
      ok = sol.status == lp::MilpStatus::kInfeasible;
    } else {
      ok = sol.status == lp::MilpStatus::kOptimal && Close(sol.objective_value, *want);
    }
    if (!ok) ++mismatches;
    out.Require(ok, "graph " + std::to_string(i));
  }
  out.detail << "25 graphs, " << infeasible << " infeasible, " << mismatches << " mismatches";
}

void PlanModelExactness(Outcome& out) {
  struct Case {
    const char* name;
    NetworkGraph g;
  };
  const Case cases[] = {{"star", Star(4)}, {"chain", Chain(4)}, {"complete", Complete(4)}};
  int mismatches = 0, compared = 0;
  for (const auto& cs : cases) {
    auto spt = ComputeShortestPaths(cs.g);
    for (int n = 2; n <= 4; ++n) {
      auto c = DelayConstraints::Uniform(4, n);
      auto want = BruteForcePlanOptimum(cs.g, c.max_cluster, std::nullopt, kEnergy.fft_bytes,
                                        kEnergy.eig_bytes);
      auto sol = lp::SolveMilp(BuildIlpP1(cs.g, spt, kEnergy, c).model);
      ++compared;
      const std::string tag = std::string(cs.name) + " n=" + std::to_string(n);
      bool ok;
      if (!want) {
        ok = sol.status == lp::MilpStatus::kInfeasible;
      } else {
        ok = sol.status == lp::MilpStatus::kOptimal && Close(sol.objective_value, *want) &&
             sol.objective_value >= LowerBound(cs.g, kEnergy, (4 + n - 1) / n) - 1e-6;
      }
      if (!ok) ++mismatches;
      out.Require(ok, tag);
    }
  }
  out.detail << compared << " instances, " << mismatches << " mismatches";
}

void ApproximationQuality(Outcome& out) {
  std::vector<double> daa_gaps, lpr_gaps, ratios;
  int below_bound = 0, over_half = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = GenerateRandomTopology(seed, 30, 50.0, 30.0);
    auto c = DelayConstraints::Uniform(30, 6);
    auto spt = ComputeShortestPaths(g);
    const double lb = LowerBound(g, c, kEnergy);
    const double central = CentralizedBaselineEnergy(g, spt, kEnergy);
    const std::string tag = "seed " + std::to_string(seed);
    double best = central * 10;
    for (int alg = 0; alg < 2; ++alg) {
      try {
        auto t = alg == 0 ? Daa(g, c) : Lpr(g, c);
        const double e = PlanEnergy(TreeSolution(t), spt, kEnergy).total;
        (alg == 0 ? daa_gaps : lpr_gaps).push_back(e / lb);
        if (e < lb - 1e-6) ++below_bound;
        out.Require(e >= lb - 1e-6, "(a) " + tag + (alg == 0 ? " daa" : " lpr") + " below bound");
        best = std::min(best, e);
      } catch (const Error& err) {
        out.Require(false, "(a) " + tag + (alg == 0 ? " daa " : " lpr ") + err.what());
      }
    }
    ratios.push_back(best / central);
    if (best > 0.5 * central) ++over_half;
    out.Require(best <= 0.5 * central, "(c) " + tag + " in-network/centralized " + Num(best / central));
  }
  const double daa_med = daa_gaps.empty() ? INFINITY : Median(daa_gaps);
  const double lpr_med = lpr_gaps.empty() ? INFINITY : Median(lpr_gaps);
  out.Require(daa_med <= 1.15, "(b) daa median gap " + Num(daa_med));
  out.Require(lpr_med <= 1.15, "(b) lpr median gap " + Num(lpr_med));
  out.detail << "(a) " << below_bound << " below bound; (b) median gap daa " << Num(daa_med) << ", lpr "
             << Num(lpr_med) << "; (c) in-network/centralized "
             << Num(*std::min_element(ratios.begin(), ratios.end())) << ".."
             << Num(*std::max_element(ratios.begin(), ratios.end())) << ", " << over_half
             << "/20 seeds above 0.5";
}

void DelayMonotonicity(Outcome& out) {
  std::ostringstream values;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto g = GenerateRandomTopology(seed, 20, 50.0, 30.0);
    double prev = INFINITY;
    values << (seed > 1 ? "; " : "") << "seed " << seed << ":";
    for (int n = 3; n <= 6; ++n) {
      auto res = SolveDdct(g, DelayConstraints::Uniform(20, n));
      const std::string tag = "seed " + std::to_string(seed) + " n=" + std::to_string(n);
      out.Require(res.status == lp::MilpStatus::kOptimal,
                  tag + " status " + lp::StatusName(res.status));
      if (res.status != lp::MilpStatus::kOptimal) continue;
      values << ' ' << res.objective;
      out.Require(res.objective <= prev + 1e-9, tag + " increased");
      prev = res.objective;
    }
  }
  out.detail << values.str();
}

void StructuralProperties(Outcome& out) {
  std::mt19937_64 rng(77);
  int checked = 0, infeasible = 0, stalled = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n_nodes = 6 + static_cast<int>(rng() % 25);
    const double side = 40.0 + static_cast<double>(rng() % 61);
    const int n = 2 + static_cast<int>(rng() % 5);
    auto g = GenerateRandomTopology(rng(), n_nodes, side, 30.0);
    auto c = DelayConstraints::Uniform(n_nodes, n);
    auto spt = ComputeShortestPaths(g);
    for (int alg = 0; alg < 2; ++alg) {
      const std::string tag = "instance " + std::to_string(i) + (alg == 0 ? " daa" : " lpr");
      try {
        auto t = alg == 0 ? Daa(g, c) : Lpr(g, c);
        ++checked;
        bool degree = true, height = true;
        for (NodeId v = 0; v < n_nodes; ++v) {
          degree = degree && t.children_count(v) <= c.n(v) - 1;
          height = height && t.height(v) >= spt.hops(v, kBaseStation);
        }
        out.Require(degree, tag + " degree bound");
        out.Require(height, tag + " height below hop distance");
        out.Require(CheckCombinable(TreeSolution(t)), tag + " not combinable");
        out.Require(CheckNonfullFrontierProperty(t, g, c), tag + " frontier property");
      } catch (const Error& err) {
        if (err.code() == ErrorCode::kInfeasible) {
          ++infeasible;
        } else if (err.code() == ErrorCode::kStalled) {
          ++stalled;
        } else {
          out.Require(false, tag + " " + err.what());
        }
      }
    }
  }
  out.detail << "1000 instances, " << checked << " trees checked, " << infeasible
             << " infeasible reports, " << stalled << " stalls";
}

void SolverCorrectness(Outcome& out) {
  std::mt19937_64 rng(4242);
  int lp_bad = 0, bp_bad = 0, bp_feasible = 0;
  for (int i = 0; i < 100; ++i) {
    const int vars = 2 + static_cast<int>(rng() % 5);
    auto m = RandomFeasibleLp(rng, vars, 2 + static_cast<int>(rng() % 6));
    auto want = VertexEnumerationMin(m);
    auto got = lp::SolveLp(m);
    const bool ok = want && got.status == lp::LpStatus::kOptimal &&
                    std::abs(got.objective_value - *want) <= 1e-6;
    if (!ok) ++lp_bad;
    out.Require(ok, "lp " + std::to_string(i));
  }
  for (int i = 0; i < 100; ++i) {
    const int vars = 2 + static_cast<int>(rng() % 11);
    auto m = RandomBinaryProgram(rng, vars, 2 + static_cast<int>(rng() % 5));
    auto want = BinaryEnumerationOptimum(m);
    auto got = lp::SolveMilp(m);
    bool ok;
    if (!want) {
      ok = got.status == lp::MilpStatus::kInfeasible;
    } else {
      ++bp_feasible;
      ok = got.status == lp::MilpStatus::kOptimal && std::abs(got.objective_value - *want) <= 1e-6;
    }
    if (!ok) ++bp_bad;
    out.Require(ok, "binary program " + std::to_string(i));
  }
  out.detail << "100 LPs (" << lp_bad << " disagree), 100 binary programs (" << bp_feasible
             << " feasible, " << bp_bad << " disagree)";
}

void AccuracyFeasibility(Outcome& out) {
  int both = 0, ilp_infeasible = 0, repair_infeasible = 0, ilp_timeouts = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const int n_nodes = 8;
    auto g = GenerateRandomTopology(5000 + seed, n_nodes, 50.0, 30.0);
    auto c = DelayConstraints::Uniform(n_nodes, 6, 3);
    const std::string tag = "seed " + std::to_string(seed);
    // Independent verdict on feasibility by enumerating spanning trees.
    const auto oracle = BruteForceDdct(g, c.max_cluster, 3);

    DdctSolveOptions opts;
    opts.accuracy = 3;
    auto res = SolveDdct(g, c, opts);
    std::optional<int> ilp_obj;
    if (res.status == lp::MilpStatus::kOptimal) {
      out.Require(res.tree && SatisfiesAccuracy(*res.tree, c), tag + " ilp tree misses accuracy");
      out.Require(oracle && Close(res.objective, *oracle), tag + " ilp differs from enumeration");
      if (res.tree) ilp_obj = ComputeTreeMetrics(*res.tree).sum_heights;
    } else if (res.status == lp::MilpStatus::kInfeasible) {
      ++ilp_infeasible;
      out.Require(!oracle, tag + " ilp reports infeasible but a tree exists");
    } else {
      ++ilp_timeouts;
      out.Require(false, tag + " ilp status " + lp::StatusName(res.status));
    }

    std::optional<int> repaired_obj;
    try {
      auto t = RepairAccuracy(Daa(g, c), g, c);
      out.Require(SatisfiesAccuracy(t, c), tag + " repaired tree misses accuracy");
      out.Require(oracle.has_value(), tag + " repair succeeded where enumeration finds nothing");
      repaired_obj = ComputeTreeMetrics(t).sum_heights;
    } catch (const Error& err) {
      out.Require(err.code() == ErrorCode::kInfeasible, tag + " repair: " + err.what());
      ++repair_infeasible;
    }
    if (ilp_obj && repaired_obj) {
      ++both;
      out.Require(*ilp_obj <= *repaired_obj, tag + " ilp worse than repaired daa");
    }
  }
  out.detail << "100 instances of 8 nodes: ilp infeasible " << ilp_infeasible << ", repair infeasible "
             << repair_infeasible << ", both feasible " << both << ", ilp timeouts " << ilp_timeouts;
}

SaSchedule TwoStepSchedule(std::mt19937_64& rng, int n_nodes) {
  SaSchedule s;
  const int k1 = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(3, n_nodes - 1)));
  const int k2 = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(3, n_nodes - k1)));
  for (int k : {k1, k2}) {
    s.steps.push_back({k, static_cast<double>(1 + rng() % 5), 0.1 * static_cast<double>(1 + rng() % 10)});
  }
  return s;
}

void AnnealingPlans(Outcome& out) {
  std::mt19937_64 rng(9);
  int enumerated = 0, greedy_worse = 0;
  for (int i = 0; i < 20; ++i) {
    const int n_nodes = 4 + i % 5;
    auto g = RandomGraph(300 + static_cast<std::uint64_t>(i), n_nodes, 1 + i % 4, i % 3 == 0);
    auto spt = ComputeShortestPaths(g);
    auto sched = TwoStepSchedule(rng, n_nodes);
    const std::string tag = "instance " + std::to_string(i);
    auto ilp = BuildSaIlp(g, spt, sched);
    auto sol = lp::SolveMilp(ilp.model);
    if (sol.status != lp::MilpStatus::kOptimal) {
      out.Require(false, tag + " ilp status " + lp::StatusName(sol.status));
      continue;
    }
    auto plan = ExtractSaPlan(sol, ilp.layout);
    out.Require(Close(SaCost(plan, sched, spt), sol.objective_value), tag + " plan cost differs");
    const double greedy = SaCost(SaGreedy(g, spt, sched), sched, spt);
    out.Require(greedy >= sol.objective_value - 1e-9, tag + " greedy below ilp");
    if (greedy > sol.objective_value + 1e-9) ++greedy_worse;
    if (n_nodes <= 6) {
      ++enumerated;
      std::vector<SaOracleStep> steps;
      for (const SaStep& st : sched.steps) steps.push_back({st.cluster_size, st.new_min_prob * st.iterations});
      out.Require(Close(sol.objective_value, BruteForceSa(AllPairs(g), steps)),
                  tag + " ilp differs from enumeration");
    }
  }
  out.detail << "20 instances, " << enumerated << " checked by enumeration, greedy strictly worse on "
             << greedy_worse;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "four-node fixture energies", 1.0, GoldenFixtures},
      {2, "tree model matches spanning-tree enumeration", 120.0, TreeModelExactness},
      {3, "plan model matches plan enumeration", 300.0, PlanModelExactness},
      {4, "approximation quality at 30 nodes", 600.0, ApproximationQuality},
      {5, "optimum non-increasing in cluster size", 300.0, DelayMonotonicity},
      {6, "structural properties on 1000 instances", 120.0, StructuralProperties},
      {7, "solver agreement with enumeration oracles", 120.0, SolverCorrectness},
      {8, "accuracy bound feasibility", 300.0, AccuracyFeasibility},
      {9, "annealing plans: greedy vs ilp vs enumeration", 300.0, AnnealingPlans},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = Clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.Require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    out.Require(secs <= c.limit_seconds, "runtime " + Num(secs) + " s over " + Num(c.limit_seconds) + " s");
    if (!out.pass) ++failed;
    std::cout << "criterion " << c.id << ": " << (out.pass ? "PASS" : "FAIL") << "  " << c.title << " ("
              << Num(secs) << " s) " << out.detail.str() << '\n';
    for (const auto& f : out.failures) std::cout << "    " << f << '\n';
    std::cout.flush();
  }
  std::cout << (9 - failed) << "/9 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
