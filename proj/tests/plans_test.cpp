#include <random>
#include <sstream>

#include "doctest.h"
#include "innet/error.hpp"
#include "innet/plans.hpp"
#include "support/graph_fixtures.hpp"

using namespace innet;
using namespace innet::testing;

namespace {

const EnergyParams kDefaultEnergy{};  // R = 8192, r = 32, e_b = 1
constexpr double R = 8192.0;
constexpr double r = 32.0;

bool HasViolation(const std::vector<PlanViolation>& v, ViolationKind kind, NodeId node) {
  return std::find(v.begin(), v.end(), PlanViolation{kind, node}) != v.end();
}

RoutedTree TreeBTree() { return RoutedTree::FromParents(TreeB(), {kNoParent, 0, 1, 1}); }

}  // namespace

TEST_CASE("golden per-evaluation energies for the chain and branched examples") {
  auto chain = Chain(4);
  auto spt = ComputeShortestPaths(chain);
  auto plan = TreeSolution(BuildDct(chain));
  auto rep = PlanEnergy(plan, spt, kDefaultEnergy);
  CHECK(rep.total == 3 * R + 6 * r);
  CHECK(rep.total == 24768.0);
  CHECK(rep.fft_component == 3 * R);
  CHECK(rep.eig_component == 6 * r);
  CHECK(rep.accounting == Accounting::kPerEvaluation);
  CHECK(CentralizedBaselineEnergy(chain, spt, kDefaultEnergy) == 49152.0);

  auto b = TreeB();
  auto bspt = ComputeShortestPaths(b);
  auto brep = PlanEnergy(TreeSolution(TreeBTree()), bspt, kDefaultEnergy);
  CHECK(brep.total == 3 * R + 3 * r);
  CHECK(brep.total == 24672.0);
  CHECK(CentralizedBaselineEnergy(b, bspt, kDefaultEnergy) == 40960.0);
}

TEST_CASE("centralized baseline with every node one hop out") {
  auto g = Star(4);
  CHECK(CentralizedBaselineEnergy(g, ComputeShortestPaths(g), kDefaultEnergy) == 24576.0);
}

TEST_CASE("two-node plan costs one FFT hop and is optimal") {
  NetworkGraph g(2, {{0, 1, 1.0}});
  CommPlan p(2);
  p.Assign(1, 0);
  p.Assign(0, 0);
  CHECK(PlanEnergy(p, ComputeShortestPaths(g), kDefaultEnergy).total == R);
  auto best = BruteForcePlanOptimum(g, {2, 2}, std::nullopt, R, r);
  REQUIRE(best.has_value());
  CHECK(*best == R);
}

TEST_CASE("energy scales with e_b") {
  auto g = Chain(4);
  EnergyParams e;
  e.e_tx = 1.5;
  e.e_rx = 0.5;
  CHECK(PlanEnergy(TreeSolution(BuildDct(g)), ComputeShortestPaths(g), e).total == 2 * (3 * R + 6 * r));
}

TEST_CASE("tree solution structure") {
  auto star = TreeSolution(BuildDct(Star(5)));
  CHECK(star.heads() == std::vector<NodeId>{0});
  CHECK(star.cluster(0) == std::vector<NodeId>{0, 1, 2, 3, 4});

  auto chain = TreeSolution(BuildDct(Chain(4)));
  CHECK(chain.heads() == std::vector<NodeId>{0, 1, 2});
  CHECK(chain.cluster(0) == std::vector<NodeId>{0, 1});
  CHECK(chain.cluster(1) == std::vector<NodeId>{1, 2});
  CHECK(chain.cluster(2) == std::vector<NodeId>{2, 3});
  CHECK(chain.evaluators(1) == std::vector<NodeId>{0, 1});
}

TEST_CASE("combinability") {
  CommPlan single(5);
  single.Assign(1, 1);
  single.Assign(2, 1);
  CHECK(CheckCombinable(single));

  CommPlan disjoint(5);
  disjoint.Assign(1, 1);
  disjoint.Assign(2, 1);
  disjoint.Assign(3, 3);
  disjoint.Assign(4, 3);
  CHECK_FALSE(CheckCombinable(disjoint));

  CommPlan chained(5);
  chained.Assign(1, 1);
  chained.Assign(2, 1);
  chained.Assign(2, 2);
  chained.Assign(3, 2);
  chained.Assign(3, 3);
  chained.Assign(4, 3);
  CHECK(CheckCombinable(chained));
}

TEST_CASE("closed-form tree energy") {
  auto chain = ClosedFormTreeEnergy(BuildDct(Chain(4)), kDefaultEnergy);
  CHECK(chain.total == 3 * R + 5 * r);
  CHECK(chain.accounting == Accounting::kMergedClosedForm);
  CHECK(ClosedFormTreeEnergy(BuildDct(Star(4)), kDefaultEnergy).total == 3 * R);
  CHECK(ClosedFormTreeEnergy(TreeBTree(), kDefaultEnergy).total == 3 * R + 3 * r);
}

TEST_CASE("lower bound") {
  CHECK(LowerBound(Chain(4), kDefaultEnergy, 3) == 3 * R + 5 * r);
  CHECK(LowerBound(Star(4), kDefaultEnergy, 1) == 3 * R);
  // ceil(4 / 2) = 2 heads.
  CHECK(LowerBound(Chain(4), DelayConstraints::Uniform(4, 2), kDefaultEnergy) == 3 * R + 4 * r);
  CHECK_THROWS_AS(LowerBound(Chain(4), kDefaultEnergy, 0), Error);
}

TEST_CASE("validation reports each violation kind") {
  auto c = DelayConstraints::Uniform(4, 2);
  auto chain_plan = TreeSolution(BuildDct(Chain(4)));
  CHECK(ValidatePlan(chain_plan, c).empty());

  CommPlan star_plan = TreeSolution(BuildDct(Star(4)));
  CHECK(HasViolation(ValidatePlan(star_plan, c), ViolationKind::kDelayViolation, 0));
  CHECK(ValidatePlan(star_plan, DelayConstraints::Uniform(4, 4)).empty());

  CommPlan disjoint(4);
  disjoint.Assign(0, 0);
  disjoint.Assign(1, 0);
  disjoint.Assign(2, 2);
  disjoint.Assign(3, 2);
  CHECK(HasViolation(ValidatePlan(disjoint, c), ViolationKind::kNotCombinable, -1));

  CommPlan uncovered(4);
  uncovered.Assign(0, 0);
  uncovered.Assign(1, 0);
  uncovered.Assign(2, 0);
  CHECK(HasViolation(ValidatePlan(uncovered, DelayConstraints::Uniform(4, 4)), ViolationKind::kUncovered, 3));
  CHECK_THROWS_AS(PlanEnergy(uncovered, ComputeShortestPaths(Star(4)), kDefaultEnergy), Error);

  CommPlan lonely(4);  // 3 evaluates only its own FFT
  lonely.Assign(0, 0);
  lonely.Assign(1, 0);
  lonely.Assign(2, 0);
  lonely.Assign(3, 3);
  CHECK(HasViolation(ValidatePlan(lonely, DelayConstraints::Uniform(4, 4)), ViolationKind::kHeadInconsistent, 3));

  auto acc = DelayConstraints::Uniform(4, 4, 3);
  CHECK(HasViolation(ValidatePlan(chain_plan, acc), ViolationKind::kAccuracyViolation, 1));
  CHECK(ValidatePlan(star_plan, acc).empty());
}

TEST_CASE("tree solutions of random trees are valid and combinable") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    std::vector<Edge> edges;
    std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoParent);
    for (NodeId v = 1; v < n; ++v) {
      parent[static_cast<std::size_t>(v)] = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(v));
      edges.push_back({parent[static_cast<std::size_t>(v)], v, 1.0});
    }
    NetworkGraph g(n, edges);
    auto t = RoutedTree::FromParents(g, parent);
    auto plan = TreeSolution(t);
    CHECK(CheckCombinable(plan));
    DelayConstraints c;
    for (NodeId v = 0; v < n; ++v) c.max_cluster.push_back(t.children_count(v) + 1);
    CHECK(ValidatePlan(plan, c).empty());
  }
}

TEST_CASE("closed form of a minimum non-leaf dct meets the lower bound") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = RandomGraph(seed, 9, 8);
    auto t = BuildMdct(g, MdctMode::kExact);
    CHECK(ClosedFormTreeEnergy(t, kDefaultEnergy).total ==
          LowerBound(g, kDefaultEnergy, ComputeTreeMetrics(t).non_leaf_count));
  }
}

TEST_CASE("plan energy is invariant under relabeling") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = RandomGraph(seed, 10, 8, true);
    auto plan = TreeSolution(BuildDct(g));
    std::vector<NodeId> perm(10);
    for (int i = 0; i < 10; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin() + 1, perm.end(), rng);
    auto h = g.Relabeled(perm);
    CommPlan moved(10);
    for (NodeId i = 0; i < 10; ++i)
      for (NodeId j = 0; j < 10; ++j)
        if (plan.assigned(i, j)) moved.Assign(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    CHECK(PlanEnergy(plan, ComputeShortestPaths(g), kDefaultEnergy).total ==
          doctest::Approx(PlanEnergy(moved, ComputeShortestPaths(h), kDefaultEnergy).total).epsilon(1e-12));
  }
}

TEST_CASE("tree-solution energy never drops below the lower bound") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto g = RandomGraph(seed, 12, 10);
    auto spt = ComputeShortestPaths(g);
    auto t = BuildDct(g);
    auto c = DelayConstraints::Uniform(12, ComputeTreeMetrics(t).max_children + 1);
    CHECK(PlanEnergy(TreeSolution(t), spt, kDefaultEnergy).total >= LowerBound(g, c, kDefaultEnergy));
  }
}

TEST_CASE("plan text round trip and report csv") {
  auto plan = TreeSolution(BuildDct(Chain(3)));
  std::ostringstream out;
  WritePlan(out, plan);
  CHECK(out.str() == "eval 0 0\neval 1 0\neval 1 1\neval 2 1\n");
  std::istringstream in(out.str());
  CHECK(ReadPlan(in, 3) == plan);

  std::istringstream bad("eval 1\n");
  CHECK_THROWS_AS(ReadPlan(bad, 3), Error);

  std::ostringstream csv;
  WriteEnergyReportCsv(csv, PlanEnergy(plan, ComputeShortestPaths(Chain(3)), kDefaultEnergy));
  CHECK(csv.str() == "total,fft_component,eig_component,accounting\n16448,16384,64,PerEvaluation\n");
}
