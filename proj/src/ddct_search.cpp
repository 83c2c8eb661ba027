#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "innet/error.hpp"
#include "innet/milp_models.hpp"

namespace innet {
namespace {

using Clock = std::chrono::steady_clock;

// Exhaustive search over height levels. In an optimal tree no node can be
// lifted to a shallower level (its subtree would move up with it), so every
// level is a maximum set of candidates that can be matched to the previous
// level within the child limits. Only such sets are enumerated.
class LevelSearch {
 public:
  LevelSearch(const NetworkGraph& g, const DelayConstraints& c, double budget)
      : g_(g), n_(g.num_nodes()), budget_(budget), start_(Clock::now()) {
    room_.resize(static_cast<std::size_t>(n_));
    for (NodeId v = 0; v < n_; ++v) room_[static_cast<std::size_t>(v)] = c.n(v) - 1;
    placed_.assign(static_cast<std::size_t>(n_), 0);
    parent_.assign(static_cast<std::size_t>(n_), kNoParent);
  }

  DdctResult Run(const std::optional<RoutedTree>& incumbent) {
    if (incumbent) {
      best_cost_ = ComputeTreeMetrics(*incumbent).sum_heights;
      best_parent_ = incumbent->parents();
    }
    placed_[0] = 1;
    if (n_ == 1) {
      best_cost_ = 0;
      best_parent_ = parent_;
    } else {
      Descend(1, {kBaseStation}, 0, 1);
    }
    DdctResult r;
    r.nodes_explored = nodes_;
    if (!best_parent_.empty()) {
      r.tree = RoutedTree::FromParents(g_, best_parent_);
      r.objective = best_cost_;
    }
    if (timed_out_) {
      r.status = lp::MilpStatus::kTimeBudgetExceeded;
    } else {
      r.status = r.tree ? lp::MilpStatus::kOptimal : lp::MilpStatus::kInfeasible;
      r.root_bound = r.objective;
    }
    return r;
  }

 private:
  bool OutOfTime() {
    if (!timed_out_ && (nodes_ & 255) == 0 &&
        std::chrono::duration<double>(Clock::now() - start_).count() > budget_) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  // Maximum capacitated matching of kids into the marked level. Returns its
  // size; match[v] gets the parent of each matched kid.
  int Match(const std::vector<NodeId>& kids, const std::vector<char>& in_prev,
            std::vector<NodeId>& match) const {
    match.assign(static_cast<std::size_t>(n_), kNoParent);
    std::vector<int> used(static_cast<std::size_t>(n_), 0);
    std::vector<char> seen;
    auto augment = [&](auto&& self, NodeId v) -> bool {
      for (const Neighbor& nb : g_.neighbors(v)) {
        const auto u = static_cast<std::size_t>(nb.node);
        if (!in_prev[u] || seen[u]) continue;
        seen[u] = 1;
        if (used[u] < room_[u]) {
          ++used[u];
          match[static_cast<std::size_t>(v)] = nb.node;
          return true;
        }
        for (NodeId w : kids) {
          if (match[static_cast<std::size_t>(w)] == nb.node && self(self, w)) {
            match[static_cast<std::size_t>(v)] = nb.node;
            return true;
          }
        }
      }
      return false;
    };
    int size = 0;
    for (NodeId v : kids) {
      seen.assign(static_cast<std::size_t>(n_), 0);
      if (augment(augment, v)) ++size;
    }
    return size;
  }

  // Cheapest completion when level k receives `first` nodes, ignoring which
  // nodes can actually serve as parents. nullopt if even that fails.
  std::optional<int> RestBound(int k, const std::vector<char>& in_prev, int first, int remaining) const {
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::vector<NodeId> queue;
    for (NodeId v = 0; v < n_; ++v) {
      if (in_prev[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = 0;
        queue.push_back(v);
      }
    }
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const NodeId u = queue[q];
      for (const Neighbor& nb : g_.neighbors(u)) {
        const auto w = static_cast<std::size_t>(nb.node);
        if (placed_[w] || dist[w] >= 0) continue;
        dist[w] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(nb.node);
      }
    }
    std::vector<int> reach(static_cast<std::size_t>(n_) + 1, 0);
    std::vector<int> caps;
    for (NodeId v = 0; v < n_; ++v) {
      if (placed_[static_cast<std::size_t>(v)]) continue;
      const int d = dist[static_cast<std::size_t>(v)];
      if (d < 0) return std::nullopt;
      for (int j = d; j <= n_; ++j) ++reach[static_cast<std::size_t>(j)];
      caps.push_back(room_[static_cast<std::size_t>(v)]);
    }
    std::sort(caps.rbegin(), caps.rend());
    std::vector<int> cap(caps.size() + 1, 0);
    for (std::size_t m = 0; m < caps.size(); ++m) cap[m + 1] = cap[m] + caps[m];

    int cost = k * first;
    int done = first;
    int last = first;
    for (int j = 2; done < remaining; ++j) {
      const int nb = std::min({cap[static_cast<std::size_t>(last)],
                               reach[static_cast<std::size_t>(std::min(j, n_))] - done,
                               remaining - done});
      if (nb <= 0) return std::nullopt;
      cost += (k + j - 1) * nb;
      done += nb;
      last = nb;
    }
    return cost;
  }

  void Descend(int k, const std::vector<NodeId>& prev, int partial, int count) {
    ++nodes_;
    if (OutOfTime()) return;
    if (count == n_) {
      if (partial < best_cost_) {
        best_cost_ = partial;
        best_parent_ = parent_;
      }
      return;
    }
    std::vector<char> in_prev(static_cast<std::size_t>(n_), 0);
    for (NodeId u : prev) in_prev[static_cast<std::size_t>(u)] = 1;
    std::vector<NodeId> cand;
    for (NodeId v = 0; v < n_; ++v) {
      if (placed_[static_cast<std::size_t>(v)]) continue;
      for (const Neighbor& nb : g_.neighbors(v)) {
        if (in_prev[static_cast<std::size_t>(nb.node)]) {
          cand.push_back(v);
          break;
        }
      }
    }
    std::vector<NodeId> match;
    const int rank = Match(cand, in_prev, match);
    if (rank == 0) return;
    const auto rest = RestBound(k, in_prev, rank, n_ - count);
    if (!rest || partial + *rest >= best_cost_) return;

    if (n_ <= 64) {
      std::uint64_t placed_bits = 0, prev_bits = 0;
      for (NodeId v = 0; v < n_; ++v) {
        if (placed_[static_cast<std::size_t>(v)]) placed_bits |= std::uint64_t{1} << v;
        if (in_prev[static_cast<std::size_t>(v)]) prev_bits |= std::uint64_t{1} << v;
      }
      auto [it, fresh] = seen_.try_emplace({placed_bits, prev_bits, k}, partial);
      if (!fresh) {
        if (it->second <= partial) return;
        it->second = partial;
      }
    }

    // Roomier candidates first; they tend to lead to cheap trees early.
    std::stable_sort(cand.begin(), cand.end(), [&](NodeId a, NodeId b) {
      return room_[static_cast<std::size_t>(a)] > room_[static_cast<std::size_t>(b)];
    });
    std::vector<NodeId> chosen;
    auto choose = [&](auto&& self, std::size_t idx) -> void {
      if (timed_out_) return;
      if (static_cast<int>(chosen.size()) == rank) {
        std::vector<NodeId> level = chosen;
        std::sort(level.begin(), level.end());
        std::vector<NodeId> m;
        Match(level, in_prev, m);
        for (NodeId v : level) {
          placed_[static_cast<std::size_t>(v)] = 1;
          parent_[static_cast<std::size_t>(v)] = m[static_cast<std::size_t>(v)];
        }
        Descend(k + 1, level, partial + k * rank, count + rank);
        for (NodeId v : level) {
          placed_[static_cast<std::size_t>(v)] = 0;
          parent_[static_cast<std::size_t>(v)] = kNoParent;
        }
        return;
      }
      if (cand.size() - idx < static_cast<std::size_t>(rank) - chosen.size()) return;
      chosen.push_back(cand[idx]);
      std::vector<NodeId> m;
      if (Match(chosen, in_prev, m) == static_cast<int>(chosen.size())) self(self, idx + 1);
      chosen.pop_back();
      self(self, idx + 1);
    };
    choose(choose, 0);
  }

  const NetworkGraph& g_;
  int n_;
  double budget_;
  Clock::time_point start_;
  std::vector<int> room_;
  std::vector<char> placed_;
  std::vector<NodeId> parent_;
  int best_cost_ = std::numeric_limits<int>::max();
  std::vector<NodeId> best_parent_;
  // Best partial cost per (placed set, last level, depth).
  std::map<std::tuple<std::uint64_t, std::uint64_t, int>, int> seen_;
  std::int64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

DdctResult SolveDdctByLevels(const NetworkGraph& g, const DelayConstraints& c, double budget_seconds,
                             const std::optional<RoutedTree>& incumbent) {
  c.Validate(g.num_nodes());
  if (!g.unit_weights()) {
    throw Error(ErrorCode::kInvalidArgument, "level search needs unit edge weights");
  }
  return LevelSearch(g, c, budget_seconds).Run(incumbent);
}

}  // namespace innet
