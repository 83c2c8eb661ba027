#pragma once

#include <iosfwd>

#include "innet/netmodel.hpp"
#include "innet/trees.hpp"

namespace innet {

// LP-rounding construction of a degree-constrained tree. Re-solves the LP
// relaxation of the flow model once per height level with chosen edges
// pinned. Throws kStalled, kInfeasible or kTimeBudgetExceeded. When trace
// is set, one line per round and attachment is written to it.
RoutedTree Lpr(const NetworkGraph& g, const DelayConstraints& c,
               double budget_seconds = 60.0, std::ostream* trace = nullptr);

// Modified Dijkstra: repeatedly attach the unattached node with the lowest
// tentative height reachable from an attached node with spare capacity.
// Throws kInfeasible when some node can never be attached.
RoutedTree Daa(const NetworkGraph& g, const DelayConstraints& c);

// Messages exchanged by a distributed run of Daa (two per attachment).
int DaaMessageEstimate(const RoutedTree& t);

// For every node v with fewer than n_v - 1 children, every graph neighbor
// u satisfies d_T(u) <= d_T(v) + 1.
bool CheckNonfullFrontierProperty(const RoutedTree& t, const NetworkGraph& g,
                                  const DelayConstraints& c);

// True when every non-leaf has at least n_a - 1 children (always true
// without n_a).
bool SatisfiesAccuracy(const RoutedTree& t, const DelayConstraints& c);

// Dissolves non-leaf nodes with fewer than n_a - 1 children and re-hangs
// their subtrees. Throws kInfeasible when no repair is found.
RoutedTree RepairAccuracy(const RoutedTree& t, const NetworkGraph& g, const DelayConstraints& c);

}  // namespace innet
