#pragma once

#include <vector>

#include "dtplan/planner.hpp"

namespace dtplan {

// Every primitive plan of the refinement network, by depth-first leftmost
// expansion, duplicates removed, in first-reached order.
std::vector<std::vector<ActionId>> enumerate_plans(const Domain& domain);

// Exhaustive oracle: evaluates every primitive plan and returns those whose
// EU midpoint is within `tie_tolerance` of the best, in enumeration order.
// Plan ids are enumeration indices.
std::vector<Plan> enumerate_optimal(const Domain& domain, double tie_tolerance = 1e-9);

struct BBStats {
    std::size_t nodes_expanded = 0;
    std::size_t plans_evaluated = 0;  // bound computations
    // Chronicle entries held simultaneously: the open path keeps each node's
    // resolved-prefix projection alive, plus the transient suffix projection.
    std::size_t peak_states = 0;
    double wall_ms = 0.0;
};

struct BBResult {
    std::vector<Plan> plans;
    BBStats stats;
};

// Branch-and-bound over the decision tree of leftmost refinements.  Node
// bounds come from projecting the remaining mixed plan on top of the node's
// resolved prefix; subtrees are pruned when the bound cannot beat the
// incumbent by more than the tie tolerance, so EU ties survive and the
// returned set matches enumerate_optimal.
BBResult bb_decision_tree(const Domain& domain, double tie_tolerance = 1e-9);

}  // namespace dtplan
