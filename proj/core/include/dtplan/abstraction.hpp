#pragma once

#include <string>
#include <vector>

#include "dtplan/action.hpp"
#include "dtplan/domain.hpp"

namespace dtplan {

// Default branch grouping: greedily assigns each instantiation's branches to
// groups so that the summed widths of the grouped probability and effect
// hulls stay small.  Deterministic; ties pick the lowest group index.
BranchGrouping default_grouping(const std::vector<const BranchSet*>& members,
                                int n_attrs);

// Abstraction across actions: one derived branch per group, covering the
// grouped branches of every instantiation.  Probabilities hull the members,
// effects hull coefficient-wise (attributes assigned by only some members
// are hulled against the identity), the guard records possible and certain
// applicability.  Group slots without a branch for some instantiation count
// as padding: never applicable, probability zero.
BranchSet inter_abstract(const std::vector<const BranchSet*>& members,
                         const BranchGrouping& grouping, int n_attrs);

// Abstraction along a sequence: one derived branch per pair, second
// conditions regressed through first effects (possible guards
// existentially, certain guards universally), probabilities multiplied,
// effects composed.  Pairs with identical guards and effects merge by
// adding probabilities; impossible pairs are dropped.
BranchSet seq_abstract(const BranchSet& first, const BranchSet& second);

// One-level refinements of an action: each instantiation as a single-step
// sequence for an abstract action, the subplan for a decomposable one.
// Throws ContractError for primitives.
std::vector<std::vector<ActionId>> expand(const Domain& domain, ActionId action);

}  // namespace dtplan
