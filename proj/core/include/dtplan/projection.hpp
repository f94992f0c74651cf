#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dtplan/domain.hpp"

namespace dtplan {

// One branch decision along a chronicle: which description branch the
// chronicle took at which (top-level) plan step.  Decomposable steps record
// one entry per sub-action, all sharing the step index.  `widened` marks an
// uncertain applicability where the probability was relaxed to [0, hi].
struct TraceStep {
    int step;
    ActionId action;
    int branch;
    bool widened;
};

struct Chronicle {
    WorldState state;
    Interval prob;
    std::vector<TraceStep> trace;
};

// Invariant: sum of prob.lo <= 1 <= sum of prob.hi.  Chronicles reaching a
// bitwise-identical state are merged by adding probabilities (first trace is
// kept); zero-probability chronicles are dropped.  peak_entries is the
// largest entry count held at any step of the projection.
struct ChronicleSet {
    std::vector<Chronicle> entries;
    std::size_t peak_entries = 0;
};

ChronicleSet project(const std::vector<ActionId>& steps, const WorldState& initial,
                     const Domain& domain);

// Advance an existing set through further steps; trace step indices continue
// from step_offset.  peak_entries of the result covers only this
// continuation.
ChronicleSet project_onward(const ChronicleSet& from, const std::vector<ActionId>& steps,
                            const Domain& domain, int step_offset);

struct UtilityBreakdown {
    Interval goal;
    Interval residual;
    Interval total;  // goal + k_r * residual
};

// Hull over the guarded expressions not ruled out at the state.  Throws
// ModelError when every guard of a component evaluates to False.
UtilityBreakdown chronicle_utility(const WorldState& state, const UtilityModel& model);

// Tight bounds of sum(u_i * p_i) over all u in the utility boxes and
// feasible p (p_i within its box, sum exactly 1).  Throws ModelError when no
// feasible p exists (tolerance 1e-9).  Computed by evaluating the dual at
// every breakpoint with outward rounding, so the result encloses the exact
// optimum and is tight to rounding.
Interval bound_weighted_sum(const std::vector<std::pair<Interval, Interval>>& items);

struct PerChronicle {
    Interval goal;
    Interval residual;
    Interval utility;
    Interval prob;
};

struct EUInterval {
    Interval eu;
    std::vector<PerChronicle> per_chronicle;
};

// project + chronicle_utility + bound_weighted_sum.  per_chronicle entries
// are aligned with the chronicle set.
EUInterval evaluate_plan(const std::vector<ActionId>& steps, const Domain& domain);

// As evaluate_plan, but also exposes the chronicle set and its transient
// peak (used for sensitivity analysis and stats without re-projection).
EUInterval evaluate_plan(const std::vector<ActionId>& steps, const Domain& domain,
                         ChronicleSet& chronicles_out);

// Utility and expected-utility bounds of an already-projected set.
EUInterval evaluate_chronicles(const ChronicleSet& set, const Domain& domain);

}  // namespace dtplan
