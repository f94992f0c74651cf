#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtplan/condition.hpp"
#include "dtplan/effect.hpp"
#include "dtplan/interval.hpp"

namespace dtplan {

using ActionId = int;

enum class ActionKind { Primitive, Abstract, Decomposable };

// A branch as written in a domain file.  Primitive branches carry point
// probabilities; branches sharing one condition split its probability mass,
// distinct conditions within an action partition the state space.
struct AuthoredBranch {
    Condition when;
    Interval prob;
    Effect effect;
};

// Optional constants replacing the derived refinement-loss estimates of an
// abstract action during sensitivity analysis.
struct DeltaOverride {
    std::optional<double> goal;
    std::optional<double> residual;
    std::optional<std::pair<double, double>> prob;  // (upper drop, lower rise)
};

// Assignment of instantiation branches to abstract branches: each group
// holds at most one branch per instantiation, identified by (position in the
// instantiation list, branch index in that instantiation's description), and
// every branch of every instantiation appears in exactly one group.
struct BranchGrouping {
    std::vector<std::vector<std::pair<int, int>>> groups;
};

struct ActionDef {
    std::string name;
    ActionKind kind = ActionKind::Primitive;
    std::vector<AuthoredBranch> branches;       // primitive
    std::vector<ActionId> instantiations;       // abstract
    std::vector<ActionId> subplan;              // decomposable
    std::optional<BranchGrouping> grouping;     // abstract; generated when absent
    std::optional<DeltaOverride> deltas;        // abstract
};

// Applicability of a derived branch at an interval state.  `possible` holds
// wherever at least one covered concrete branch could apply, the `certain`
// conjunction wherever every covered branch applies.  For a primitive branch
// both coincide with its authored condition.
struct BranchGuard {
    Condition possible;
    std::vector<Condition> certain;

    Truth eval(const WorldState& state) const;
    static BranchGuard of(Condition c);
};

// Which branch of each instantiation a derived abstract branch covers;
// branch -1 marks a padding slot (that instantiation never takes this
// branch).
struct GroupMember {
    int branch = -1;
};

struct DerivedBranch {
    BranchGuard guard;
    Interval prob;
    Effect effect;
    std::vector<GroupMember> members;  // abstract descriptions only
};

// Compiled single-action description used by projection: the branches of a
// primitive action, or the abstracted branches covering every instantiation
// of an abstract action.
struct BranchSet {
    std::vector<DerivedBranch> branches;
};

}  // namespace dtplan
