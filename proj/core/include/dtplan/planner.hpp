#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtplan/projection.hpp"

namespace dtplan {

struct Plan {
    int id = 0;
    std::vector<ActionId> steps;
    EUInterval eu;
    int parent = -1;            // id of the plan this one refined
    int refined_position = -1;  // step of the parent that was refined
    bool is_primitive = false;  // every step primitive
};

enum class StrategyKind { FirstAction, FixedPriority, Sensitivity };

struct Strategy {
    StrategyKind kind = StrategyKind::FirstAction;
    // Overrides the domain's priority table when set (fixed-priority only).
    std::optional<std::map<std::string, int>> priorities;
    // Fraction of the refinable steps examined by sensitivity analysis;
    // candidates are taken leftmost-first.
    double sensitivity_fraction = 1.0;
};

struct PlannerStats {
    std::size_t plans_evaluated = 0;
    std::size_t expansions = 0;
    // Largest chronicle set held by any single projection or selection
    // operation; independent of the number of worker threads.
    std::size_t peak_states = 0;
    double wall_ms = 0.0;
};

struct Budget {
    std::optional<std::size_t> expansions;
    std::optional<double> ms;
};

// Fired after each expansion, once the children are evaluated and the
// frontier is pruned.  References are valid only during the callback.
struct ExpansionEvent {
    const Plan& parent;
    std::size_t position;
    const std::vector<Plan>& children;
    const std::vector<Plan>& frontier;
};

struct PlannerOptions {
    Budget budget;
    int jobs = 1;
    std::function<void(const ExpansionEvent&)> on_expansion;
};

struct PlanResult {
    std::vector<Plan> plans;
    PlannerStats stats;
};

// Refinement planning: evaluate the root, repeatedly pick the most promising
// refinable plan, refine one of its steps per the strategy, prune dominated
// plans.  Without a budget the loop runs until every surviving plan is
// primitive; with one it stops early and returns the current frontier.
PlanResult drips_plan(const Domain& domain, const Strategy& strategy,
                      const PlannerOptions& options = {});

// Index of the refinable plan with the greatest EU upper bound (ties: lowest
// id); plans.size() when every plan is primitive.
std::size_t select_plan(const std::vector<Plan>& plans);

// Removes every plan whose EU upper bound lies strictly below some other
// plan's lower bound; plans touching at the boundary survive.
std::vector<Plan> prune_dominated(std::vector<Plan> plans);

bool step_is_refinable(const Domain& domain, ActionId action);

// Leftmost refinable step.
std::size_t select_action_first(const Domain& domain, const Plan& plan);

// Highest-priority refinable step, ties leftmost; actions without an entry
// have priority 0.
std::size_t select_action_priority(const Domain& domain, const Plan& plan,
                                   const std::optional<std::map<std::string, int>>& overrides);

// Per-chronicle refinement-loss estimates for the abstract action at
// `position`: how far the goal and residual utility upper bounds can drop,
// and how the branch probability bounds can shift (upper drop, lower rise),
// over the action's instantiations.
struct DeltaBounds {
    double goal_drop = 0.0;
    double residual_drop = 0.0;
    std::pair<double, double> prob_shift{0.0, 0.0};
};

DeltaBounds delta_functions(const Domain& domain, const std::vector<ActionId>& steps,
                            std::size_t position, const Chronicle& chronicle);

// Upper bound on how much the plan's EU upper bound can fall when the action
// at `position` is refined: eu.hi minus the smallest adjusted upper bound
// across instantiations.  Zero for decomposable steps and for abstract steps
// whose instantiations are indistinguishable.
double sensitivity(const Domain& domain, const std::vector<ActionId>& steps,
                   std::size_t position, const EUInterval& eu, const ChronicleSet& chronicles);

// Ratio rule: maximize sensitivity / expansion_count, ties leftmost.
std::size_t select_by_weight(const std::vector<double>& sensitivities,
                             const std::vector<int>& expansion_counts);

std::size_t select_action_sensitivity(const Domain& domain, const Plan& plan,
                                      double fraction = 1.0);

// True when every step of `concrete` can be reached from `abstract_steps` by
// refinement alone; used to check anytime frontiers.
bool plan_covers(const Domain& domain, const std::vector<ActionId>& abstract_steps,
                 const std::vector<ActionId>& concrete);

}  // namespace dtplan
