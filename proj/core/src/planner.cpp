#include "dtplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>

#include "dtplan/abstraction.hpp"
#include "dtplan/errors.hpp"

namespace dtplan {

std::size_t select_plan(const std::vector<Plan>& plans) {
    std::size_t best = plans.size();
    for (std::size_t i = 0; i < plans.size(); ++i) {
        if (plans[i].is_primitive) continue;
        if (best == plans.size() || plans[i].eu.eu.hi > plans[best].eu.eu.hi ||
            (plans[i].eu.eu.hi == plans[best].eu.eu.hi && plans[i].id < plans[best].id))
            best = i;
    }
    return best;
}

std::vector<Plan> prune_dominated(std::vector<Plan> plans) {
    double best_lo = -std::numeric_limits<double>::infinity();
    for (const Plan& p : plans) best_lo = std::max(best_lo, p.eu.eu.lo);
    std::vector<Plan> out;
    out.reserve(plans.size());
    for (Plan& p : plans)
        if (!(p.eu.eu.hi < best_lo)) out.push_back(std::move(p));
    return out;
}

bool step_is_refinable(const Domain& domain, ActionId action) {
    return domain.action(action).kind != ActionKind::Primitive;
}

std::size_t select_action_first(const Domain& domain, const Plan& plan) {
    for (std::size_t i = 0; i < plan.steps.size(); ++i)
        if (step_is_refinable(domain, plan.steps[i])) return i;
    throw ContractError("select_action_first: plan has no refinable step");
}

std::size_t select_action_priority(const Domain& domain, const Plan& plan,
                                   const std::optional<std::map<std::string, int>>& overrides) {
    std::size_t best = plan.steps.size();
    int best_priority = 0;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        if (!step_is_refinable(domain, plan.steps[i])) continue;
        int prio = domain.priority(plan.steps[i]);
        if (overrides) {
            auto it = overrides->find(domain.action(plan.steps[i]).name);
            prio = it == overrides->end() ? 0 : it->second;
        }
        if (best == plan.steps.size() || prio > best_priority) {
            best = i;
            best_priority = prio;
        }
    }
    if (best == plan.steps.size())
        throw ContractError("select_action_priority: plan has no refinable step");
    return best;
}

namespace {

struct Rewalk {
    WorldState state;
    Interval prob{1.0};
    bool vanished = false;
};

// Replay a chronicle's branch decisions with the abstract action at
// `position` swapped for its instantiation `inst_index`; applicability of
// every branch is re-evaluated against the recomputed states.
Rewalk rewalk_chronicle(const Domain& domain, const Chronicle& chronicle, std::size_t position,
                        ActionId abstract_action, int inst_index) {
    Rewalk r;
    r.state = domain.initial();
    ActionId inst = domain.action(abstract_action).instantiations[static_cast<size_t>(inst_index)];
    for (const TraceStep& e : chronicle.trace) {
        const DerivedBranch* b;
        if (e.step == static_cast<int>(position) && e.action == abstract_action) {
            int member = domain.description(abstract_action)
                             .branches[static_cast<size_t>(e.branch)]
                             .members[static_cast<size_t>(inst_index)]
                             .branch;
            if (member < 0) {
                r.vanished = true;
                return r;
            }
            b = &domain.description(inst).branches[static_cast<size_t>(member)];
        } else {
            b = &domain.description(e.action).branches[static_cast<size_t>(e.branch)];
        }
        switch (b->guard.eval(r.state)) {
            case Truth::False:
                r.vanished = true;
                return r;
            case Truth::Unknown:
                r.prob = mul(r.prob, Interval(0.0, b->prob.hi));
                break;
            case Truth::True:
                r.prob = mul(r.prob, b->prob);
                break;
        }
        r.state = b->effect.apply(r.state);
    }
    return r;
}

}  // namespace

DeltaBounds delta_functions(const Domain& domain, const std::vector<ActionId>& steps,
                            std::size_t position, const Chronicle& chronicle) {
    ActionId a = steps[position];
    const ActionDef& def = domain.action(a);
    if (def.kind != ActionKind::Abstract)
        throw ContractError("delta_functions: step " + std::to_string(position) +
                            " is not abstract");

    UtilityBreakdown u = chronicle_utility(chronicle.state, domain.utility());
    DeltaBounds out;
    double min_goal = std::numeric_limits<double>::infinity();
    double min_residual = std::numeric_limits<double>::infinity();
    double min_prob_hi = std::numeric_limits<double>::infinity();
    double max_prob_lo = -std::numeric_limits<double>::infinity();
    bool any = false;

    for (std::size_t i = 0; i < def.instantiations.size(); ++i) {
        Rewalk r = rewalk_chronicle(domain, chronicle, position, a, static_cast<int>(i));
        if (r.vanished) {
            min_prob_hi = 0.0;
            max_prob_lo = std::max(max_prob_lo, 0.0);
            continue;
        }
        any = true;
        UtilityBreakdown ui = chronicle_utility(r.state, domain.utility());
        min_goal = std::min(min_goal, ui.goal.hi);
        min_residual = std::min(min_residual, ui.residual.hi);
        min_prob_hi = std::min(min_prob_hi, r.prob.hi);
        max_prob_lo = std::max(max_prob_lo, r.prob.lo);
    }
    if (any) {
        out.goal_drop = std::max(0.0, u.goal.hi - min_goal);
        out.residual_drop = std::max(0.0, u.residual.hi - min_residual);
    }
    out.prob_shift.first = std::max(0.0, chronicle.prob.hi - min_prob_hi);
    out.prob_shift.second = std::max(0.0, max_prob_lo - chronicle.prob.lo);
    return out;
}

namespace {

// Breakpoint evaluation of the dual upper bound, as in bound_weighted_sum
// but without the feasibility gate: sensitivity items may have lost
// probability mass, and an estimate is still wanted.
double relaxed_upper(const std::vector<std::pair<double, Interval>>& items) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [lambda, p0] : items) {
        (void)p0;
        double acc = lambda;
        for (const auto& [u, p] : items) {
            double d = u - lambda;
            if (d > 0) acc += d * p.hi;
            else if (d < 0)
                acc += d * p.lo;
        }
        best = std::min(best, acc);
    }
    return best;
}

}  // namespace

double sensitivity(const Domain& domain, const std::vector<ActionId>& steps,
                   std::size_t position, const EUInterval& eu, const ChronicleSet& chronicles) {
    ActionId a = steps[position];
    const ActionDef& def = domain.action(a);
    if (def.kind != ActionKind::Abstract) return 0.0;

    double min_ub = std::numeric_limits<double>::infinity();

    if (def.deltas) {
        double dug = def.deltas->goal.value_or(0.0);
        double dur = def.deltas->residual.value_or(0.0);
        std::pair<double, double> dp = def.deltas->prob.value_or(std::pair<double, double>{0, 0});
        std::vector<std::pair<double, Interval>> items;
        items.reserve(chronicles.entries.size());
        for (std::size_t c = 0; c < chronicles.entries.size(); ++c) {
            const PerChronicle& pc = eu.per_chronicle[c];
            double u = (pc.goal.hi - dug) + domain.utility().k_r * (pc.residual.hi - dur);
            double hi = std::max(pc.prob.lo, pc.prob.hi - dp.first);
            double lo = std::min(pc.prob.lo + dp.second, hi);
            items.emplace_back(u, Interval(lo, hi));
        }
        if (!items.empty()) min_ub = relaxed_upper(items);
    } else {
        for (std::size_t i = 0; i < def.instantiations.size(); ++i) {
            std::vector<std::pair<double, Interval>> items;
            items.reserve(chronicles.entries.size());
            for (const Chronicle& c : chronicles.entries) {
                Rewalk r = rewalk_chronicle(domain, c, position, a, static_cast<int>(i));
                if (r.vanished || r.prob.hi == 0.0) continue;
                UtilityBreakdown ui = chronicle_utility(r.state, domain.utility());
                items.emplace_back(ui.total.hi, r.prob);
            }
            if (items.empty()) continue;
            min_ub = std::min(min_ub, relaxed_upper(items));
        }
    }
    if (min_ub == std::numeric_limits<double>::infinity()) return 0.0;
    return std::max(0.0, eu.eu.hi - min_ub);
}

std::size_t select_by_weight(const std::vector<double>& sensitivities,
                             const std::vector<int>& expansion_counts) {
    std::size_t best = 0;
    double best_weight = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sensitivities.size(); ++i) {
        double w = sensitivities[i] / std::max(1, expansion_counts[i]);
        if (w > best_weight) {
            best = i;
            best_weight = w;
        }
    }
    return best;
}

std::size_t select_action_sensitivity(const Domain& domain, const Plan& plan, double fraction) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < plan.steps.size(); ++i)
        if (step_is_refinable(domain, plan.steps[i])) candidates.push_back(i);
    if (candidates.empty())
        throw ContractError("select_action_sensitivity: plan has no refinable step");

    std::size_t take = candidates.size();
    if (fraction < 1.0)
        take = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(fraction * static_cast<double>(candidates.size()))));

    ChronicleSet chronicles;
    EUInterval eu = evaluate_plan(plan.steps, domain, chronicles);

    std::vector<double> sens;
    std::vector<int> counts;
    for (std::size_t k = 0; k < take; ++k) {
        std::size_t pos = candidates[k];
        const ActionDef& def = domain.action(plan.steps[pos]);
        sens.push_back(sensitivity(domain, plan.steps, pos, eu, chronicles));
        counts.push_back(def.kind == ActionKind::Abstract
                             ? static_cast<int>(def.instantiations.size())
                             : 1);
    }
    return candidates[select_by_weight(sens, counts)];
}

bool plan_covers(const Domain& domain, const std::vector<ActionId>& abstract_steps,
                 const std::vector<ActionId>& concrete) {
    // covers(a, segment): the segment is reachable from the single action a.
    std::map<std::tuple<ActionId, std::size_t, std::size_t>, bool> memo;

    std::function<bool(ActionId, std::size_t, std::size_t)> covers_action;
    std::function<bool(const std::vector<ActionId>&, std::size_t, std::size_t, std::size_t)>
        covers_seq;

    covers_seq = [&](const std::vector<ActionId>& steps, std::size_t from, std::size_t begin,
                     std::size_t end) -> bool {
        if (from == steps.size()) return begin == end;
        std::size_t remaining = steps.size() - from - 1;
        for (std::size_t take = 1; begin + take + remaining <= end; ++take) {
            if (covers_action(steps[from], begin, begin + take) &&
                covers_seq(steps, from + 1, begin + take, end))
                return true;
        }
        return false;
    };

    covers_action = [&](ActionId a, std::size_t begin, std::size_t end) -> bool {
        if (end - begin == 1 && concrete[begin] == a) return true;
        auto key = std::make_tuple(a, begin, end);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        memo[key] = false;  // cycle guard; network is acyclic anyway
        const ActionDef& def = domain.action(a);
        bool ok = false;
        if (def.kind == ActionKind::Abstract) {
            for (ActionId inst : def.instantiations)
                if (covers_action(inst, begin, end)) {
                    ok = true;
                    break;
                }
        } else if (def.kind == ActionKind::Decomposable) {
            ok = covers_seq(def.subplan, 0, begin, end);
        }
        memo[key] = ok;
        return ok;
    };

    return covers_seq(abstract_steps, 0, 0, concrete.size());
}

namespace {

bool all_primitive(const Domain& domain, const std::vector<ActionId>& steps) {
    for (ActionId a : steps)
        if (domain.action(a).kind != ActionKind::Primitive) return false;
    return true;
}

std::size_t pick_position(const Domain& domain, const Strategy& strategy, const Plan& plan) {
    switch (strategy.kind) {
        case StrategyKind::FirstAction: return select_action_first(domain, plan);
        case StrategyKind::FixedPriority:
            return select_action_priority(domain, plan, strategy.priorities);
        case StrategyKind::Sensitivity:
            return select_action_sensitivity(domain, plan, strategy.sensitivity_fraction);
    }
    throw ContractError("unknown strategy");
}

}  // namespace

PlanResult drips_plan(const Domain& domain, const Strategy& strategy,
                      const PlannerOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    };

    PlanResult result;
    int next_id = 0;
    std::set<std::vector<ActionId>> seen;

    auto make_plan = [&](std::vector<ActionId> steps, int parent, int position) {
        Plan p;
        p.id = next_id++;
        p.parent = parent;
        p.refined_position = position;
        p.is_primitive = all_primitive(domain, steps);
        ChronicleSet cs;
        p.eu = evaluate_plan(steps, domain, cs);
        p.steps = std::move(steps);
        result.stats.plans_evaluated += 1;
        result.stats.peak_states = std::max(result.stats.peak_states, cs.peak_entries);
        return p;
    };

    std::vector<Plan> frontier;
    seen.insert({domain.root()});
    frontier.push_back(make_plan({domain.root()}, -1, -1));

    for (;;) {
        if (options.budget.expansions && result.stats.expansions >= *options.budget.expansions)
            break;
        if (options.budget.ms && elapsed_ms() >= *options.budget.ms) break;
        std::size_t victim = select_plan(frontier);
        if (victim == frontier.size()) break;

        Plan parent = std::move(frontier[static_cast<size_t>(victim)]);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(victim));

        std::size_t position = pick_position(domain, strategy, parent);
        if (strategy.kind == StrategyKind::Sensitivity) {
            // Selection re-projects the parent; account its transient set.
            ChronicleSet cs = project(parent.steps, domain.initial(), domain);
            result.stats.peak_states = std::max(result.stats.peak_states, cs.peak_entries);
        }

        std::vector<std::vector<ActionId>> child_steps;
        for (const std::vector<ActionId>& refinement :
             expand(domain, parent.steps[position])) {
            std::vector<ActionId> steps;
            steps.reserve(parent.steps.size() - 1 + refinement.size());
            steps.insert(steps.end(), parent.steps.begin(),
                         parent.steps.begin() + static_cast<std::ptrdiff_t>(position));
            steps.insert(steps.end(), refinement.begin(), refinement.end());
            steps.insert(steps.end(),
                         parent.steps.begin() + static_cast<std::ptrdiff_t>(position) + 1,
                         parent.steps.end());
            if (seen.insert(steps).second) child_steps.push_back(std::move(steps));
        }

        std::vector<Plan> children;
        if (options.jobs > 1 && child_steps.size() > 1) {
            // Ids and stats must not depend on completion order: pre-assign
            // ids, evaluate concurrently, then fold stats in child order.
            std::vector<std::future<std::pair<EUInterval, std::size_t>>> futures;
            futures.reserve(child_steps.size());
            for (const auto& steps : child_steps)
                futures.push_back(std::async(std::launch::async, [&domain, &steps] {
                    ChronicleSet cs;
                    EUInterval eu = evaluate_plan(steps, domain, cs);
                    return std::make_pair(std::move(eu), cs.peak_entries);
                }));
            for (std::size_t i = 0; i < child_steps.size(); ++i) {
                auto [eu, peak] = futures[i].get();
                Plan p;
                p.id = next_id++;
                p.parent = parent.id;
                p.refined_position = static_cast<int>(position);
                p.is_primitive = all_primitive(domain, child_steps[i]);
                p.eu = std::move(eu);
                p.steps = std::move(child_steps[i]);
                result.stats.plans_evaluated += 1;
                result.stats.peak_states = std::max(result.stats.peak_states, peak);
                children.push_back(std::move(p));
            }
        } else {
            for (auto& steps : child_steps)
                children.push_back(
                    make_plan(std::move(steps), parent.id, static_cast<int>(position)));
        }

        for (const Plan& c : children) frontier.push_back(c);
        result.stats.expansions += 1;
        frontier = prune_dominated(std::move(frontier));

        if (options.on_expansion)
            options.on_expansion(ExpansionEvent{parent, position, children, frontier});
    }

    result.plans = std::move(frontier);
    result.stats.wall_ms = elapsed_ms();
    return result;
}

}  // namespace dtplan
