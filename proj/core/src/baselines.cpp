#include "dtplan/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

#include "dtplan/abstraction.hpp"
#include "dtplan/errors.hpp"

namespace dtplan {

namespace {

std::size_t leftmost_refinable(const Domain& domain, const std::vector<ActionId>& steps) {
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (domain.action(steps[i]).kind != ActionKind::Primitive) return i;
    return steps.size();
}

std::vector<ActionId> splice(const std::vector<ActionId>& steps, std::size_t position,
                             const std::vector<ActionId>& refinement) {
    std::vector<ActionId> out;
    out.reserve(steps.size() - 1 + refinement.size());
    out.insert(out.end(), steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(position));
    out.insert(out.end(), refinement.begin(), refinement.end());
    out.insert(out.end(), steps.begin() + static_cast<std::ptrdiff_t>(position) + 1, steps.end());
    return out;
}

}  // namespace

std::vector<std::vector<ActionId>> enumerate_plans(const Domain& domain) {
    std::vector<std::vector<ActionId>> out;
    std::set<std::vector<ActionId>> seen;

    std::function<void(const std::vector<ActionId>&)> rec =
        [&](const std::vector<ActionId>& steps) {
            std::size_t pos = leftmost_refinable(domain, steps);
            if (pos == steps.size()) {
                if (seen.insert(steps).second) out.push_back(steps);
                return;
            }
            for (const std::vector<ActionId>& refinement : expand(domain, steps[pos]))
                rec(splice(steps, pos, refinement));
        };
    rec({domain.root()});
    return out;
}

std::vector<Plan> enumerate_optimal(const Domain& domain, double tie_tolerance) {
    std::vector<std::vector<ActionId>> all = enumerate_plans(domain);
    std::vector<EUInterval> eus;
    eus.reserve(all.size());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& steps : all) {
        eus.push_back(evaluate_plan(steps, domain));
        best = std::max(best, eus.back().eu.mid());
    }
    std::vector<Plan> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (eus[i].eu.mid() < best - tie_tolerance) continue;
        Plan p;
        p.id = static_cast<int>(i);
        p.steps = all[i];
        p.eu = eus[i];
        p.is_primitive = true;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

struct BBContext {
    const Domain& domain;
    double tie_tolerance;
    BBStats stats;
    double incumbent = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::vector<ActionId>, EUInterval>> complete;
    std::set<std::vector<ActionId>> seen_complete;
    std::size_t live_entries = 0;  // chronicle entries held by the open path
};

// `prefix` is the projection of steps[0..resolved); all of those are
// primitive.  Returns the node's bound.
void bb_visit(BBContext& ctx, const std::vector<ActionId>& steps, std::size_t resolved,
              const ChronicleSet& prefix) {
    const Domain& d = ctx.domain;

    // Extend the resolved prefix over any primitive steps that follow.
    std::size_t next = resolved;
    while (next < steps.size() && d.action(steps[next]).kind == ActionKind::Primitive) ++next;
    ChronicleSet here = project_onward(
        prefix, std::vector<ActionId>(steps.begin() + static_cast<std::ptrdiff_t>(resolved),
                                      steps.begin() + static_cast<std::ptrdiff_t>(next)),
        d, static_cast<int>(resolved));
    ctx.stats.peak_states =
        std::max(ctx.stats.peak_states, ctx.live_entries + here.peak_entries);

    if (next == steps.size()) {
        EUInterval eu = evaluate_chronicles(here, d);
        ctx.stats.plans_evaluated += 1;
        if (ctx.seen_complete.insert(steps).second) {
            ctx.complete.emplace_back(steps, eu);
            ctx.incumbent = std::max(ctx.incumbent, eu.eu.lo);
        }
        return;
    }

    // Bound: project the rest of the mixed plan transiently.
    ChronicleSet rest = project_onward(
        here, std::vector<ActionId>(steps.begin() + static_cast<std::ptrdiff_t>(next),
                                    steps.end()),
        d, static_cast<int>(next));
    ctx.stats.peak_states = std::max(
        ctx.stats.peak_states, ctx.live_entries + here.entries.size() + rest.peak_entries);
    EUInterval bound = evaluate_chronicles(rest, d);
    ctx.stats.plans_evaluated += 1;
    if (bound.eu.hi < ctx.incumbent - ctx.tie_tolerance) return;

    ctx.stats.nodes_expanded += 1;
    ctx.live_entries += here.entries.size();
    for (const std::vector<ActionId>& refinement : expand(d, steps[next]))
        bb_visit(ctx, splice(steps, next, refinement), next, here);
    ctx.live_entries -= here.entries.size();
}

}  // namespace

BBResult bb_decision_tree(const Domain& domain, double tie_tolerance) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();

    BBContext ctx{domain, tie_tolerance, {}, -std::numeric_limits<double>::infinity(), {}, {}, 0};
    ChronicleSet root;
    root.entries.push_back({domain.initial(), Interval(1.0), {}});
    root.peak_entries = 1;
    bb_visit(ctx, {domain.root()}, 0, root);

    BBResult out;
    out.stats = ctx.stats;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [steps, eu] : ctx.complete) best = std::max(best, eu.eu.mid());
    int id = 0;
    for (const auto& [steps, eu] : ctx.complete) {
        if (eu.eu.mid() < best - tie_tolerance) continue;
        Plan p;
        p.id = id++;
        p.steps = steps;
        p.eu = eu;
        p.is_primitive = true;
        out.plans.push_back(std::move(p));
    }
    out.stats.wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
}

}  // namespace dtplan
