#include "dtplan/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "dtplan/errors.hpp"

namespace dtplan {
namespace {

constexpr double kProbabilityTolerance = 1e-9;

struct StateKey {
    const WorldState* state;
};

struct StateKeyHash {
    size_t operator()(const StateKey& k) const {
        // FNV-1a over the raw interval bytes; states compared bitwise.
        size_t h = 1469598103934665603ull;
        for (const Interval& v : k.state->values()) {
            unsigned char bytes[sizeof(Interval)];
            std::memcpy(bytes, &v, sizeof(Interval));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 1099511628211ull;
            }
        }
        return h;
    }
};

struct StateKeyEq {
    bool operator()(const StateKey& a, const StateKey& b) const { return *a.state == *b.state; }
};

void merge_identical(std::vector<Chronicle>& entries) {
    std::vector<Chronicle> merged;
    merged.reserve(entries.size());
    std::unordered_map<StateKey, size_t, StateKeyHash, StateKeyEq> index;
    for (Chronicle& c : entries) {
        if (c.prob.hi == 0.0) continue;
        auto it = index.find(StateKey{&c.state});
        if (it != index.end()) {
            merged[it->second].prob = add(merged[it->second].prob, c.prob);
        } else {
            merged.push_back(std::move(c));
            index.emplace(StateKey{&merged.back().state}, merged.size() - 1);
        }
    }
    // Map keys point into `merged`; reserve() above keeps them stable.
    entries = std::move(merged);
}

void advance(std::vector<Chronicle>& entries, ActionId action, int top_step,
             const Domain& domain, size_t& peak) {
    const ActionDef& def = domain.action(action);
    if (def.kind == ActionKind::Decomposable && !domain.has_description(action)) {
        for (ActionId sub : def.subplan) advance(entries, sub, top_step, domain, peak);
        return;
    }
    const BranchSet& desc = domain.description(action);
    std::vector<Chronicle> next;
    next.reserve(entries.size());
    for (const Chronicle& c : entries) {
        for (size_t bi = 0; bi < desc.branches.size(); ++bi) {
            const DerivedBranch& b = desc.branches[bi];
            Truth t = b.guard.eval(c.state);
            if (t == Truth::False) continue;
            bool widened = t == Truth::Unknown;
            Interval p = widened ? Interval(0.0, b.prob.hi) : b.prob;
            Chronicle out;
            out.prob = mul(c.prob, p);
            if (out.prob.hi == 0.0) continue;
            out.state = b.effect.apply(c.state);
            out.trace = c.trace;
            out.trace.push_back({top_step, action, static_cast<int>(bi), widened});
            next.push_back(std::move(out));
        }
    }
    merge_identical(next);
    entries = std::move(next);
    peak = std::max(peak, entries.size());
}

}  // namespace

ChronicleSet project(const std::vector<ActionId>& steps, const WorldState& initial,
                     const Domain& domain) {
    ChronicleSet set;
    set.entries.push_back({initial, Interval(1.0), {}});
    set.peak_entries = 1;
    for (size_t i = 0; i < steps.size(); ++i)
        advance(set.entries, steps[i], static_cast<int>(i), domain, set.peak_entries);
    return set;
}

ChronicleSet project_onward(const ChronicleSet& from, const std::vector<ActionId>& steps,
                            const Domain& domain, int step_offset) {
    ChronicleSet set;
    set.entries = from.entries;
    set.peak_entries = set.entries.size();
    for (size_t i = 0; i < steps.size(); ++i)
        advance(set.entries, steps[i], step_offset + static_cast<int>(i), domain,
                set.peak_entries);
    return set;
}

namespace {

Interval hull_guarded(const std::vector<GuardedExpr>& parts, const WorldState& state,
                      const char* component) {
    bool any = false;
    Interval acc;
    for (const GuardedExpr& g : parts) {
        if (g.when.eval(state) == Truth::False) continue;
        Interval v = g.value.eval(state);
        acc = any ? hull(acc, v) : v;
        any = true;
    }
    if (!any)
        throw ModelError(std::string("no applicable ") + component +
                         " utility guard for a reachable state");
    return acc;
}

}  // namespace

UtilityBreakdown chronicle_utility(const WorldState& state, const UtilityModel& model) {
    UtilityBreakdown out;
    out.goal = hull_guarded(model.goal, state, "goal");
    out.residual = hull_guarded(model.residual, state, "residual");
    out.total = add(out.goal, scale(out.residual, model.k_r));
    return out;
}

namespace {

double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}
double add_up(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? next_up(s) : s;
}
double mul_up(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return err > 0 ? next_up(p) : p;
}

// Upper bound of max sum(u_i * p_i), u_i fixed points, via the dual
//   min over lambda of: lambda + sum_i max(0, u_i - lambda) * p_i.hi
//                              + sum_i min(0, u_i - lambda) * p_i.lo
// evaluated with upward rounding at every breakpoint lambda = u_i.  Any
// lambda gives a valid upper bound; the true optimum sits at a breakpoint.
double dual_upper(const std::vector<std::pair<double, Interval>>& items) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [lambda, unused] : items) {
        (void)unused;
        double acc = lambda;
        for (const auto& [u, p] : items) {
            double d = u - lambda;  // exact or not; rounding handled below
            double du = add_up(u, -lambda);
            if (du > 0) acc = add_up(acc, mul_up(du, p.hi));
            else if (d < 0)
                acc = add_up(acc, mul_up(du, p.lo));
        }
        best = std::min(best, acc);
    }
    return best;
}

}  // namespace

Interval bound_weighted_sum(const std::vector<std::pair<Interval, Interval>>& items) {
    if (items.empty()) throw ModelError("bound_weighted_sum: empty chronicle set");
    double sum_lo = 0.0, sum_hi = 0.0;
    for (const auto& [u, p] : items) {
        (void)u;
        sum_lo += p.lo;
        sum_hi += p.hi;
    }
    if (sum_lo > 1.0 + kProbabilityTolerance || sum_hi < 1.0 - kProbabilityTolerance)
        throw ModelError("infeasible probability box: bounds sum to [" +
                         std::to_string(sum_lo) + ", " + std::to_string(sum_hi) + "]");

    std::vector<std::pair<double, Interval>> upper_items, lower_items;
    upper_items.reserve(items.size());
    lower_items.reserve(items.size());
    for (const auto& [u, p] : items) {
        upper_items.emplace_back(u.hi, p);
        lower_items.emplace_back(-u.lo, p);
    }
    double hi = dual_upper(upper_items);
    double lo = -dual_upper(lower_items);
    return {lo, hi};
}

EUInterval evaluate_chronicles(const ChronicleSet& set, const Domain& domain) {
    EUInterval out;
    out.per_chronicle.reserve(set.entries.size());
    std::vector<std::pair<Interval, Interval>> items;
    items.reserve(set.entries.size());
    for (const Chronicle& c : set.entries) {
        UtilityBreakdown u = chronicle_utility(c.state, domain.utility());
        out.per_chronicle.push_back({u.goal, u.residual, u.total, c.prob});
        items.emplace_back(u.total, c.prob);
    }
    out.eu = bound_weighted_sum(items);
    return out;
}

EUInterval evaluate_plan(const std::vector<ActionId>& steps, const Domain& domain) {
    ChronicleSet set = project(steps, domain.initial(), domain);
    return evaluate_chronicles(set, domain);
}

EUInterval evaluate_plan(const std::vector<ActionId>& steps, const Domain& domain,
                         ChronicleSet& chronicles_out) {
    chronicles_out = project(steps, domain.initial(), domain);
    return evaluate_chronicles(chronicles_out, domain);
}

}  // namespace dtplan
