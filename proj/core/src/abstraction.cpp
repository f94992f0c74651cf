#include "dtplan/abstraction.hpp"

#include <algorithm>

#include "dtplan/errors.hpp"

namespace dtplan {

Truth BranchGuard::eval(const WorldState& state) const {
    Truth p = possible.eval(state);
    if (p == Truth::False) return Truth::False;
    Truth all = Truth::True;
    for (const Condition& c : certain) {
        all = truth_and(all, c.eval(state));
        if (all == Truth::False) break;
    }
    if (all == Truth::True && p == Truth::True) return Truth::True;
    return Truth::Unknown;
}

BranchGuard BranchGuard::of(Condition c) {
    BranchGuard g;
    g.certain.push_back(c);
    g.possible = std::move(c);
    return g;
}

namespace {

// Coefficient-wise hull of assignment expressions; a missing assignment
// contributes the identity 1 * attr + 0.
AffineExpr hull_exprs(int attr, const std::vector<const AffineExpr*>& exprs, bool all_assign) {
    Interval c = exprs[0]->constant_part();
    for (const AffineExpr* e : exprs) c = hull(c, e->constant_part());
    if (!all_assign) c = hull(c, Interval(0.0));

    std::vector<int> attrs;
    for (const AffineExpr* e : exprs)
        for (const AffineTerm& t : e->terms())
            if (std::find(attrs.begin(), attrs.end(), t.attr) == attrs.end())
                attrs.push_back(t.attr);
    if (!all_assign && std::find(attrs.begin(), attrs.end(), attr) == attrs.end())
        attrs.push_back(attr);
    std::sort(attrs.begin(), attrs.end());

    AffineExpr out = AffineExpr::constant(c);
    for (int a : attrs) {
        bool first = true;
        Interval k{0.0};
        for (const AffineExpr* e : exprs) {
            Interval ke{0.0};
            for (const AffineTerm& t : e->terms())
                if (t.attr == a) ke = t.coeff;
            k = first ? ke : hull(k, ke);
            first = false;
        }
        if (!all_assign) k = hull(k, a == attr ? Interval(1.0) : Interval(0.0));
        out.add_term(a, k);
    }
    return out;
}

double group_cost(const std::vector<std::pair<Interval, const Effect*>>& entries, int n_attrs) {
    Interval p = entries[0].first;
    for (const auto& [prob, eff] : entries) p = hull(p, prob);
    double cost = p.width();
    for (int attr = 0; attr < n_attrs; ++attr) {
        std::vector<const AffineExpr*> exprs;
        bool all = true;
        for (const auto& [prob, eff] : entries) {
            if (const AffineExpr* e = eff->assignment_for(attr))
                exprs.push_back(e);
            else
                all = false;
        }
        if (exprs.empty()) continue;
        AffineExpr h = hull_exprs(attr, exprs, all);
        cost += h.constant_part().width();
        for (const AffineTerm& t : h.terms()) cost += t.coeff.width();
    }
    return cost;
}

}  // namespace

BranchGrouping default_grouping(const std::vector<const BranchSet*>& members, int n_attrs) {
    BranchGrouping g;
    std::vector<std::vector<std::pair<Interval, const Effect*>>> group_entries;
    std::vector<const Condition*> group_guards;

    for (size_t m = 0; m < members.size(); ++m) {
        const auto& branches = members[m]->branches;
        std::vector<bool> taken(g.groups.size(), false);
        for (size_t b = 0; b < branches.size(); ++b) {
            std::pair<Interval, const Effect*> entry{branches[b].prob, &branches[b].effect};
            // A group whose guard differs from the branch's loses certainty
            // and widens its probability toward zero, which no effect-width
            // saving can repay; same-guard groups win over any other, and
            // width breaks ties among them.
            int best = -1;
            double best_delta = 0.0;
            bool best_match = false;
            for (size_t gi = 0; gi < g.groups.size(); ++gi) {
                if (taken[gi]) continue;
                bool match = *group_guards[gi] == branches[b].guard.possible;
                if (best_match && !match) continue;
                double before = group_cost(group_entries[gi], n_attrs);
                auto with = group_entries[gi];
                with.push_back(entry);
                double delta = group_cost(with, n_attrs) - before;
                if (best < 0 || (match && !best_match) || delta < best_delta) {
                    best = static_cast<int>(gi);
                    best_delta = delta;
                    best_match = match;
                }
            }
            if (best < 0) {
                g.groups.push_back({});
                group_entries.push_back({});
                group_guards.push_back(&branches[b].guard.possible);
                best = static_cast<int>(g.groups.size() - 1);
                taken.resize(g.groups.size(), false);
            }
            g.groups[static_cast<size_t>(best)].emplace_back(static_cast<int>(m),
                                                             static_cast<int>(b));
            group_entries[static_cast<size_t>(best)].push_back(entry);
            taken[static_cast<size_t>(best)] = true;
        }
    }
    return g;
}

BranchSet inter_abstract(const std::vector<const BranchSet*>& members,
                         const BranchGrouping& grouping, int n_attrs) {
    const int m = static_cast<int>(members.size());
    BranchSet out;

    for (const auto& group : grouping.groups) {
        DerivedBranch db;
        db.members.assign(static_cast<size_t>(m), GroupMember{});
        for (const auto& [member, branch] : group)
            db.members[static_cast<size_t>(member)].branch = branch;

        // Padding slots copy the first real member's effect and contribute a
        // never-true condition and zero probability.
        const DerivedBranch* first_real = nullptr;
        std::vector<Condition> possible_parts;
        bool first_prob = true;
        for (int i = 0; i < m; ++i) {
            int b = db.members[static_cast<size_t>(i)].branch;
            if (b < 0) {
                db.guard.certain.push_back(Condition::never());
                db.prob = first_prob ? Interval(0.0) : hull(db.prob, Interval(0.0));
                first_prob = false;
                continue;
            }
            const DerivedBranch& mb = members[static_cast<size_t>(i)]->branches[static_cast<size_t>(b)];
            if (!first_real) first_real = &mb;
            possible_parts.push_back(mb.guard.possible);
            for (const Condition& c : mb.guard.certain) db.guard.certain.push_back(c);
            db.prob = first_prob ? mb.prob : hull(db.prob, mb.prob);
            first_prob = false;
        }
        if (!first_real) continue;  // group of padding only
        db.guard.possible = Condition::disjunction(possible_parts);
        if (db.guard.possible.is_never()) continue;

        for (int attr = 0; attr < n_attrs; ++attr) {
            std::vector<const AffineExpr*> exprs;
            bool all = true;
            for (int i = 0; i < m; ++i) {
                int b = db.members[static_cast<size_t>(i)].branch;
                const Effect& eff =
                    b < 0 ? first_real->effect
                          : members[static_cast<size_t>(i)]->branches[static_cast<size_t>(b)].effect;
                if (const AffineExpr* e = eff.assignment_for(attr))
                    exprs.push_back(e);
                else
                    all = false;
            }
            if (exprs.empty()) continue;
            AffineExpr h = hull_exprs(attr, exprs, all);
            if (all && h == AffineExpr::attribute(attr)) continue;
            db.effect.assign(attr, std::move(h));
        }
        out.branches.push_back(std::move(db));
    }
    return out;
}

BranchSet seq_abstract(const BranchSet& first, const BranchSet& second) {
    BranchSet out;
    for (size_t i = 0; i < first.branches.size(); ++i) {
        const DerivedBranch& a = first.branches[i];
        for (size_t j = 0; j < second.branches.size(); ++j) {
            const DerivedBranch& b = second.branches[j];

            DerivedBranch db;
            db.guard.possible = Condition::conjunction(
                a.guard.possible,
                regress(b.guard.possible, a.effect, RegressMode::Existential));
            if (db.guard.possible.is_never()) continue;
            db.guard.certain = a.guard.certain;
            for (const Condition& c : b.guard.certain)
                db.guard.certain.push_back(regress(c, a.effect, RegressMode::Universal));
            db.prob = mul(a.prob, b.prob);
            db.effect = compose(a.effect, b.effect);

            bool merged = false;
            for (DerivedBranch& existing : out.branches) {
                if (existing.guard.possible == db.guard.possible &&
                    existing.guard.certain == db.guard.certain &&
                    existing.effect == db.effect) {
                    existing.prob = add(existing.prob, db.prob);
                    merged = true;
                    break;
                }
            }
            if (!merged) out.branches.push_back(std::move(db));
        }
    }
    return out;
}

std::vector<std::vector<ActionId>> expand(const Domain& domain, ActionId action) {
    const ActionDef& def = domain.action(action);
    switch (def.kind) {
        case ActionKind::Abstract: {
            std::vector<std::vector<ActionId>> out;
            out.reserve(def.instantiations.size());
            for (ActionId inst : def.instantiations) out.push_back({inst});
            return out;
        }
        case ActionKind::Decomposable:
            return {def.subplan};
        case ActionKind::Primitive:
            break;
    }
    throw ContractError("expand: action '" + def.name + "' is primitive");
}

}  // namespace dtplan
