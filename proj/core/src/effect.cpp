#include "dtplan/effect.hpp"

#include <algorithm>

#include "dtplan/errors.hpp"

namespace dtplan {

Effect& Effect::assign(int attr, AffineExpr value) {
    auto it = std::lower_bound(assigns_.begin(), assigns_.end(), attr,
                               [](const Assignment& a, int x) { return a.attr < x; });
    if (it != assigns_.end() && it->attr == attr)
        throw ContractError("duplicate assignment to attribute id " + std::to_string(attr));
    assigns_.insert(it, {attr, std::move(value)});
    return *this;
}

const AffineExpr* Effect::assignment_for(int attr) const {
    auto it = std::lower_bound(assigns_.begin(), assigns_.end(), attr,
                               [](const Assignment& a, int x) { return a.attr < x; });
    if (it != assigns_.end() && it->attr == attr) return &it->value;
    return nullptr;
}

WorldState Effect::apply(const WorldState& state) const {
    WorldState out = state;
    for (const Assignment& a : assigns_)
        out.set(a.attr, a.value.eval(state));
    return out;
}

Effect compose(const Effect& first, const Effect& second) {
    Effect out;
    for (const Assignment& a : second.assignments()) {
        // Simultaneous substitution: every term of second's right-hand side
        // refers to the state after first, so swap in first's expression for
        // assigned attributes in one pass (first's expressions are already in
        // terms of the pre-state and must not be rewritten again).
        AffineExpr rewritten = AffineExpr::constant(a.value.constant_part());
        for (const AffineTerm& t : a.value.terms()) {
            if (const AffineExpr* rhs = first.assignment_for(t.attr))
                rewritten.add_scaled(*rhs, t.coeff);
            else
                rewritten.add_term(t.attr, t.coeff);
        }
        out.assign(a.attr, std::move(rewritten));
    }
    for (const Assignment& f : first.assignments())
        if (!second.assignment_for(f.attr)) out.assign(f.attr, f.value);
    return out;
}

}  // namespace dtplan
