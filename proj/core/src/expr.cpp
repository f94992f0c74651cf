#include "dtplan/expr.hpp"

#include <algorithm>

namespace dtplan {

AffineExpr AffineExpr::constant(Interval c) {
    AffineExpr e;
    e.constant_ = c;
    return e;
}

AffineExpr AffineExpr::attribute(int attr) {
    AffineExpr e;
    e.terms_.push_back({attr, Interval(1.0)});
    return e;
}

AffineExpr& AffineExpr::add_constant(Interval c) {
    constant_ = add(constant_, c);
    return *this;
}

AffineExpr& AffineExpr::add_term(int attr, Interval coeff) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), attr,
                               [](const AffineTerm& t, int a) { return t.attr < a; });
    if (it != terms_.end() && it->attr == attr) {
        it->coeff = add(it->coeff, coeff);
        if (it->coeff == Interval(0.0)) terms_.erase(it);
    } else if (!(coeff == Interval(0.0))) {
        terms_.insert(it, {attr, coeff});
    }
    return *this;
}

bool AffineExpr::references(int attr) const {
    for (const AffineTerm& t : terms_)
        if (t.attr == attr) return true;
    return false;
}

Interval AffineExpr::eval(const WorldState& state) const {
    Interval acc = constant_;
    for (const AffineTerm& t : terms_)
        acc = add(acc, mul(t.coeff, state.value(t.attr)));
    return acc;
}

AffineExpr& AffineExpr::add_scaled(const AffineExpr& other, Interval k) {
    add_constant(mul(other.constant_, k));
    for (const AffineTerm& t : other.terms_)
        add_term(t.attr, mul(t.coeff, k));
    return *this;
}

AffineExpr AffineExpr::substituted(int attr, const AffineExpr& replacement) const {
    AffineExpr out;
    out.constant_ = constant_;
    for (const AffineTerm& t : terms_) {
        if (t.attr == attr)
            out.add_scaled(replacement, t.coeff);
        else
            out.add_term(t.attr, t.coeff);
    }
    return out;
}

}  // namespace dtplan
