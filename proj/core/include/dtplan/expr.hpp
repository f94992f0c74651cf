#pragma once

#include <vector>

#include "dtplan/interval.hpp"
#include "dtplan/world.hpp"

namespace dtplan {

struct AffineTerm {
    int attr;
    Interval coeff;

    friend bool operator==(const AffineTerm& a, const AffineTerm& b) {
        return a.attr == b.attr && a.coeff == b.coeff;
    }
};

// constant + sum of coeff * attribute, with interval coefficients.  Terms
// are kept sorted by attribute id, unique, and nonzero, so interval
// evaluation is the tightest outward-rounded enclosure (each attribute
// occurs once) and equality is structural.
class AffineExpr {
public:
    AffineExpr() = default;
    static AffineExpr constant(Interval c);
    static AffineExpr attribute(int attr);

    AffineExpr& add_constant(Interval c);
    AffineExpr& add_term(int attr, Interval coeff);  // merges with an existing term

    const Interval& constant_part() const { return constant_; }
    const std::vector<AffineTerm>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }
    bool references(int attr) const;

    Interval eval(const WorldState& state) const;

    // this += k * other, used when composing effects.
    AffineExpr& add_scaled(const AffineExpr& other, Interval k);

    // Replace every occurrence of attr with the given expression.
    AffineExpr substituted(int attr, const AffineExpr& replacement) const;

    friend bool operator==(const AffineExpr& a, const AffineExpr& b) {
        return a.constant_ == b.constant_ && a.terms_ == b.terms_;
    }

private:
    Interval constant_{0.0};
    std::vector<AffineTerm> terms_;
};

}  // namespace dtplan
