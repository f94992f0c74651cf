#include "dtplan/condition.hpp"

#include <algorithm>

#include "dtplan/effect.hpp"

namespace dtplan {

Truth truth_and(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::Unknown || b == Truth::Unknown) return Truth::Unknown;
    return Truth::True;
}

Truth truth_or(Truth a, Truth b) {
    if (a == Truth::True || b == Truth::True) return Truth::True;
    if (a == Truth::Unknown || b == Truth::Unknown) return Truth::Unknown;
    return Truth::False;
}

Truth Atom::eval(Interval v) const {
    switch (rel) {
        case Rel::Eq:
            if (v.lo == threshold && v.hi == threshold) return Truth::True;
            if (v.hi < threshold || v.lo > threshold) return Truth::False;
            return Truth::Unknown;
        case Rel::Le:
            if (v.hi <= threshold) return Truth::True;
            if (v.lo > threshold) return Truth::False;
            return Truth::Unknown;
        case Rel::Ge:
            if (v.lo >= threshold) return Truth::True;
            if (v.hi < threshold) return Truth::False;
            return Truth::Unknown;
        case Rel::Lt:
            if (v.hi < threshold) return Truth::True;
            if (v.lo >= threshold) return Truth::False;
            return Truth::Unknown;
        case Rel::Gt:
            if (v.lo > threshold) return Truth::True;
            if (v.hi <= threshold) return Truth::False;
            return Truth::Unknown;
    }
    return Truth::Unknown;
}

bool Atom::eval_at(double x) const {
    switch (rel) {
        case Rel::Eq: return x == threshold;
        case Rel::Le: return x <= threshold;
        case Rel::Ge: return x >= threshold;
        case Rel::Lt: return x < threshold;
        case Rel::Gt: return x > threshold;
    }
    return false;
}

namespace {

struct Bound {
    double value;
    bool strict;
};

// Canonical form of one conjunction: per attribute at most a lower bound, an
// upper bound, and an equality.  Returns nullopt when the clause is
// unsatisfiable.
std::optional<std::vector<Atom>> canonicalize_clause(const std::vector<Atom>& atoms) {
    struct PerAttr {
        std::optional<Bound> lower, upper;
        std::optional<double> eq;
        bool dead = false;
    };
    std::vector<std::pair<int, PerAttr>> attrs;

    auto slot = [&](int attr) -> PerAttr& {
        for (auto& [a, p] : attrs)
            if (a == attr) return p;
        attrs.emplace_back(attr, PerAttr{});
        return attrs.back().second;
    };

    for (const Atom& a : atoms) {
        PerAttr& p = slot(a.attr);
        switch (a.rel) {
            case Rel::Eq:
                if (p.eq && *p.eq != a.threshold) p.dead = true;
                p.eq = a.threshold;
                break;
            case Rel::Ge:
            case Rel::Gt: {
                Bound b{a.threshold, a.rel == Rel::Gt};
                if (!p.lower || b.value > p.lower->value ||
                    (b.value == p.lower->value && b.strict))
                    p.lower = b;
                break;
            }
            case Rel::Le:
            case Rel::Lt: {
                Bound b{a.threshold, a.rel == Rel::Lt};
                if (!p.upper || b.value < p.upper->value ||
                    (b.value == p.upper->value && b.strict))
                    p.upper = b;
                break;
            }
        }
    }

    std::vector<Atom> out;
    std::sort(attrs.begin(), attrs.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [attr, p] : attrs) {
        if (p.dead) return std::nullopt;
        if (p.eq) {
            if (p.lower && (*p.eq < p.lower->value || (*p.eq == p.lower->value && p.lower->strict)))
                return std::nullopt;
            if (p.upper && (*p.eq > p.upper->value || (*p.eq == p.upper->value && p.upper->strict)))
                return std::nullopt;
            out.push_back({attr, Rel::Eq, *p.eq});
            continue;
        }
        if (p.lower && p.upper) {
            if (p.lower->value > p.upper->value) return std::nullopt;
            if (p.lower->value == p.upper->value) {
                if (p.lower->strict || p.upper->strict) return std::nullopt;
                out.push_back({attr, Rel::Eq, p.lower->value});
                continue;
            }
        }
        if (p.lower)
            out.push_back({attr, p.lower->strict ? Rel::Gt : Rel::Ge, p.lower->value});
        if (p.upper)
            out.push_back({attr, p.upper->strict ? Rel::Lt : Rel::Le, p.upper->value});
    }
    return out;
}

}  // namespace

Condition Condition::always() {
    Condition c;
    c.clauses_.push_back({});
    return c;
}

Condition Condition::never() {
    return Condition{};
}

Condition Condition::atom(Atom a) {
    return clause({a});
}

Condition Condition::clause(std::vector<Atom> atoms) {
    Condition c;
    if (auto canon = canonicalize_clause(atoms)) c.clauses_.push_back(std::move(*canon));
    return c;
}

Condition Condition::disjunction(const std::vector<Condition>& parts) {
    Condition out;
    for (const Condition& p : parts) {
        if (p.is_always()) return always();
        for (const auto& cl : p.clauses_) {
            if (std::find(out.clauses_.begin(), out.clauses_.end(), cl) == out.clauses_.end())
                out.clauses_.push_back(cl);
        }
    }
    if (std::any_of(out.clauses_.begin(), out.clauses_.end(),
                    [](const auto& cl) { return cl.empty(); }))
        return always();
    return out;
}

Condition Condition::conjunction(const Condition& a, const Condition& b) {
    Condition out;
    for (const auto& ca : a.clauses_) {
        for (const auto& cb : b.clauses_) {
            std::vector<Atom> merged = ca;
            merged.insert(merged.end(), cb.begin(), cb.end());
            if (auto canon = canonicalize_clause(merged)) {
                if (canon->empty()) return always();
                if (std::find(out.clauses_.begin(), out.clauses_.end(), *canon) ==
                    out.clauses_.end())
                    out.clauses_.push_back(std::move(*canon));
            }
        }
    }
    return out;
}

Truth Condition::eval(const WorldState& state) const {
    Truth acc = Truth::False;
    for (const auto& cl : clauses_) {
        Truth clause_truth = Truth::True;
        for (const Atom& a : cl) {
            clause_truth = truth_and(clause_truth, a.eval(state.value(a.attr)));
            if (clause_truth == Truth::False) break;
        }
        acc = truth_or(acc, clause_truth);
        if (acc == Truth::True) return acc;
    }
    return acc;
}

bool Condition::eval_at(const std::vector<double>& point) const {
    for (const auto& cl : clauses_) {
        bool ok = true;
        for (const Atom& a : cl)
            if (!a.eval_at(point[static_cast<size_t>(a.attr)])) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

namespace {

Rel flip(Rel r) {
    switch (r) {
        case Rel::Le: return Rel::Ge;
        case Rel::Ge: return Rel::Le;
        case Rel::Lt: return Rel::Gt;
        case Rel::Gt: return Rel::Lt;
        case Rel::Eq: return Rel::Eq;
    }
    return r;
}

}  // namespace

Condition regress(const Condition& cond, const Effect& effect, RegressMode mode) {
    if (cond.is_never()) return Condition::never();
    const bool exist = mode == RegressMode::Existential;
    std::vector<Condition> out_parts;
    for (const auto& cl : cond.clauses()) {
        std::vector<Atom> kept;
        bool clause_dead = false;
        for (const Atom& a : cl) {
            const AffineExpr* rhs = effect.assignment_for(a.attr);
            if (!rhs) {
                kept.push_back(a);
                continue;
            }
            if (rhs->is_constant()) {
                switch (a.eval(rhs->constant_part())) {
                    case Truth::True: break;  // holds for every covered value
                    case Truth::False: clause_dead = true; break;
                    case Truth::Unknown:
                        // Some covered values satisfy the atom, some do not.
                        if (!exist) clause_dead = true;
                        break;
                }
                if (clause_dead) break;
                continue;
            }
            if (rhs->terms().size() != 1 || !rhs->terms()[0].coeff.is_point() ||
                rhs->terms()[0].coeff.lo == 0.0) {
                // Preimage not expressible as atoms; widen safely.
                if (!exist) clause_dead = true;
                if (clause_dead) break;
                continue;
            }
            const AffineTerm& t = rhs->terms()[0];
            double k = t.coeff.lo;
            // Solving k*x + c rel threshold for x: the threshold becomes an
            // interval once c is one; pick its permissive or restrictive end.
            Interval q = divide(sub(Interval(a.threshold), rhs->constant_part()), k);
            Rel r = k < 0 ? flip(a.rel) : a.rel;
            switch (r) {
                case Rel::Ge:
                case Rel::Gt:
                    kept.push_back({t.attr, r, exist ? q.lo : q.hi});
                    break;
                case Rel::Le:
                case Rel::Lt:
                    kept.push_back({t.attr, r, exist ? q.hi : q.lo});
                    break;
                case Rel::Eq:
                    if (q.is_point()) {
                        kept.push_back({t.attr, Rel::Eq, q.lo});
                    } else if (exist) {
                        kept.push_back({t.attr, Rel::Ge, q.lo});
                        kept.push_back({t.attr, Rel::Le, q.hi});
                    } else {
                        clause_dead = true;
                    }
                    break;
            }
            if (clause_dead) break;
        }
        if (!clause_dead) out_parts.push_back(Condition::clause(std::move(kept)));
    }
    return Condition::disjunction(out_parts);
}

}  // namespace dtplan
