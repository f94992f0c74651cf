#pragma once

#include <optional>
#include <vector>

#include "dtplan/world.hpp"

namespace dtplan {

class Effect;

// Three-valued truth over interval states.
enum class Truth : unsigned char { False, True, Unknown };

Truth truth_and(Truth a, Truth b);
Truth truth_or(Truth a, Truth b);

enum class Rel : unsigned char { Eq, Le, Ge, Lt, Gt };

struct Atom {
    int attr;
    Rel rel;
    double threshold;

    // True iff every point of v satisfies the atom, False iff none does.
    Truth eval(Interval v) const;
    bool eval_at(double x) const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Disjunctive normal form: any-of clauses, each an all-of list of atoms.
// No clauses means the constant False; a single empty clause means True.
// Clauses are canonicalized (per-attribute bounds merged, contradictions
// dropped), so structural equality is meaningful.
class Condition {
public:
    Condition() = default;  // never()

    static Condition always();
    static Condition never();
    static Condition atom(Atom a);
    static Condition clause(std::vector<Atom> atoms);

    static Condition disjunction(const std::vector<Condition>& parts);
    static Condition conjunction(const Condition& a, const Condition& b);

    bool is_always() const { return clauses_.size() == 1 && clauses_[0].empty(); }
    bool is_never() const { return clauses_.empty(); }

    Truth eval(const WorldState& state) const;
    bool eval_at(const std::vector<double>& point) const;

    const std::vector<std::vector<Atom>>& clauses() const { return clauses_; }

    friend bool operator==(const Condition&, const Condition&) = default;

private:
    std::vector<std::vector<Atom>> clauses_;
};

// Whether interval-valued assignments regress permissively (the condition
// could hold for some value the interval covers) or restrictively (it holds
// for every covered value).  On point effects the modes coincide and the
// rewrite is exact.
enum class RegressMode { Existential, Universal };

// Rewrites cond into a condition on the state before the effect.  Exact for
// point assignments; interval constants move into the atom thresholds with
// outward rounding.  Preimages the atom language cannot express (interval
// coefficients, multi-attribute right-hand sides) widen in the mode's safe
// direction: existentially the atom is dropped, universally its clause is.
Condition regress(const Condition& cond, const Effect& effect,
                  RegressMode mode = RegressMode::Existential);

}  // namespace dtplan
