#pragma once

#include <vector>

#include "dtplan/expr.hpp"
#include "dtplan/world.hpp"

namespace dtplan {

struct Assignment {
    int attr;
    AffineExpr value;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Simultaneous assignments, at most one per attribute, evaluated against the
// pre-state; unassigned attributes persist.
class Effect {
public:
    Effect() = default;

    Effect& assign(int attr, AffineExpr value);
    const std::vector<Assignment>& assignments() const { return assigns_; }
    const AffineExpr* assignment_for(int attr) const;

    WorldState apply(const WorldState& state) const;

    friend bool operator==(const Effect&, const Effect&) = default;

private:
    std::vector<Assignment> assigns_;  // sorted by attr, unique
};

// Effect equivalent to running first, then second.  Second's right-hand
// sides are rewritten against the pre-state by substituting first's
// assignments; first's assignments to attributes second leaves alone are
// carried over.
Effect compose(const Effect& first, const Effect& second);

}  // namespace dtplan
