#pragma once

#include <cstdint>

#include "dtplan/domain.hpp"

namespace dtplan {

struct GenParams {
    std::uint64_t seed = 1;
    int depth = 3;          // maximum refinement nesting
    int branching = 3;      // maximum instantiations per abstract action
    int plans_target = 100; // exact primitive plan count of the result
};

// Deterministic random domain: the same parameters always produce the same
// domain (and, through the canonical serializer, the same bytes).  The
// refinement network is a tree whose primitive plan count equals
// plans_target exactly; all numeric content is dyadic, so projection and
// expected utilities are exact and ties are exact.  Throws ContractError for
// depth < 1 or plans_target < 2.
Domain generate_domain(const GenParams& params);

}  // namespace dtplan
