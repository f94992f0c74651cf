#pragma once

#include <cmath>
#include <optional>

namespace dtplan {

// Closed interval of doubles.  All arithmetic rounds outward, so the result
// interval always contains the exact real-valued image of its inputs; when
// the exact bound is representable no widening happens (points stay points
// under exact operations such as 10 - 5).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double point) : lo(point), hi(point) {}
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    bool is_point() const { return lo == hi; }
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& other, double tol = 0.0) const {
        return lo - tol <= other.lo && other.hi <= hi + tol;
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

Interval add(Interval a, Interval b);
Interval sub(Interval a, Interval b);
Interval mul(Interval a, Interval b);
Interval scale(Interval a, double k);

// a / k for point k != 0, rounded outward.
Interval divide(Interval a, double k);

// Smallest interval containing both inputs.  Exact.
Interval hull(Interval a, Interval b);

// Empty when the inputs are disjoint.  Exact.
std::optional<Interval> intersect(Interval a, Interval b);

Interval min(Interval a, Interval b);
Interval max(Interval a, Interval b);

}  // namespace dtplan
