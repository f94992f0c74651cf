#include "dtplan/interval.hpp"

#include <algorithm>
#include <limits>

namespace dtplan {
namespace {

double next_down(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double next_up(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

// Rounded sum plus the direction of the rounding error, via the 2Sum trick:
// err is the exact difference a + b - s, representable whenever a + b does
// not overflow.  Nudging s one ulp against the sign of err yields the
// correctly directed bound; err == 0 means s is exact and stays untouched.
double add_down(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return err < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? next_up(s) : s;
}

// Same idea for products; fma exposes the exact rounding error of a * b.
double mul_down(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return err < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return err > 0 ? next_up(p) : p;
}

// q * k - x is the exact residue of q = x / k, so its sign against k tells
// whether q overshot the true quotient.
double div_down(double x, double k) {
    double q = x / k;
    double r = std::fma(q, k, -x);
    if (r == 0.0) return q;
    return ((r > 0) == (k > 0)) ? next_down(q) : q;
}

double div_up(double x, double k) {
    double q = x / k;
    double r = std::fma(q, k, -x);
    if (r == 0.0) return q;
    return ((r > 0) == (k > 0)) ? q : next_up(q);
}

}  // namespace

Interval add(Interval a, Interval b) {
    return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)};
}

Interval sub(Interval a, Interval b) {
    return {add_down(a.lo, -b.hi), add_up(a.hi, -b.lo)};
}

Interval mul(Interval a, Interval b) {
    double lo = mul_down(a.lo, b.lo);
    lo = std::min(lo, mul_down(a.lo, b.hi));
    lo = std::min(lo, mul_down(a.hi, b.lo));
    lo = std::min(lo, mul_down(a.hi, b.hi));
    double hi = mul_up(a.lo, b.lo);
    hi = std::max(hi, mul_up(a.lo, b.hi));
    hi = std::max(hi, mul_up(a.hi, b.lo));
    hi = std::max(hi, mul_up(a.hi, b.hi));
    return {lo, hi};
}

Interval scale(Interval a, double k) {
    return mul(a, Interval(k));
}

Interval divide(Interval a, double k) {
    if (k > 0) return {div_down(a.lo, k), div_up(a.hi, k)};
    return {div_down(a.hi, k), div_up(a.lo, k)};
}

Interval hull(Interval a, Interval b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::optional<Interval> intersect(Interval a, Interval b) {
    double lo = std::max(a.lo, b.lo);
    double hi = std::min(a.hi, b.hi);
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

Interval min(Interval a, Interval b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval max(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace dtplan
