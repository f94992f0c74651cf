#include "dtplan/interval.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

using dtplan::Interval;

TEST_CASE("interval arithmetic on exact inputs stays exact") {
    CHECK(dtplan::add(Interval(1, 2), Interval(3, 4)) == Interval(4, 6));
    CHECK(dtplan::sub(Interval(10), Interval(5)) == Interval(5));
    CHECK(dtplan::mul(Interval(-1, 1), Interval(-1, 1)) == Interval(-1, 1));
    CHECK(dtplan::mul(Interval(0.8), Interval(0.5)) == Interval(0.4));
    CHECK(dtplan::scale(Interval(0.25, 0.75), 4.0) == Interval(1, 3));
    CHECK(dtplan::add(Interval(0.125, 0.25), Interval(0.5)) == Interval(0.625, 0.75));
}

TEST_CASE("hull and intersect") {
    CHECK(dtplan::hull(Interval(0.8), Interval(0.95)) == Interval(0.8, 0.95));
    CHECK(dtplan::hull(Interval(1, 3), Interval(2, 5)) == Interval(1, 5));
    CHECK(dtplan::hull(Interval(-2, -1), Interval(4)) == Interval(-2, 4));

    auto overlap = dtplan::intersect(Interval(0, 2), Interval(1, 5));
    REQUIRE(overlap.has_value());
    CHECK(*overlap == Interval(1, 2));
    CHECK(dtplan::intersect(Interval(0, 1), Interval(1, 2)).value() == Interval(1));
    CHECK_FALSE(dtplan::intersect(Interval(0, 1), Interval(2, 3)).has_value());
}

TEST_CASE("interval min and max") {
    CHECK(dtplan::min(Interval(0, 2), Interval(1, 5)) == Interval(0, 2));
    CHECK(dtplan::max(Interval(0, 2), Interval(1, 5)) == Interval(1, 5));
    CHECK(dtplan::min(Interval(0, 10), Interval(3, 4)) == Interval(0, 4));
    CHECK(dtplan::max(Interval(0, 10), Interval(3, 4)) == Interval(3, 10));
}

TEST_CASE("mul sign cases") {
    CHECK(dtplan::mul(Interval(-2, 3), Interval(4)) == Interval(-8, 12));
    CHECK(dtplan::mul(Interval(-2, 3), Interval(-4)) == Interval(-12, 8));
    CHECK(dtplan::mul(Interval(-2, -1), Interval(-3, -2)) == Interval(2, 6));
    CHECK(dtplan::mul(Interval(0), Interval(-5, 5)) == Interval(0));
    CHECK(dtplan::scale(Interval(1, 2), -1.0) == Interval(-2, -1));
}

namespace {

double sample_in(std::mt19937_64& rng, const Interval& iv) {
    std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
    return iv.is_point() ? iv.lo : dist(rng);
}

Interval random_interval(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    double a = dist(rng), b = dist(rng);
    if (rng() % 4 == 0) b = a;
    return a <= b ? Interval(a, b) : Interval(b, a);
}

}  // namespace

TEST_CASE("arithmetic contains every pointwise result") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        Interval a = random_interval(rng);
        Interval b = random_interval(rng);
        Interval sum = dtplan::add(a, b);
        Interval diff = dtplan::sub(a, b);
        Interval prod = dtplan::mul(a, b);
        CHECK(sum.lo <= sum.hi);
        CHECK(diff.lo <= diff.hi);
        CHECK(prod.lo <= prod.hi);
        for (int s = 0; s < 8; ++s) {
            double x = sample_in(rng, a);
            double y = sample_in(rng, b);
            CHECK(sum.contains(x + y));
            CHECK(diff.contains(x - y));
            CHECK(prod.contains(x * y));
        }
        // Endpoint products must themselves land inside.
        for (double x : {a.lo, a.hi})
            for (double y : {b.lo, b.hi}) CHECK(prod.contains(x * y));
    }
}

TEST_CASE("outward rounding widens by at most one ulp per side") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        Interval a = random_interval(rng);
        Interval b = random_interval(rng);
        Interval sum = dtplan::add(a, b);
        double naive_lo = a.lo + b.lo;
        double naive_hi = a.hi + b.hi;
        CHECK(sum.lo <= naive_lo);
        CHECK(sum.hi >= naive_hi);
        CHECK(sum.lo >= std::nextafter(naive_lo, -INFINITY));
        CHECK(sum.hi <= std::nextafter(naive_hi, INFINITY));
    }
}

TEST_CASE("dyadic arithmetic is exact") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        // Grid of eighths: sums and differences are exactly representable.
        double a = static_cast<double>(static_cast<int>(rng() % 1600) - 800) / 8.0;
        double b = static_cast<double>(static_cast<int>(rng() % 1600) - 800) / 8.0;
        CHECK(dtplan::add(Interval(a), Interval(b)) == Interval(a + b));
        CHECK(dtplan::sub(Interval(a), Interval(b)) == Interval(a - b));
        CHECK(dtplan::mul(Interval(a), Interval(b)).is_point());
    }
}

TEST_CASE("interval queries") {
    Interval iv(1, 3);
    CHECK(iv.contains(1.0));
    CHECK(iv.contains(3.0));
    CHECK_FALSE(iv.contains(3.0000001));
    CHECK(iv.contains(Interval(1.5, 2.5)));
    CHECK(iv.contains(Interval(0.999, 3.0), 1e-2));
    CHECK_FALSE(iv.contains(Interval(0.999, 3.0)));
    CHECK(iv.mid() == doctest::Approx(2.0));
    CHECK(iv.width() == doctest::Approx(2.0));
    CHECK(Interval(2, 2).is_point());
}
