#include "dtplan/expr.hpp"

#include <doctest.h>

#include <memory>

using dtplan::AffineExpr;
using dtplan::AttributeDecl;
using dtplan::AttributeSchema;
using dtplan::Interval;
using dtplan::WorldState;

namespace {

std::shared_ptr<AttributeSchema> xyz_schema() {
    auto s = std::make_shared<AttributeSchema>();
    s->add({"x"});
    s->add({"y"});
    s->add({"z"});
    return s;
}

}  // namespace

TEST_CASE("terms stay sorted, unique, nonzero") {
    AffineExpr e = AffineExpr::attribute(2);
    e.add_term(0, Interval(3.0));
    e.add_term(2, Interval(1.5));
    REQUIRE(e.terms().size() == 2);
    CHECK(e.terms()[0].attr == 0);
    CHECK(e.terms()[0].coeff == Interval(3.0));
    CHECK(e.terms()[1].attr == 2);
    CHECK(e.terms()[1].coeff == Interval(2.5));

    e.add_term(0, Interval(-3.0));  // cancels to zero and disappears
    REQUIRE(e.terms().size() == 1);
    CHECK(e.terms()[0].attr == 2);

    CHECK(e.references(2));
    CHECK(!e.references(0));
    CHECK(!e.is_constant());
    CHECK(AffineExpr::constant(Interval(4.0)).is_constant());
}

TEST_CASE("evaluation encloses the image of an interval state") {
    auto schema = xyz_schema();
    WorldState state(schema);
    state.set(0, Interval(1.0, 2.0));
    state.set(1, Interval(10.0));
    state.set(2, Interval(0.0));

    AffineExpr e = AffineExpr::constant(Interval(5.0));
    e.add_term(0, Interval(2.0));
    e.add_term(1, Interval(-0.5));
    // 5 + 2*[1,2] - 0.5*10, all dyadic: exact.
    CHECK(e.eval(state) == Interval(2.0, 4.0));

    AffineExpr wide = AffineExpr::constant(Interval(0.0));
    wide.add_term(0, Interval(-1.0, 1.0));
    CHECK(wide.eval(state) == Interval(-2.0, 2.0));
}

TEST_CASE("add_scaled accumulates a multiple of another expression") {
    AffineExpr a = AffineExpr::attribute(0);
    a.add_constant(Interval(1.0));
    AffineExpr b = AffineExpr::attribute(0);
    b.add_term(1, Interval(2.0));
    b.add_constant(Interval(3.0));

    a.add_scaled(b, Interval(2.0));
    CHECK(a.constant_part() == Interval(7.0));
    REQUIRE(a.terms().size() == 2);
    CHECK(a.terms()[0].coeff == Interval(3.0));
    CHECK(a.terms()[1].coeff == Interval(4.0));
}

TEST_CASE("substitution replaces an attribute with an expression") {
    // x + 2y with y := 3x + 1 becomes 7x + 2.
    AffineExpr e = AffineExpr::attribute(0);
    e.add_term(1, Interval(2.0));
    AffineExpr repl = AffineExpr::constant(Interval(1.0));
    repl.add_term(0, Interval(3.0));

    AffineExpr out = e.substituted(1, repl);
    CHECK(out.constant_part() == Interval(2.0));
    REQUIRE(out.terms().size() == 1);
    CHECK(out.terms()[0].attr == 0);
    CHECK(out.terms()[0].coeff == Interval(7.0));

    // Substituting an attribute the expression does not mention is identity.
    CHECK(e.substituted(2, repl) == e);
}

TEST_CASE("structural equality") {
    AffineExpr a = AffineExpr::attribute(1);
    a.add_constant(Interval(2.0));
    AffineExpr b = AffineExpr::constant(Interval(2.0));
    b.add_term(1, Interval(0.5));
    b.add_term(1, Interval(0.5));
    CHECK(a == b);
    b.add_constant(Interval(1.0));
    CHECK(!(a == b));
}
