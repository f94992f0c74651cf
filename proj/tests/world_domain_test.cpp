#include "dtplan/domain.hpp"

#include <doctest.h>

#include "dtplan/domain_io.hpp"
#include "dtplan/errors.hpp"

using dtplan::AffineExpr;
using dtplan::Atom;
using dtplan::AttributeDecl;
using dtplan::AttributeSchema;
using dtplan::AttrKind;
using dtplan::AuthoredBranch;
using dtplan::Condition;
using dtplan::DomainBuilder;
using dtplan::Effect;
using dtplan::Interval;
using dtplan::Rel;
using dtplan::UtilityModel;
using dtplan::WorldState;

namespace {

AuthoredBranch sure(Effect e) { return {Condition::always(), Interval(1.0), std::move(e)}; }

Effect set_attr(int attr, double v) {
    Effect e;
    e.assign(attr, AffineExpr::constant(Interval(v)));
    return e;
}

UtilityModel flat_utility(int attr) {
    UtilityModel u;
    u.goal.push_back({Condition::always(), AffineExpr::attribute(attr)});
    u.residual.push_back({Condition::always(), AffineExpr::constant(Interval(0.0))});
    return u;
}

}  // namespace

TEST_CASE("schema indexing and world state") {
    AttributeSchema s;
    CHECK(s.add({"x"}) == 0);
    CHECK(s.add({"flag", AttrKind::Boolean, 1.0}) == 1);
    CHECK(s.size() == 2);
    CHECK(s.index_of("flag") == 1);
    CHECK(s.index_of("missing") == -1);
    CHECK(s.decl(1).kind == AttrKind::Boolean);

    auto shared = std::make_shared<AttributeSchema>(s);
    WorldState st(shared);
    CHECK(st.size() == 2);
    CHECK(st.is_concrete());
    st.set(0, Interval(1.0, 2.0));
    CHECK(!st.is_concrete());
    WorldState same(shared);
    same.set(0, Interval(1.0, 2.0));
    CHECK(st == same);
}

TEST_CASE("builder wires names, initial values, priorities, constants") {
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("set1", {sure(set_attr(x, 1.0))});
    b.primitive("set2", {sure(set_attr(x, 2.0))});
    b.abstract("pick", {"set1", "set2"});
    b.root("pick");
    b.initial_value("x", 5.0);
    b.utility(flat_utility(x));
    b.priority("pick", 4);
    b.constant("K", 2.5);

    dtplan::Domain d = b.build();
    CHECK(d.network_is_acyclic());
    CHECK(d.action_id("pick") == d.root());
    CHECK(d.action_id("nope") == -1);
    CHECK(d.initial().value(x) == Interval(5.0));
    CHECK(d.priority(d.root()) == 4);
    CHECK(d.priority(d.action_id("set1")) == 0);
    CHECK(d.constants().at("K") == 2.5);

    // Compiled description hulls the two instantiations.
    const dtplan::BranchSet& bs = d.description(d.root());
    REQUIRE(bs.branches.size() == 1);
    CHECK(bs.branches[0].prob == Interval(1.0));
    REQUIRE(bs.branches[0].effect.assignment_for(x) != nullptr);
    CHECK(bs.branches[0].effect.assignment_for(x)->constant_part() == Interval(1.0, 2.0));
}

TEST_CASE("unresolved names throw at build") {
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("p", {sure(set_attr(x, 1.0))});
    b.abstract("a", {"p", "ghost"});
    b.root("a");
    b.utility(flat_utility(x));
    CHECK_THROWS_AS(b.build(), dtplan::ReferenceError);

    DomainBuilder r;
    int y = r.add_attribute({"y"});
    r.primitive("p", {sure(set_attr(y, 1.0))});
    r.root("ghost");
    r.utility(flat_utility(y));
    CHECK_THROWS_AS(r.build(), dtplan::ReferenceError);
}

TEST_CASE("cyclic networks build but refuse descriptions") {
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("p", {sure(set_attr(x, 1.0))});
    b.abstract("a", {"b", "p"});
    b.abstract("b", {"a", "p"});
    b.root("a");
    b.utility(flat_utility(x));

    dtplan::Domain d = b.build();
    CHECK(!d.network_is_acyclic());
    CHECK_THROWS_AS(d.description(d.action_id("a")), dtplan::ModelError);

    dtplan::ValidationReport report = dtplan::validate_domain(d);
    CHECK(!report.ok());
    bool cycle_entry = false;
    for (const auto& e : report.entries)
        if (e.message.find("cycle") != std::string::npos) cycle_entry = true;
    CHECK(cycle_entry);
}

TEST_CASE("decomposable actions have no standalone description") {
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("p", {sure(set_attr(x, 1.0))});
    b.primitive("q", {sure(set_attr(x, 2.0))});
    b.decomposable("seq", {"p", "q"});
    b.root("seq");
    b.utility(flat_utility(x));

    dtplan::Domain d = b.build();
    CHECK(!d.has_description(d.action_id("seq")));
    CHECK_THROWS_AS(d.description(d.action_id("seq")), dtplan::ContractError);
    CHECK(d.has_description(d.action_id("p")));
}
