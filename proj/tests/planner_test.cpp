#include "dtplan/planner.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "dtplan/baselines.hpp"
#include "dtplan/domain_io.hpp"
#include "dtplan/errors.hpp"

using dtplan::ActionId;
using dtplan::AffineExpr;
using dtplan::ChronicleSet;
using dtplan::Condition;
using dtplan::Domain;
using dtplan::DomainBuilder;
using dtplan::Effect;
using dtplan::EUInterval;
using dtplan::Interval;
using dtplan::Plan;
using dtplan::Strategy;
using dtplan::StrategyKind;

namespace {

const std::string kDomainsDir = DTPLAN_DOMAINS_DIR;

Plan stub(int id, Interval eu, bool primitive) {
    Plan p;
    p.id = id;
    p.eu.eu = eu;
    p.is_primitive = primitive;
    return p;
}

Effect add_cost(int attr, double delta) {
    Effect e;
    AffineExpr rhs = AffineExpr::attribute(attr);
    rhs.add_constant(Interval(delta));
    e.assign(attr, rhs);
    return e;
}

// Two test procedures differing only in cost, residual utility -cost: the
// refinement can lower the plan's upper bound by the cost gap.
Domain cost_gap_domain(bool authored_deltas) {
    DomainBuilder b;
    int cost = b.add_attribute({"cost", dtplan::AttrKind::Numeric, 0.0, {0.0, 1000.0}});
    b.primitive("cheap", {{Condition::always(), Interval(1.0), add_cost(cost, 120.0)}});
    b.primitive("thorough", {{Condition::always(), Interval(1.0), add_cost(cost, 300.0)}});
    std::optional<dtplan::DeltaOverride> deltas;
    if (authored_deltas) deltas = dtplan::DeltaOverride{0.0, 180.0, {{0.0, 0.0}}};
    b.abstract("test", {"cheap", "thorough"}, std::nullopt, deltas);
    b.root("test");
    dtplan::UtilityModel u;
    u.goal.push_back({Condition::always(), AffineExpr::constant(Interval(0.0))});
    AffineExpr neg_cost;
    neg_cost.add_term(cost, Interval(-1.0));
    u.residual.push_back({Condition::always(), neg_cost});
    b.utility(std::move(u));
    return b.build();
}

std::multiset<std::vector<ActionId>> plan_steps(const std::vector<Plan>& plans) {
    std::multiset<std::vector<ActionId>> out;
    for (const Plan& p : plans) out.insert(p.steps);
    return out;
}

}  // namespace

TEST_CASE("select_plan prefers the refinable plan with the best upper bound") {
    std::vector<Plan> plans{stub(0, Interval(0.0, 10.0), true),
                            stub(1, Interval(0.0, 5.0), false),
                            stub(2, Interval(0.0, 7.0), false)};
    CHECK(dtplan::select_plan(plans) == 2);

    // Ties go to the lower id.
    std::vector<Plan> tie{stub(4, Interval(0.0, 7.0), false),
                          stub(2, Interval(0.0, 7.0), false)};
    CHECK(dtplan::select_plan(tie) == 1);

    std::vector<Plan> done{stub(0, Interval(1.0), true), stub(1, Interval(2.0), true)};
    CHECK(dtplan::select_plan(done) == done.size());
}

TEST_CASE("dominance pruning is strict") {
    std::vector<Plan> plans{stub(0, Interval(1.0, 3.0), true),
                            stub(1, Interval(4.0, 6.0), true)};
    auto pruned = dtplan::prune_dominated(plans);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned[0].id == 1);

    // Intervals touching at the boundary both survive.
    std::vector<Plan> touch{stub(0, Interval(1.0, 4.0), true),
                            stub(1, Interval(4.0, 6.0), true)};
    CHECK(dtplan::prune_dominated(touch).size() == 2);
}

TEST_CASE("step selection by position and priority") {
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    Effect bump = add_cost(x, 1.0);
    b.primitive("p1", {{Condition::always(), Interval(1.0), bump}});
    b.primitive("p2", {{Condition::always(), Interval(1.0), bump}});
    b.abstract("low", {"p1", "p2"});
    b.abstract("high", {"p1", "p2"});
    b.decomposable("both", {"low", "high"});
    b.root("both");
    dtplan::UtilityModel u;
    u.goal.push_back({Condition::always(), AffineExpr::attribute(x)});
    u.residual.push_back({Condition::always(), AffineExpr::constant(Interval(0.0))});
    b.utility(std::move(u));
    b.priority("low", 1);
    b.priority("high", 5);
    Domain d = b.build();

    Plan plan;
    plan.steps = {d.action_id("p1"), d.action_id("low"), d.action_id("high")};
    CHECK(dtplan::select_action_first(d, plan) == 1);
    CHECK(dtplan::select_action_priority(d, plan, std::nullopt) == 2);

    // An override table replaces the authored priorities entirely; unnamed
    // actions fall back to zero, so an all-zero table ties leftmost.
    std::map<std::string, int> overrides{{"low", 0}};
    CHECK(dtplan::select_action_priority(d, plan, overrides) == 1);
    std::map<std::string, int> boost{{"low", 3}};
    CHECK(dtplan::select_action_priority(d, plan, boost) == 1);
}

TEST_CASE("refinement-loss estimates on the bundled pair domain") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/test_pair.json");
    std::vector<ActionId> steps{d.action_id("test")};
    ChronicleSet set = dtplan::project(steps, d.initial(), d);
    REQUIRE(set.entries.size() == 2);

    dtplan::DeltaBounds db = dtplan::delta_functions(d, steps, 0, set.entries[0]);
    CHECK(db.goal_drop == 0.0);
    CHECK(db.residual_drop == doctest::Approx(180.0).epsilon(1e-9));
    CHECK(db.prob_shift.first == doctest::Approx(0.10).epsilon(1e-9));
    CHECK(db.prob_shift.second == doctest::Approx(0.10).epsilon(1e-9));

    std::vector<ActionId> concrete{d.action_id("test_cheap")};
    CHECK_THROWS_AS(dtplan::delta_functions(d, concrete, 0, set.entries[0]),
                    dtplan::ContractError);
}

TEST_CASE("sensitivity equals the reachable upper-bound drop") {
    for (bool authored : {false, true}) {
        CAPTURE(authored);
        Domain d = cost_gap_domain(authored);
        std::vector<ActionId> steps{d.root()};
        ChronicleSet set;
        EUInterval eu = dtplan::evaluate_plan(steps, d, set);
        CHECK(eu.eu.lo == doctest::Approx(-300.0).epsilon(1e-9));
        CHECK(eu.eu.hi == doctest::Approx(-120.0).epsilon(1e-9));
        double s = dtplan::sensitivity(d, steps, 0, eu, set);
        CHECK(s == doctest::Approx(180.0).epsilon(1e-9));
    }

    // Authored deltas on the bundled pair domain state the same gap.
    Domain d = dtplan::load_domain_file(kDomainsDir + "/test_pair.json");
    std::vector<ActionId> steps{d.action_id("test")};
    ChronicleSet set;
    EUInterval eu = dtplan::evaluate_plan(steps, d, set);
    CHECK(dtplan::sensitivity(d, steps, 0, eu, set) == doctest::Approx(180.0).epsilon(1e-9));
}

TEST_CASE("ratio rule weighs sensitivity against expansion cost") {
    CHECK(dtplan::select_by_weight({9.0, 2.0}, {3, 1}) == 0);
    CHECK(dtplan::select_by_weight({2.0, 9.0}, {1, 10}) == 0);
    CHECK(dtplan::select_by_weight({4.0, 2.0}, {2, 1}) == 0);  // tie -> leftmost
    CHECK(dtplan::select_by_weight({0.0, 1.0}, {1, 1}) == 1);
}

TEST_CASE("sensitivity selection examines a leftmost fraction") {
    DomainBuilder b;
    int cost = b.add_attribute({"cost", dtplan::AttrKind::Numeric, 0.0, {0.0, 1000.0}});
    Effect same = add_cost(cost, 10.0);
    b.primitive("a1", {{Condition::always(), Interval(1.0), same}});
    b.primitive("a2", {{Condition::always(), Interval(1.0), same}});
    b.abstract("indistinct", {"a1", "a2"});
    b.primitive("b1", {{Condition::always(), Interval(1.0), add_cost(cost, 0.0)}});
    b.primitive("b2", {{Condition::always(), Interval(1.0), add_cost(cost, 50.0)}});
    b.abstract("spread", {"b1", "b2"});
    b.decomposable("seq", {"indistinct", "spread"});
    b.root("seq");
    dtplan::UtilityModel u;
    u.goal.push_back({Condition::always(), AffineExpr::constant(Interval(0.0))});
    AffineExpr neg;
    neg.add_term(cost, Interval(-1.0));
    u.residual.push_back({Condition::always(), neg});
    b.utility(std::move(u));
    Domain d = b.build();

    Plan plan;
    plan.steps = {d.action_id("indistinct"), d.action_id("spread")};
    CHECK(dtplan::select_action_sensitivity(d, plan, 1.0) == 1);
    // A tiny fraction restricts the scan to the leftmost candidate.
    CHECK(dtplan::select_action_sensitivity(d, plan, 0.01) == 0);
}

TEST_CASE("zero expansion budget returns the evaluated root") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/tomato.json");
    dtplan::PlannerOptions opts;
    opts.budget.expansions = 0;
    dtplan::PlanResult r = dtplan::drips_plan(d, Strategy{}, opts);
    REQUIRE(r.plans.size() == 1);
    CHECK(r.plans[0].steps == std::vector<ActionId>{d.root()});
    CHECK(!r.plans[0].is_primitive);
    CHECK(r.stats.expansions == 0);
    CHECK(r.stats.plans_evaluated == 1);
}

TEST_CASE("plan_covers recognizes refinement reachability") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/tomato.json");
    ActionId root = d.root();
    ActionId truck = d.action_id("deliver_tomato");
    ActionId careful = d.action_id("deliver_careful");
    CHECK(dtplan::plan_covers(d, {root}, {truck}));
    CHECK(dtplan::plan_covers(d, {root}, {careful}));
    CHECK(dtplan::plan_covers(d, {truck}, {truck}));
    CHECK(!dtplan::plan_covers(d, {truck}, {careful}));

    Domain small = dtplan::load_domain_file(kDomainsDir + "/dvt_small.json");
    std::vector<ActionId> optimal{small.action_id("assess"), small.action_id("veno"),
                                  small.action_id("t_pos")};
    CHECK(dtplan::plan_covers(small, {small.root()}, optimal));
    std::vector<ActionId> unreachable{small.action_id("assess"), small.action_id("veno"),
                                      small.action_id("t_none")};
    CHECK(!dtplan::plan_covers(small, {small.root()}, unreachable));
    // A concrete plan cannot stand for a longer one.
    CHECK(!dtplan::plan_covers(small, optimal, {small.action_id("assess")}));
}

TEST_CASE("every frontier keeps the optimal plans derivable") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/dvt_small.json");
    std::vector<Plan> optimal = dtplan::enumerate_optimal(d);
    REQUIRE(!optimal.empty());

    for (StrategyKind kind : {StrategyKind::FirstAction, StrategyKind::FixedPriority,
                              StrategyKind::Sensitivity}) {
        Strategy strategy;
        strategy.kind = kind;
        dtplan::PlannerOptions opts;
        std::size_t events = 0;
        opts.on_expansion = [&](const dtplan::ExpansionEvent& ev) {
            ++events;
            for (const Plan& opt : optimal) {
                bool covered = false;
                for (const Plan& p : ev.frontier)
                    if (dtplan::plan_covers(d, p.steps, opt.steps)) {
                        covered = true;
                        break;
                    }
                CHECK(covered);
            }
        };
        dtplan::PlanResult r = dtplan::drips_plan(d, strategy, opts);
        CHECK(events == r.stats.expansions);
        CHECK(plan_steps(r.plans) == plan_steps(optimal));
    }
}

TEST_CASE("parallel evaluation changes no observable result") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/dvt_small.json");
    Strategy strategy;
    strategy.kind = StrategyKind::FixedPriority;
    dtplan::PlanResult serial = dtplan::drips_plan(d, strategy);
    dtplan::PlannerOptions opts;
    opts.jobs = 4;
    dtplan::PlanResult parallel = dtplan::drips_plan(d, strategy, opts);
    CHECK(plan_steps(serial.plans) == plan_steps(parallel.plans));
    CHECK(serial.stats.plans_evaluated == parallel.stats.plans_evaluated);
    CHECK(serial.stats.expansions == parallel.stats.expansions);
    CHECK(serial.stats.peak_states == parallel.stats.peak_states);
}
