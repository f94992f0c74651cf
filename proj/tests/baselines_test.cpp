#include "dtplan/baselines.hpp"

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "dtplan/domain_io.hpp"
#include "dtplan/generator.hpp"

using dtplan::ActionId;
using dtplan::AffineExpr;
using dtplan::Condition;
using dtplan::Domain;
using dtplan::DomainBuilder;
using dtplan::Effect;
using dtplan::Interval;
using dtplan::Plan;

namespace {

const std::string kDomainsDir = DTPLAN_DOMAINS_DIR;
const std::string kGoldenDir = DTPLAN_GOLDEN_DIR;

std::multiset<std::vector<ActionId>> step_sets(const std::vector<Plan>& plans) {
    std::multiset<std::vector<ActionId>> out;
    for (const Plan& p : plans) out.insert(p.steps);
    return out;
}

Effect set_attr(int attr, double v) {
    Effect e;
    e.assign(attr, AffineExpr::constant(Interval(v)));
    return e;
}

dtplan::UtilityModel util_on(int attr) {
    dtplan::UtilityModel u;
    u.goal.push_back({Condition::always(), AffineExpr::attribute(attr)});
    u.residual.push_back({Condition::always(), AffineExpr::constant(Interval(0.0))});
    return u;
}

}  // namespace

TEST_CASE("enumeration is leftmost-first and duplicate-free") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/tomato.json");
    auto plans = dtplan::enumerate_plans(d);
    REQUIRE(plans.size() == 2);
    CHECK(plans[0] == std::vector<ActionId>{d.action_id("deliver_tomato")});
    CHECK(plans[1] == std::vector<ActionId>{d.action_id("deliver_careful")});

    // Two abstraction paths reaching the same primitive yield one plan.
    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("p", {{Condition::always(), Interval(1.0), set_attr(x, 1.0)}});
    b.primitive("q", {{Condition::always(), Interval(1.0), set_attr(x, 2.0)}});
    b.primitive("r", {{Condition::always(), Interval(1.0), set_attr(x, 3.0)}});
    b.abstract("left", {"p", "q"});
    b.abstract("right", {"p", "r"});
    b.abstract("either", {"left", "right"});
    b.root("either");
    b.utility(util_on(x));
    Domain dup = b.build();
    auto dedup = dtplan::enumerate_plans(dup);
    REQUIRE(dedup.size() == 3);
    CHECK(dedup[0] == std::vector<ActionId>{dup.action_id("p")});
    CHECK(dedup[1] == std::vector<ActionId>{dup.action_id("q")});
    CHECK(dedup[2] == std::vector<ActionId>{dup.action_id("r")});
}

TEST_CASE("the oracle returns ties in enumeration order") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/tomato.json");
    std::vector<Plan> best = dtplan::enumerate_optimal(d);
    REQUIRE(best.size() == 1);
    CHECK(best[0].steps == std::vector<ActionId>{d.action_id("deliver_careful")});
    CHECK(best[0].id == 1);  // enumeration index
    CHECK(best[0].eu.eu.mid() == doctest::Approx(93.975).epsilon(1e-9));

    DomainBuilder b;
    int x = b.add_attribute({"x"});
    b.primitive("p", {{Condition::always(), Interval(1.0), set_attr(x, 3.0)}});
    b.primitive("q", {{Condition::always(), Interval(1.0), set_attr(x, 3.0)}});
    b.primitive("r", {{Condition::always(), Interval(1.0), set_attr(x, 1.0)}});
    b.abstract("pick", {"p", "q", "r"});
    b.root("pick");
    b.utility(util_on(x));
    Domain tied = b.build();
    std::vector<Plan> both = dtplan::enumerate_optimal(tied);
    REQUIRE(both.size() == 2);
    CHECK(both[0].id == 0);
    CHECK(both[1].id == 1);
}

TEST_CASE("branch-and-bound matches the oracle on the bundled domains") {
    for (const char* name : {"tomato", "test_pair", "dvt_small", "dvt_like"}) {
        CAPTURE(name);
        Domain d = dtplan::load_domain_file(kDomainsDir + "/" + name + ".json");
        std::vector<Plan> oracle = dtplan::enumerate_optimal(d);
        dtplan::BBResult bb = dtplan::bb_decision_tree(d);
        CHECK(step_sets(bb.plans) == step_sets(oracle));
        CHECK(bb.stats.peak_states > 0);
        CHECK(bb.stats.plans_evaluated > 0);
    }
}

TEST_CASE("branch-and-bound matches the oracle on generated domains") {
    for (std::uint64_t seed : {3, 11, 27}) {
        for (int target : {40, 90}) {
            CAPTURE(seed);
            CAPTURE(target);
            dtplan::GenParams params;
            params.seed = seed;
            params.plans_target = target;
            Domain d = dtplan::generate_domain(params);
            std::vector<Plan> oracle = dtplan::enumerate_optimal(d);
            dtplan::BBResult bb = dtplan::bb_decision_tree(d);
            CHECK(step_sets(bb.plans) == step_sets(oracle));
        }
    }
}

TEST_CASE("retained decision-tree prefixes cost more memory than refinement") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/dvt_like.json");
    dtplan::BBResult bb = dtplan::bb_decision_tree(d);
    dtplan::Strategy strategy;
    strategy.kind = dtplan::StrategyKind::FixedPriority;
    dtplan::PlanResult drips = dtplan::drips_plan(d, strategy);
    CHECK(drips.stats.peak_states < bb.stats.peak_states);
}

TEST_CASE("reference answer for the bundled diagnosis domain") {
    Domain d = dtplan::load_domain_file(kDomainsDir + "/dvt_like.json");
    std::vector<Plan> best = dtplan::enumerate_optimal(d);

    std::ostringstream got;
    got << "plans " << best.size() << "\n";
    got.precision(17);
    for (const Plan& p : best) {
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            if (i) got << " ";
            got << d.action(p.steps[i]).name;
        }
        got << " | " << p.eu.eu.lo << " " << p.eu.eu.hi << "\n";
    }

    std::ifstream in(kGoldenDir + "/dvt_like_optimal.txt");
    REQUIRE_MESSAGE(in.good(), "golden file missing");
    std::stringstream want;
    want << in.rdbuf();
    CHECK(got.str() == want.str());
}
