#include "dtplan/generator.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dtplan/errors.hpp"

namespace dtplan {

namespace {

// All random content is dyadic: utilities on the 1/4 grid, probabilities on
// the 1/8 grid, and at most kChanceBudget probabilistic branchings along any
// single plan.  Every expected utility is then a multiple of 2^-29 computed
// exactly in double precision, so distinct plans either tie exactly or
// differ by at least ~1.86e-9, strictly above the 1e-9 tie window used by
// the optimality oracles.
constexpr int kChanceBudget = 9;

struct Gen {
    std::mt19937_64 rng;
    DomainBuilder b;
    int branching;
    int score, cost;
    std::vector<int> flags;
    int n_prim = 0, n_abs = 0, n_seq = 0;
    std::vector<std::string> refinables;

    explicit Gen(const GenParams& params) : rng(params.seed), branching(params.branching) {
        score = b.add_attribute({"score", AttrKind::Numeric, 0.0, Interval(-1024.0, 1024.0)});
        cost = b.add_attribute({"cost", AttrKind::Numeric, 0.0, Interval(-1024.0, 1024.0)});
        for (int i = 0; i < 3; ++i)
            flags.push_back(b.add_attribute({"flag" + std::to_string(i), AttrKind::Boolean, 0.0,
                                             Interval(0.0, 1.0)}));
    }

    int pick(int n) { return n <= 1 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(n)); }
    double quarters(int lo, int hi) { return (lo + pick(hi - lo + 1)) / 4.0; }

    Effect gain(double score_add, double cost_add) {
        Effect e;
        e.assign(score, AffineExpr::attribute(score).add_constant(Interval(score_add)));
        if (cost_add != 0.0)
            e.assign(cost, AffineExpr::attribute(cost).add_constant(Interval(cost_add)));
        return e;
    }

    std::string primitive(bool allow_chance) {
        std::string name = "p" + std::to_string(n_prim++);
        std::vector<AuthoredBranch> branches;
        int style = pick(12);
        if (style >= 4 && style < 7 && !allow_chance) style = 0;
        if (style < 4) {
            branches.push_back({Condition::always(), Interval(1.0),
                                gain(quarters(1, 24), quarters(0, 12))});
        } else if (style < 7) {
            double p = (1 + pick(7)) / 8.0;
            branches.push_back({Condition::always(), Interval(p),
                                gain(quarters(4, 28), quarters(0, 8))});
            branches.push_back({Condition::always(), Interval(1.0 - p),
                                gain(quarters(0, 12), quarters(0, 8))});
        } else if (style < 9) {
            Effect e = gain(quarters(1, 16), 0.0);
            e.assign(flags[static_cast<size_t>(pick(3))],
                     AffineExpr::constant(Interval(pick(2) ? 1.0 : 0.0)));
            branches.push_back({Condition::always(), Interval(1.0), std::move(e)});
        } else if (style < 11) {
            int f = flags[static_cast<size_t>(pick(3))];
            branches.push_back({Condition::atom({f, Rel::Eq, 1.0}), Interval(1.0),
                                gain(quarters(8, 24), quarters(0, 4))});
            branches.push_back({Condition::atom({f, Rel::Eq, 0.0}), Interval(1.0),
                                gain(quarters(0, 8), quarters(0, 4))});
        } else {
            double t = quarters(0, 32);
            branches.push_back({Condition::atom({score, Rel::Ge, t}), Interval(1.0),
                                gain(quarters(4, 16), 0.0)});
            branches.push_back({Condition::atom({score, Rel::Lt, t}), Interval(1.0),
                                gain(quarters(0, 8), 0.0)});
        }
        b.primitive(name, std::move(branches));
        return name;
    }

    // `chance_left` bounds the probabilistic steps along any plan through
    // the generated action; alternatives inherit it, sequences split it.
    std::string abstract(int budget, int depth, int chance_left) {
        std::string name = "a" + std::to_string(n_abs++);
        int max_m = std::min(branching, budget);
        int m = depth == 0 ? budget : 2 + pick(max_m - 1);
        std::vector<std::string> insts;
        int left = budget;
        for (int i = 0; i < m; ++i) {
            int part = i == m - 1 ? left : 1 + pick(left - (m - i - 1));
            insts.push_back(action(part, depth == 0 ? 0 : depth - 1, chance_left));
            left -= part;
        }
        b.abstract(name, std::move(insts));
        refinables.push_back(name);
        return name;
    }

    std::string decomposable(int budget, int depth, int chance_left) {
        std::string name = "s" + std::to_string(n_seq++);
        std::vector<int> divisors;
        for (int d = 2; d <= budget; ++d)
            if (budget % d == 0) divisors.push_back(d);
        int d = divisors.empty() ? budget
                                 : divisors[static_cast<size_t>(
                                       pick(static_cast<int>(divisors.size())))];
        int cb1 = pick(chance_left + 1);
        std::vector<std::string> subplan;
        subplan.push_back(action(d, depth - 1, cb1));
        if (pick(3) == 0) subplan.push_back(primitive(false));
        subplan.push_back(action(budget / d, depth - 1, chance_left - cb1));
        b.decomposable(name, std::move(subplan));
        refinables.push_back(name);
        return name;
    }

    std::string action(int budget, int depth, int chance_left) {
        if (budget == 1) {
            if (depth > 0 && pick(4) == 0) {
                std::string name = "s" + std::to_string(n_seq++);
                int cb1 = pick(chance_left + 1);
                std::vector<std::string> subplan{primitive(cb1 >= 1),
                                                 primitive(chance_left - cb1 >= 1)};
                b.decomposable(name, std::move(subplan));
                refinables.push_back(name);
                return name;
            }
            return primitive(chance_left >= 1);
        }
        if (depth == 0) return abstract(budget, 0, chance_left);
        if (pick(100) < 40) return decomposable(budget, depth, chance_left);
        return abstract(budget, depth, chance_left);
    }
};

}  // namespace

Domain generate_domain(const GenParams& params) {
    if (params.depth < 1) throw ContractError("generator: depth must be at least 1");
    if (params.branching < 2) throw ContractError("generator: branching must be at least 2");
    if (params.plans_target < 2) throw ContractError("generator: plans_target must be at least 2");

    Gen g(params);
    std::string root = g.abstract(params.plans_target, params.depth - 1, kChanceBudget);
    g.b.root(root);

    for (const std::string& name : g.refinables)
        if (g.pick(2)) g.b.priority(name, 1 + g.pick(5));

    UtilityModel u;
    double gate = (16 + g.pick(33)) / 4.0;
    u.goal.push_back({Condition::atom({g.score, Rel::Ge, gate}),
                      AffineExpr::attribute(g.score).add_constant(Interval(2.0))});
    u.goal.push_back({Condition::atom({g.score, Rel::Lt, gate}), AffineExpr::attribute(g.score)});
    double cost_gate = (8 + g.pick(25)) / 4.0;
    AffineExpr neg_cost = AffineExpr::constant(Interval(0.0)).add_scaled(
        AffineExpr::attribute(g.cost), Interval(-1.0));
    AffineExpr neg_cost_pen = neg_cost;
    neg_cost_pen.add_constant(Interval(-1.0));
    u.residual.push_back({Condition::atom({g.cost, Rel::Le, cost_gate}), neg_cost});
    u.residual.push_back({Condition::atom({g.cost, Rel::Gt, cost_gate}), neg_cost_pen});
    u.k_r = 1.0;
    g.b.utility(std::move(u));

    return g.b.build();
}

}  // namespace dtplan
