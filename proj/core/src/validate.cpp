#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "dtplan/domain_io.hpp"
#include "dtplan/errors.hpp"

namespace dtplan {

namespace {

constexpr double kSumTolerance = 1e-9;

void entry(ValidationReport& report, std::string path, std::string message) {
    report.entries.push_back({std::move(path), std::move(message)});
}

// Witness points for exclusivity and exhaustiveness checks: for every
// attribute the conditions mention, the corners of its declared range, each
// condition threshold within the range, and the midpoints between
// consecutive candidates (booleans: just 0 and 1).  The cartesian product of
// those per-attribute candidates is sampled.
class WitnessGrid {
public:
    WitnessGrid(const std::vector<const Condition*>& conditions, const AttributeSchema& schema) {
        std::set<int> attr_set;
        for (const Condition* c : conditions)
            for (const auto& clause : c->clauses())
                for (const Atom& a : clause) attr_set.insert(a.attr);
        attrs_.assign(attr_set.begin(), attr_set.end());

        for (int attr : attrs_) {
            const AttributeDecl& decl = schema.decl(attr);
            std::vector<double> vals;
            if (decl.kind == AttrKind::Boolean) {
                vals = {0.0, 1.0};
            } else {
                std::set<double> base{decl.range.lo, decl.range.hi};
                for (const Condition* c : conditions)
                    for (const auto& clause : c->clauses())
                        for (const Atom& a : clause)
                            if (a.attr == attr && decl.range.contains(a.threshold))
                                base.insert(a.threshold);
                std::vector<double> sorted(base.begin(), base.end());
                for (size_t i = 0; i + 1 < sorted.size(); ++i) {
                    vals.push_back(sorted[i]);
                    vals.push_back(sorted[i] + 0.5 * (sorted[i + 1] - sorted[i]));
                }
                vals.push_back(sorted.back());
            }
            candidates_.push_back(std::move(vals));
        }
    }

    // Invokes fn for every combination, with a full-width point vector.
    template <typename Fn>
    void for_each(int n_attrs, Fn&& fn) const {
        std::vector<double> point(static_cast<size_t>(n_attrs), 0.0);
        std::vector<size_t> idx(attrs_.size(), 0);
        for (;;) {
            for (size_t i = 0; i < attrs_.size(); ++i)
                point[static_cast<size_t>(attrs_[i])] = candidates_[i][idx[i]];
            fn(point);
            size_t k = 0;
            while (k < idx.size()) {
                if (++idx[k] < candidates_[k].size()) break;
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
            if (attrs_.empty()) break;
        }
    }

    const std::vector<int>& attrs() const { return attrs_; }

private:
    std::vector<int> attrs_;
    std::vector<std::vector<double>> candidates_;
};

std::string describe_point(const std::vector<double>& point, const std::vector<int>& attrs,
                           const AttributeSchema& schema) {
    std::ostringstream os;
    for (size_t i = 0; i < attrs.size(); ++i) {
        if (i) os << ", ";
        os << schema.decl(attrs[i]).name << "=" << point[static_cast<size_t>(attrs[i])];
    }
    return attrs.empty() ? "the empty context" : os.str();
}

// Conditions define groups; exactly one group must hold at every witness
// point.
void check_partition(ValidationReport& report, const std::vector<const Condition*>& groups,
                     const AttributeSchema& schema, const std::string& path,
                     const char* group_noun) {
    WitnessGrid grid(groups, schema);
    bool reported_overlap = false, reported_gap = false;
    grid.for_each(schema.size(), [&](const std::vector<double>& point) {
        int holds = 0;
        for (const Condition* c : groups)
            if (c->eval_at(point)) ++holds;
        if (holds > 1 && !reported_overlap) {
            entry(report, path,
                  std::string(group_noun) + "s overlap at " +
                      describe_point(point, grid.attrs(), schema));
            reported_overlap = true;
        }
        if (holds == 0 && !reported_gap) {
            entry(report, path,
                  std::string("no ") + group_noun + " applies at " +
                      describe_point(point, grid.attrs(), schema));
            reported_gap = true;
        }
    });
}

void check_cycles(ValidationReport& report, const Domain& d) {
    const auto& actions = d.actions();
    std::vector<int> mark(actions.size(), 0);
    std::vector<ActionId> stack;
    bool reported = false;

    std::function<void(ActionId)> dfs = [&](ActionId id) {
        if (reported) return;
        int& m = mark[static_cast<size_t>(id)];
        if (m == 2) return;
        if (m == 1) {
            auto it = std::find(stack.begin(), stack.end(), id);
            std::ostringstream os;
            for (; it != stack.end(); ++it) os << actions[static_cast<size_t>(*it)].name << " -> ";
            os << actions[static_cast<size_t>(id)].name;
            entry(report, "network." + actions[static_cast<size_t>(id)].name,
                  "refinement cycle: " + os.str());
            reported = true;
            return;
        }
        m = 1;
        stack.push_back(id);
        const ActionDef& def = actions[static_cast<size_t>(id)];
        for (ActionId child : def.instantiations) dfs(child);
        for (ActionId child : def.subplan) dfs(child);
        stack.pop_back();
        m = 2;
    };
    for (size_t id = 0; id < actions.size(); ++id) dfs(static_cast<ActionId>(id));
}

}  // namespace

ValidationReport validate_domain(const Domain& d) {
    ValidationReport report;
    const AttributeSchema& schema = *d.schema();

    for (int i = 0; i < schema.size(); ++i) {
        const AttributeDecl& decl = schema.decl(i);
        const std::string path = "attributes." + decl.name;
        if (decl.range.lo > decl.range.hi) entry(report, path + ".range", "range has lo > hi");
        if (decl.kind == AttrKind::Boolean && decl.default_value != 0.0 &&
            decl.default_value != 1.0)
            entry(report, path + ".default", "boolean default must be 0 or 1");
        if (!decl.range.contains(d.initial().value(i)))
            entry(report, "initial." + decl.name, "initial value outside the declared range");
    }

    check_cycles(report, d);

    for (const ActionDef& def : d.actions()) {
        const std::string path = (def.kind == ActionKind::Primitive
                                      ? "actions."
                                      : def.kind == ActionKind::Abstract
                                            ? "network.abstract."
                                            : "network.decomposable.") +
                                 def.name;
        switch (def.kind) {
            case ActionKind::Primitive: {
                // Branches sharing a condition split its probability;
                // distinct conditions must partition the state space.
                std::vector<const Condition*> groups;
                std::vector<double> sums;
                for (size_t i = 0; i < def.branches.size(); ++i) {
                    const AuthoredBranch& br = def.branches[i];
                    const std::string bp = path + ".branches[" + std::to_string(i) + "]";
                    if (!br.prob.is_point())
                        entry(report, bp + ".prob", "primitive branch probability must be a point");
                    if (br.prob.lo < -kSumTolerance || br.prob.hi > 1.0 + kSumTolerance)
                        entry(report, bp + ".prob", "probability outside [0, 1]");
                    std::size_t g = 0;
                    for (; g < groups.size(); ++g)
                        if (*groups[g] == br.when) break;
                    if (g == groups.size()) {
                        groups.push_back(&br.when);
                        sums.push_back(0.0);
                    }
                    sums[g] += br.prob.mid();
                }
                for (std::size_t g = 0; g < groups.size(); ++g) {
                    if (groups[g]->is_never()) continue;  // unreachable padding group
                    if (std::abs(sums[g] - 1.0) > kSumTolerance)
                        entry(report, path,
                              "branch probabilities for condition group " + std::to_string(g) +
                                  " sum to " + std::to_string(sums[g]));
                }
                std::vector<const Condition*> live;
                for (const Condition* c : groups)
                    if (!c->is_never()) live.push_back(c);
                if (!live.empty())
                    check_partition(report, live, schema, path, "condition group");
                break;
            }
            case ActionKind::Abstract:
                if (def.instantiations.size() < 2)
                    entry(report, path, "abstract action needs at least 2 instantiations");
                break;
            case ActionKind::Decomposable:
                if (def.subplan.size() < 2)
                    entry(report, path, "decomposable action needs a subplan of at least 2 steps");
                break;
        }
    }

    if (!d.initial().is_concrete()) entry(report, "initial", "initial state must be concrete");

    const UtilityModel& u = d.utility();
    if (u.goal.empty()) entry(report, "utility.goal", "no guarded expressions");
    if (u.residual.empty()) entry(report, "utility.residual", "no guarded expressions");
    auto check_component = [&](const std::vector<GuardedExpr>& parts, const std::string& path) {
        if (parts.empty()) return;
        std::vector<const Condition*> guards;
        for (const GuardedExpr& g : parts) guards.push_back(&g.when);
        check_partition(report, guards, schema, path, "utility guard");
    };
    check_component(u.goal, "utility.goal");
    check_component(u.residual, "utility.residual");

    return report;
}

}  // namespace dtplan
