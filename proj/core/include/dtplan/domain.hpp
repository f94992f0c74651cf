#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtplan/action.hpp"
#include "dtplan/expr.hpp"
#include "dtplan/world.hpp"

namespace dtplan {

struct GuardedExpr {
    Condition when;
    AffineExpr value;
};

// U(state) = goal(state) + k_r * residual(state), each component picked from
// a guard-partitioned list of affine expressions.
struct UtilityModel {
    std::vector<GuardedExpr> goal;
    std::vector<GuardedExpr> residual;
    double k_r = 1.0;
};

class Domain {
public:
    const SchemaPtr& schema() const { return schema_; }
    const std::vector<ActionDef>& actions() const { return actions_; }
    const ActionDef& action(ActionId id) const { return actions_[static_cast<size_t>(id)]; }
    ActionId action_id(const std::string& name) const;  // -1 when absent
    ActionId root() const { return root_; }
    const WorldState& initial() const { return initial_; }
    const UtilityModel& utility() const { return utility_; }
    int priority(ActionId id) const { return priorities_[static_cast<size_t>(id)]; }
    const std::map<std::string, double>& constants() const { return constants_; }

    bool network_is_acyclic() const { return acyclic_; }

    // Compiled description of a primitive or abstract action.  Throws
    // ModelError on a cyclic network, ContractError for decomposable ids
    // that no abstract action required (decomposable steps are projected
    // through their subplans instead).
    const BranchSet& description(ActionId id) const;
    bool has_description(ActionId id) const {
        return acyclic_ && has_description_[static_cast<size_t>(id)];
    }

    // Grouping in effect for an abstract action: the authored one, or the
    // generated default.
    const BranchGrouping& grouping(ActionId id) const;

private:
    friend class DomainBuilder;

    SchemaPtr schema_;
    std::vector<ActionDef> actions_;
    std::map<std::string, ActionId> action_index_;
    ActionId root_ = -1;
    WorldState initial_;
    UtilityModel utility_;
    std::vector<int> priorities_;
    std::map<std::string, double> constants_;
    bool acyclic_ = true;
    std::vector<BranchSet> descriptions_;       // indexed by ActionId
    std::vector<BranchGrouping> groupings_;     // indexed by ActionId
    std::vector<bool> has_description_;
};

// Single construction path for parsed, generated, and test domains.  Names
// are resolved and abstract descriptions compiled in build(); unresolved
// references throw ReferenceError, everything else is left to
// validate_domain.
class DomainBuilder {
public:
    DomainBuilder();

    int add_attribute(AttributeDecl decl);

    DomainBuilder& primitive(const std::string& name, std::vector<AuthoredBranch> branches);
    DomainBuilder& abstract(const std::string& name, std::vector<std::string> instantiations,
                            std::optional<BranchGrouping> grouping = std::nullopt,
                            std::optional<DeltaOverride> deltas = std::nullopt);
    DomainBuilder& decomposable(const std::string& name, std::vector<std::string> subplan);

    DomainBuilder& root(const std::string& name);
    DomainBuilder& initial_value(const std::string& attr, double value);
    DomainBuilder& utility(UtilityModel model);
    DomainBuilder& priority(const std::string& action, int value);
    DomainBuilder& constant(const std::string& name, double value);

    const AttributeSchema& schema() const { return *schema_; }
    int attribute_id(const std::string& name) const;

    Domain build();

private:
    std::shared_ptr<AttributeSchema> schema_;
    struct PendingAction {
        ActionDef def;
        std::vector<std::string> instantiation_names;
        std::vector<std::string> subplan_names;
    };
    std::vector<PendingAction> pending_;
    std::map<std::string, int> names_;
    std::string root_name_;
    std::map<std::string, double> initial_;
    UtilityModel utility_;
    std::map<std::string, int> priority_names_;
    std::map<std::string, double> constants_;

    int require_action(const std::string& name) const;
};

}  // namespace dtplan
