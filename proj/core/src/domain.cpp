#include "dtplan/domain.hpp"

#include <algorithm>

#include "dtplan/abstraction.hpp"
#include "dtplan/errors.hpp"

namespace dtplan {

ActionId Domain::action_id(const std::string& name) const {
    auto it = action_index_.find(name);
    return it == action_index_.end() ? -1 : it->second;
}

const BranchSet& Domain::description(ActionId id) const {
    if (!acyclic_) throw ModelError("cyclic refinement network has no action descriptions");
    if (!has_description_[static_cast<size_t>(id)])
        throw ContractError("action '" + action(id).name +
                            "' has no materialized description; project its subplan instead");
    return descriptions_[static_cast<size_t>(id)];
}

const BranchGrouping& Domain::grouping(ActionId id) const {
    if (action(id).kind != ActionKind::Abstract)
        throw ContractError("action '" + action(id).name + "' is not abstract");
    return groupings_[static_cast<size_t>(id)];
}

DomainBuilder::DomainBuilder() : schema_(std::make_shared<AttributeSchema>()) {}

int DomainBuilder::add_attribute(AttributeDecl decl) {
    return schema_->add(std::move(decl));
}

int DomainBuilder::attribute_id(const std::string& name) const {
    return schema_->index_of(name);
}

namespace {

void add_action(std::map<std::string, int>& names, const std::string& name, int id) {
    if (!names.emplace(name, id).second)
        throw SchemaError("duplicate action '" + name + "'", "actions." + name);
}

}  // namespace

DomainBuilder& DomainBuilder::primitive(const std::string& name,
                                        std::vector<AuthoredBranch> branches) {
    add_action(names_, name, static_cast<int>(pending_.size()));
    PendingAction p;
    p.def.name = name;
    p.def.kind = ActionKind::Primitive;
    p.def.branches = std::move(branches);
    pending_.push_back(std::move(p));
    return *this;
}

DomainBuilder& DomainBuilder::abstract(const std::string& name,
                                       std::vector<std::string> instantiations,
                                       std::optional<BranchGrouping> grouping,
                                       std::optional<DeltaOverride> deltas) {
    add_action(names_, name, static_cast<int>(pending_.size()));
    PendingAction p;
    p.def.name = name;
    p.def.kind = ActionKind::Abstract;
    p.def.grouping = std::move(grouping);
    p.def.deltas = std::move(deltas);
    p.instantiation_names = std::move(instantiations);
    pending_.push_back(std::move(p));
    return *this;
}

DomainBuilder& DomainBuilder::decomposable(const std::string& name,
                                           std::vector<std::string> subplan) {
    add_action(names_, name, static_cast<int>(pending_.size()));
    PendingAction p;
    p.def.name = name;
    p.def.kind = ActionKind::Decomposable;
    p.subplan_names = std::move(subplan);
    pending_.push_back(std::move(p));
    return *this;
}

DomainBuilder& DomainBuilder::root(const std::string& name) {
    root_name_ = name;
    return *this;
}

DomainBuilder& DomainBuilder::initial_value(const std::string& attr, double value) {
    initial_[attr] = value;
    return *this;
}

DomainBuilder& DomainBuilder::utility(UtilityModel model) {
    utility_ = std::move(model);
    return *this;
}

DomainBuilder& DomainBuilder::priority(const std::string& action, int value) {
    priority_names_[action] = value;
    return *this;
}

DomainBuilder& DomainBuilder::constant(const std::string& name, double value) {
    constants_[name] = value;
    return *this;
}

int DomainBuilder::require_action(const std::string& name) const {
    auto it = names_.find(name);
    if (it == names_.end())
        throw ReferenceError("unknown action '" + name + "'", name);
    return it->second;
}

namespace {

// Postorder over refinement edges; returns false on a cycle.
bool visit(const std::vector<ActionDef>& actions, ActionId id, std::vector<int>& mark,
           std::vector<ActionId>& order) {
    int& m = mark[static_cast<size_t>(id)];
    if (m == 1) return false;
    if (m == 2) return true;
    m = 1;
    const ActionDef& def = actions[static_cast<size_t>(id)];
    for (ActionId child : def.instantiations)
        if (!visit(actions, child, mark, order)) return false;
    for (ActionId child : def.subplan)
        if (!visit(actions, child, mark, order)) return false;
    m = 2;
    order.push_back(id);
    return true;
}

}  // namespace

Domain DomainBuilder::build() {
    Domain d;
    d.schema_ = schema_;

    for (PendingAction& p : pending_) {
        for (const std::string& n : p.instantiation_names) {
            ActionId id = require_action(n);
            if (std::find(p.def.instantiations.begin(), p.def.instantiations.end(), id) !=
                p.def.instantiations.end())
                throw SchemaError("duplicate instantiation '" + n + "'",
                                  "network.abstract." + p.def.name);
            p.def.instantiations.push_back(id);
        }
        for (const std::string& n : p.subplan_names) p.def.subplan.push_back(require_action(n));
        d.actions_.push_back(std::move(p.def));
    }
    for (const auto& [name, id] : names_) d.action_index_.emplace(name, id);

    if (root_name_.empty()) throw SchemaError("missing root action", "network.root");
    d.root_ = require_action(root_name_);

    d.initial_ = WorldState(schema_);
    for (const auto& [attr, value] : initial_) {
        int id = schema_->index_of(attr);
        if (id < 0) throw ReferenceError("unknown attribute '" + attr + "'", attr);
        d.initial_.set(id, Interval(value));
    }

    d.utility_ = std::move(utility_);
    d.constants_ = std::move(constants_);

    d.priorities_.assign(d.actions_.size(), 0);
    for (const auto& [name, value] : priority_names_)
        d.priorities_[static_cast<size_t>(require_action(name))] = value;

    // Compile descriptions bottom-up.  Decomposable actions are materialized
    // only where an abstract action needs them as instantiations; problems a
    // validator should report (cycles, bad groupings) leave descriptions
    // absent rather than failing the build.
    std::vector<int> mark(d.actions_.size(), 0);
    std::vector<ActionId> order;
    for (size_t id = 0; id < d.actions_.size(); ++id)
        if (!visit(d.actions_, static_cast<ActionId>(id), mark, order)) {
            d.acyclic_ = false;
            break;
        }

    d.descriptions_.resize(d.actions_.size());
    d.groupings_.resize(d.actions_.size());
    d.has_description_.assign(d.actions_.size(), false);
    if (!d.acyclic_) return d;

    std::vector<bool> needed(d.actions_.size(), false);
    for (ActionId id : order) {
        const ActionDef& def = d.actions_[static_cast<size_t>(id)];
        if (def.kind != ActionKind::Decomposable) needed[static_cast<size_t>(id)] = true;
    }
    // Closure: instantiations of abstract actions, then subplans of needed
    // decomposables (order is postorder, so walk it from the top).
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const ActionDef& def = d.actions_[static_cast<size_t>(*it)];
        if (def.kind == ActionKind::Abstract)
            for (ActionId child : def.instantiations) needed[static_cast<size_t>(child)] = true;
        if (def.kind == ActionKind::Decomposable && needed[static_cast<size_t>(*it)])
            for (ActionId child : def.subplan) needed[static_cast<size_t>(child)] = true;
    }

    const int n_attrs = schema_->size();
    for (ActionId id : order) {
        if (!needed[static_cast<size_t>(id)]) continue;
        const ActionDef& def = d.actions_[static_cast<size_t>(id)];
        BranchSet desc;
        switch (def.kind) {
            case ActionKind::Primitive:
                for (const AuthoredBranch& b : def.branches) {
                    DerivedBranch db;
                    db.guard = BranchGuard::of(b.when);
                    db.prob = b.prob;
                    db.effect = b.effect;
                    desc.branches.push_back(std::move(db));
                }
                break;
            case ActionKind::Abstract: {
                std::vector<const BranchSet*> members;
                members.reserve(def.instantiations.size());
                for (ActionId child : def.instantiations)
                    members.push_back(&d.descriptions_[static_cast<size_t>(child)]);
                BranchGrouping grouping =
                    def.grouping ? *def.grouping : default_grouping(members, n_attrs);
                for (size_t gi = 0; gi < grouping.groups.size(); ++gi) {
                    for (const auto& [member, branch] : grouping.groups[gi]) {
                        if (member < 0 || member >= static_cast<int>(members.size()) ||
                            branch < 0 ||
                            branch >= static_cast<int>(members[static_cast<size_t>(member)]
                                                           ->branches.size()))
                            throw SchemaError(
                                "grouping entry out of range in group " + std::to_string(gi),
                                "network.abstract." + def.name + ".groups");
                    }
                }
                desc = inter_abstract(members, grouping, n_attrs);
                d.groupings_[static_cast<size_t>(id)] = std::move(grouping);
                break;
            }
            case ActionKind::Decomposable: {
                bool first = true;
                for (ActionId child : def.subplan) {
                    const BranchSet& step = d.descriptions_[static_cast<size_t>(child)];
                    desc = first ? step : seq_abstract(desc, step);
                    first = false;
                }
                break;
            }
        }
        d.descriptions_[static_cast<size_t>(id)] = std::move(desc);
        d.has_description_[static_cast<size_t>(id)] = true;
    }
    return d;
}

}  // namespace dtplan
