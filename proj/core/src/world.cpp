#include "dtplan/world.hpp"

#include "dtplan/errors.hpp"

namespace dtplan {

int AttributeSchema::add(AttributeDecl decl) {
    if (index_.count(decl.name))
        throw SchemaError("duplicate attribute '" + decl.name + "'", "attributes." + decl.name);
    int id = static_cast<int>(decls_.size());
    index_.emplace(decl.name, id);
    decls_.push_back(std::move(decl));
    return id;
}

int AttributeSchema::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
}

WorldState::WorldState(SchemaPtr schema) : schema_(std::move(schema)) {
    values_.reserve(static_cast<size_t>(schema_->size()));
    for (int i = 0; i < schema_->size(); ++i)
        values_.push_back(Interval(schema_->decl(i).default_value));
}

bool WorldState::is_concrete() const {
    for (const Interval& v : values_)
        if (!v.is_point()) return false;
    return true;
}

}  // namespace dtplan
