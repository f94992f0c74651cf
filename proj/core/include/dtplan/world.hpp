#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dtplan/interval.hpp"

namespace dtplan {

enum class AttrKind { Numeric, Boolean };

struct AttributeDecl {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    double default_value = 0.0;
    // Declared envelope of plausible values; used by the validator to pick
    // witness points, never enforced at evaluation time.  Booleans are [0, 1].
    Interval range{0.0, 1.0};
};

// Immutable, shared by every state of a domain.  Attribute ids are dense
// indices in declaration order.
class AttributeSchema {
public:
    int add(AttributeDecl decl);
    int index_of(std::string_view name) const;  // -1 when absent
    const AttributeDecl& decl(int attr) const { return decls_[static_cast<size_t>(attr)]; }
    int size() const { return static_cast<int>(decls_.size()); }

private:
    std::vector<AttributeDecl> decls_;
    std::unordered_map<std::string, int> index_;
};

using SchemaPtr = std::shared_ptr<const AttributeSchema>;

// Interval-valued snapshot: one value per declared attribute.  A concrete
// state is one where every value is a point.
class WorldState {
public:
    WorldState() = default;
    explicit WorldState(SchemaPtr schema);

    const SchemaPtr& schema() const { return schema_; }
    const Interval& value(int attr) const { return values_[static_cast<size_t>(attr)]; }
    void set(int attr, Interval v) { values_[static_cast<size_t>(attr)] = v; }
    int size() const { return static_cast<int>(values_.size()); }

    bool is_concrete() const;

    // Bitwise equality of all values; used to merge projection branches.
    friend bool operator==(const WorldState& a, const WorldState& b) {
        return a.values_ == b.values_;
    }

    const std::vector<Interval>& values() const { return values_; }

private:
    SchemaPtr schema_;
    std::vector<Interval> values_;
};

}  // namespace dtplan
