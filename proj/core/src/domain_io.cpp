#include "dtplan/domain_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dtplan/errors.hpp"

namespace dtplan {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void syntax_error_at(const std::string& text, size_t byte, const std::string& what) {
    int line = 1, column = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw SyntaxError(what, line, column);
}

std::string fmt_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

// ---- expression text ----------------------------------------------------

struct ExprParser {
    const std::string& text;
    const AttributeSchema& schema;
    const std::map<std::string, double>& constants;
    const std::string& field;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError("bad expression '" + text + "': " + what + " at offset " +
                          std::to_string(pos),
                          field);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto [end, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc{}) fail("expected a number");
        pos = static_cast<size_t>(end - text.data());
        return v;
    }

    AffineExpr parse() {
        AffineExpr e = sum();
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input");
        return e;
    }

    AffineExpr sum() {
        AffineExpr acc = term();
        for (;;) {
            if (eat('+')) {
                acc.add_scaled(term(), Interval(1.0));
            } else if (eat('-')) {
                acc.add_scaled(term(), Interval(-1.0));
            } else {
                return acc;
            }
        }
    }

    AffineExpr term() {
        AffineExpr acc = factor();
        while (eat('*')) {
            AffineExpr rhs = factor();
            if (acc.is_constant()) {
                Interval k = acc.constant_part();
                acc = AffineExpr::constant(Interval(0.0)).add_scaled(rhs, k);
            } else if (rhs.is_constant()) {
                Interval k = rhs.constant_part();
                acc = AffineExpr::constant(Interval(0.0)).add_scaled(acc, k);
            } else {
                fail("nonlinear product of two attribute expressions");
            }
        }
        return acc;
    }

    AffineExpr factor() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            AffineExpr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (c == '[') {
            ++pos;
            double lo = number();
            if (!eat(',')) fail("expected ',' in interval literal");
            double hi = number();
            if (!eat(']')) fail("expected ']'");
            if (lo > hi) fail("interval literal with lo > hi");
            return AffineExpr::constant(Interval(lo, hi));
        }
        if (c == '-') {
            ++pos;
            return AffineExpr::constant(Interval(0.0)).add_scaled(factor(), Interval(-1.0));
        }
        if ((c >= '0' && c <= '9') || c == '.') return AffineExpr::constant(Interval(number()));
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   ((text[pos] >= 'a' && text[pos] <= 'z') ||
                    (text[pos] >= 'A' && text[pos] <= 'Z') ||
                    (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            int attr = schema.index_of(name);
            if (attr >= 0) return AffineExpr::attribute(attr);
            auto it = constants.find(name);
            if (it != constants.end()) return AffineExpr::constant(Interval(it->second));
            throw ReferenceError("unknown identifier '" + name + "' in expression '" + text +
                                 "' (field '" + field + "')",
                                 name);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

AffineExpr parse_expr(const std::string& text, const AttributeSchema& schema,
                      const std::map<std::string, double>& constants, const std::string& field) {
    ExprParser p{text, schema, constants, field};
    return p.parse();
}

std::string expr_to_string(const AffineExpr& expr, const AttributeSchema& schema) {
    std::vector<std::string> pieces;
    auto interval_str = [](Interval v) {
        return v.is_point() ? fmt_double(v.lo)
                            : "[" + fmt_double(v.lo) + "," + fmt_double(v.hi) + "]";
    };
    const Interval& c = expr.constant_part();
    if (!(c == Interval(0.0)) || expr.terms().empty()) pieces.push_back(interval_str(c));
    for (const AffineTerm& t : expr.terms()) {
        const std::string name = schema.decl(t.attr).name;
        if (t.coeff == Interval(1.0))
            pieces.push_back(name);
        else if (t.coeff == Interval(-1.0))
            pieces.push_back("-" + name);
        else
            pieces.push_back(interval_str(t.coeff) + " * " + name);
    }
    std::string out;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i == 0) {
            out = pieces[i];
        } else if (pieces[i][0] == '-') {
            out += " - " + pieces[i].substr(1);
        } else {
            out += " + " + pieces[i];
        }
    }
    return out;
}

// ---- JSON helpers ---------------------------------------------------------

namespace {

[[noreturn]] void schema_fail(const std::string& field, const std::string& what) {
    throw SchemaError(what, field);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema_fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_fail(path + "." + key, "missing required field");
    return *it;
}

double require_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_fail(path, "expected a number");
    return v.get<double>();
}

std::string require_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_fail(path, "expected a string");
    return v.get<std::string>();
}

Interval parse_prob(const json& v, const std::string& path) {
    if (v.is_number()) return Interval(v.get<double>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        Interval p{v[0].get<double>(), v[1].get<double>()};
        if (p.lo > p.hi) schema_fail(path, "probability interval with lo > hi");
        return p;
    }
    schema_fail(path, "expected a probability (number or [lo, hi])");
}

Rel parse_rel(const std::string& s, const std::string& path) {
    if (s == "=") return Rel::Eq;
    if (s == "<=") return Rel::Le;
    if (s == ">=") return Rel::Ge;
    if (s == "<") return Rel::Lt;
    if (s == ">") return Rel::Gt;
    schema_fail(path, "unknown relation '" + s + "'");
}

std::string rel_to_string(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Le: return "<=";
        case Rel::Ge: return ">=";
        case Rel::Lt: return "<";
        case Rel::Gt: return ">";
    }
    return "?";
}

Atom parse_atom(const json& v, const AttributeSchema& schema, const std::string& path) {
    std::string name = require_string(require(v, "attr", path), path + ".attr");
    int attr = schema.index_of(name);
    if (attr < 0) throw ReferenceError("unknown attribute '" + name + "' (field '" + path + "')", name);
    Rel rel = parse_rel(require_string(require(v, "rel", path), path + ".rel"), path + ".rel");
    double value = require_number(require(v, "value", path), path + ".value");
    return Atom{attr, rel, value};
}

Condition parse_condition(const json& v, const AttributeSchema& schema, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>() ? Condition::always() : Condition::never();
    if (!v.is_object()) schema_fail(path, "expected a condition (true, false, or object)");
    if (v.contains("any")) {
        const json& parts = v["any"];
        if (!parts.is_array()) schema_fail(path + ".any", "expected an array");
        std::vector<Condition> out;
        for (size_t i = 0; i < parts.size(); ++i)
            out.push_back(
                parse_condition(parts[i], schema, path + ".any[" + std::to_string(i) + "]"));
        return Condition::disjunction(out);
    }
    if (v.contains("all")) {
        const json& parts = v["all"];
        if (!parts.is_array()) schema_fail(path + ".all", "expected an array");
        std::vector<Atom> atoms;
        for (size_t i = 0; i < parts.size(); ++i)
            atoms.push_back(
                parse_atom(parts[i], schema, path + ".all[" + std::to_string(i) + "]"));
        return Condition::clause(std::move(atoms));
    }
    return Condition::atom(parse_atom(v, schema, path));
}

json atom_to_json(const Atom& a, const AttributeSchema& schema) {
    json out;
    out["attr"] = schema.decl(a.attr).name;
    out["rel"] = rel_to_string(a.rel);
    out["value"] = a.threshold;
    return out;
}

json condition_to_json(const Condition& c, const AttributeSchema& schema) {
    if (c.is_always()) return true;
    if (c.is_never()) return false;
    auto clause_to_json = [&](const std::vector<Atom>& clause) -> json {
        if (clause.size() == 1) return atom_to_json(clause[0], schema);
        json all = json::array();
        for (const Atom& a : clause) all.push_back(atom_to_json(a, schema));
        return json{{"all", all}};
    };
    if (c.clauses().size() == 1) return clause_to_json(c.clauses()[0]);
    json any = json::array();
    for (const auto& clause : c.clauses()) any.push_back(clause_to_json(clause));
    return json{{"any", any}};
}

Effect parse_effects(const json& v, const AttributeSchema& schema,
                     const std::map<std::string, double>& constants, const std::string& path) {
    if (!v.is_object()) schema_fail(path, "expected an object of attribute assignments");
    Effect out;
    for (const auto& [name, rhs] : v.items()) {
        int attr = schema.index_of(name);
        if (attr < 0)
            throw ReferenceError("unknown attribute '" + name + "' (field '" + path + "')", name);
        out.assign(attr,
                   parse_expr(require_string(rhs, path + "." + name), schema, constants,
                              path + "." + name));
    }
    return out;
}

json effects_to_json(const Effect& e, const AttributeSchema& schema) {
    json out = json::object();
    for (const Assignment& a : e.assignments())
        out[schema.decl(a.attr).name] = expr_to_string(a.value, schema);
    return out;
}

std::vector<GuardedExpr> parse_guarded(const json& v, const AttributeSchema& schema,
                                       const std::map<std::string, double>& constants,
                                       const std::string& path) {
    if (!v.is_array()) schema_fail(path, "expected an array of guarded expressions");
    std::vector<GuardedExpr> out;
    for (size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        GuardedExpr g;
        g.when = parse_condition(require(v[i], "when", p), schema, p + ".when");
        g.value = parse_expr(require_string(require(v[i], "value", p), p + ".value"), schema,
                             constants, p + ".value");
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace

Domain parse_domain(const std::string& text) {
    return parse_domain(text, {});
}

Domain parse_domain(const std::string& text,
                    const std::map<std::string, double>& constant_overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        syntax_error_at(text, e.byte > 0 ? e.byte - 1 : 0, "malformed JSON document");
    }
    if (!doc.is_object()) throw SyntaxError("domain document must be a JSON object");

    DomainBuilder b;

    // attributes
    const json& attrs = require(doc, "attributes", "attributes");
    if (!attrs.is_object() || attrs.empty())
        schema_fail("attributes", "expected a non-empty object");
    for (const auto& [name, spec] : attrs.items()) {
        const std::string path = "attributes." + name;
        AttributeDecl decl;
        decl.name = name;
        std::string kind = require_string(require(spec, "kind", path), path + ".kind");
        if (kind == "numeric")
            decl.kind = AttrKind::Numeric;
        else if (kind == "boolean")
            decl.kind = AttrKind::Boolean;
        else
            schema_fail(path + ".kind", "expected 'numeric' or 'boolean'");
        if (spec.contains("default"))
            decl.default_value = require_number(spec["default"], path + ".default");
        if (decl.kind == AttrKind::Boolean) {
            decl.range = Interval(0.0, 1.0);
        } else if (spec.contains("range")) {
            const json& r = spec["range"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
                schema_fail(path + ".range", "expected [lo, hi]");
            decl.range = Interval(r[0].get<double>(), r[1].get<double>());
        } else {
            decl.range = Interval(-1e9, 1e9);
        }
        b.add_attribute(std::move(decl));
    }

    // constants (folded into expressions)
    std::map<std::string, double> constants;
    const json& util = require(doc, "utility", "utility");
    if (util.contains("constants")) {
        const json& cs = util["constants"];
        if (!cs.is_object()) schema_fail("utility.constants", "expected an object");
        for (const auto& [name, v] : cs.items())
            constants[name] = require_number(v, "utility.constants." + name);
    }
    for (const auto& [name, v] : constant_overrides) {
        if (!constants.count(name))
            throw ReferenceError("override for undeclared constant '" + name + "'", name);
        constants[name] = v;
    }
    for (const auto& [name, v] : constants) b.constant(name, v);

    // actions (primitive)
    const json& actions = require(doc, "actions", "actions");
    if (!actions.is_object()) schema_fail("actions", "expected an object");
    for (const auto& [name, spec] : actions.items()) {
        const std::string path = "actions." + name;
        const json& branches = require(spec, "branches", path);
        if (!branches.is_array() || branches.empty())
            schema_fail(path + ".branches", "expected a non-empty array");
        std::vector<AuthoredBranch> parsed;
        for (size_t i = 0; i < branches.size(); ++i) {
            const std::string bp = path + ".branches[" + std::to_string(i) + "]";
            AuthoredBranch br;
            br.when = parse_condition(require(branches[i], "when", bp), b.schema(), bp + ".when");
            br.prob = parse_prob(require(branches[i], "prob", bp), bp + ".prob");
            br.effect = parse_effects(require(branches[i], "effects", bp), b.schema(), constants,
                                      bp + ".effects");
            parsed.push_back(std::move(br));
        }
        b.primitive(name, std::move(parsed));
    }

    // network
    const json& network = require(doc, "network", "network");
    if (network.contains("abstract")) {
        const json& abs = network["abstract"];
        if (!abs.is_object()) schema_fail("network.abstract", "expected an object");
        for (const auto& [name, spec] : abs.items()) {
            const std::string path = "network.abstract." + name;
            const json& insts = require(spec, "instantiations", path);
            if (!insts.is_array()) schema_fail(path + ".instantiations", "expected an array");
            std::vector<std::string> inst_names;
            for (const json& v : insts)
                inst_names.push_back(require_string(v, path + ".instantiations"));

            std::optional<BranchGrouping> grouping;
            if (spec.contains("groups")) {
                const json& groups = spec["groups"];
                if (!groups.is_array()) schema_fail(path + ".groups", "expected an array");
                BranchGrouping g;
                for (size_t gi = 0; gi < groups.size(); ++gi) {
                    const std::string gp = path + ".groups[" + std::to_string(gi) + "]";
                    if (!groups[gi].is_array()) schema_fail(gp, "expected an array of [member, branch]");
                    std::vector<std::pair<int, int>> group;
                    for (const json& entry : groups[gi]) {
                        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                            !entry[1].is_number_integer())
                            schema_fail(gp, "expected [instantiation name, branch index]");
                        std::string member = entry[0].get<std::string>();
                        auto it = std::find(inst_names.begin(), inst_names.end(), member);
                        if (it == inst_names.end())
                            throw ReferenceError("'" + member + "' is not an instantiation of '" +
                                                 name + "' (field '" + gp + "')",
                                                 member);
                        group.emplace_back(static_cast<int>(it - inst_names.begin()),
                                           entry[1].get<int>());
                    }
                    g.groups.push_back(std::move(group));
                }
                grouping = std::move(g);
            }

            std::optional<DeltaOverride> deltas;
            if (spec.contains("deltas")) {
                const json& dv = spec["deltas"];
                if (!dv.is_object()) schema_fail(path + ".deltas", "expected an object");
                DeltaOverride d;
                if (dv.contains("goal"))
                    d.goal = require_number(dv["goal"], path + ".deltas.goal");
                if (dv.contains("residual"))
                    d.residual = require_number(dv["residual"], path + ".deltas.residual");
                if (dv.contains("prob")) {
                    const json& pv = dv["prob"];
                    if (!pv.is_array() || pv.size() != 2 || !pv[0].is_number() ||
                        !pv[1].is_number())
                        schema_fail(path + ".deltas.prob", "expected [upper drop, lower rise]");
                    d.prob = {pv[0].get<double>(), pv[1].get<double>()};
                }
                deltas = d;
            }
            b.abstract(name, std::move(inst_names), std::move(grouping), std::move(deltas));
        }
    }
    if (network.contains("decomposable")) {
        const json& dec = network["decomposable"];
        if (!dec.is_object()) schema_fail("network.decomposable", "expected an object");
        for (const auto& [name, spec] : dec.items()) {
            const std::string path = "network.decomposable." + name;
            const json& sub = require(spec, "subplan", path);
            if (!sub.is_array()) schema_fail(path + ".subplan", "expected an array");
            std::vector<std::string> subplan;
            for (const json& v : sub) subplan.push_back(require_string(v, path + ".subplan"));
            b.decomposable(name, std::move(subplan));
        }
    }
    b.root(require_string(require(network, "root", "network"), "network.root"));

    // initial
    const json& initial = require(doc, "initial", "initial");
    if (!initial.is_object()) schema_fail("initial", "expected an object");
    for (const auto& [name, v] : initial.items())
        b.initial_value(name, require_number(v, "initial." + name));

    // utility
    UtilityModel model;
    model.goal = parse_guarded(require(util, "goal", "utility"), b.schema(), constants,
                               "utility.goal");
    model.residual = parse_guarded(require(util, "residual", "utility"), b.schema(), constants,
                                   "utility.residual");
    model.k_r = require_number(require(util, "k_r", "utility"), "utility.k_r");
    b.utility(std::move(model));

    // priorities
    if (doc.contains("priorities")) {
        const json& prio = doc["priorities"];
        if (!prio.is_object()) schema_fail("priorities", "expected an object");
        for (const auto& [name, v] : prio.items()) {
            if (!v.is_number_integer()) schema_fail("priorities." + name, "expected an integer");
            b.priority(name, v.get<int>());
        }
    }

    return b.build();
}

Domain load_domain_file(const std::string& path,
                        const std::map<std::string, double>& constant_overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open domain file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_domain(ss.str(), constant_overrides);
}

std::string serialize_domain(const Domain& domain) {
    const AttributeSchema& schema = *domain.schema();
    json doc;

    json attrs = json::object();
    for (int i = 0; i < schema.size(); ++i) {
        const AttributeDecl& d = schema.decl(i);
        json a;
        a["kind"] = d.kind == AttrKind::Boolean ? "boolean" : "numeric";
        a["default"] = d.default_value;
        if (d.kind != AttrKind::Boolean) a["range"] = json::array({d.range.lo, d.range.hi});
        attrs[d.name] = std::move(a);
    }
    doc["attributes"] = std::move(attrs);

    json actions = json::object();
    for (const ActionDef& def : domain.actions()) {
        if (def.kind != ActionKind::Primitive) continue;
        json branches = json::array();
        for (const AuthoredBranch& br : def.branches) {
            json b;
            b["when"] = condition_to_json(br.when, schema);
            b["prob"] = br.prob.is_point() ? json(br.prob.lo)
                                           : json::array({br.prob.lo, br.prob.hi});
            b["effects"] = effects_to_json(br.effect, schema);
            branches.push_back(std::move(b));
        }
        actions[def.name] = json{{"branches", std::move(branches)}};
    }
    doc["actions"] = std::move(actions);

    json network;
    network["root"] = domain.action(domain.root()).name;
    json abstract = json::object();
    json decomposable = json::object();
    for (const ActionDef& def : domain.actions()) {
        if (def.kind == ActionKind::Abstract) {
            json a;
            json insts = json::array();
            for (ActionId id : def.instantiations) insts.push_back(domain.action(id).name);
            a["instantiations"] = std::move(insts);
            if (def.grouping) {
                json groups = json::array();
                for (const auto& group : def.grouping->groups) {
                    json g = json::array();
                    for (const auto& [member, branch] : group)
                        g.push_back(json::array(
                            {domain.action(def.instantiations[static_cast<size_t>(member)]).name,
                             branch}));
                    groups.push_back(std::move(g));
                }
                a["groups"] = std::move(groups);
            }
            if (def.deltas) {
                json d = json::object();
                if (def.deltas->goal) d["goal"] = *def.deltas->goal;
                if (def.deltas->residual) d["residual"] = *def.deltas->residual;
                if (def.deltas->prob)
                    d["prob"] = json::array({def.deltas->prob->first, def.deltas->prob->second});
                a["deltas"] = std::move(d);
            }
            abstract[def.name] = std::move(a);
        } else if (def.kind == ActionKind::Decomposable) {
            json sub = json::array();
            for (ActionId id : def.subplan) sub.push_back(domain.action(id).name);
            decomposable[def.name] = json{{"subplan", std::move(sub)}};
        }
    }
    if (!abstract.empty()) network["abstract"] = std::move(abstract);
    if (!decomposable.empty()) network["decomposable"] = std::move(decomposable);
    doc["network"] = std::move(network);

    json initial = json::object();
    for (int i = 0; i < schema.size(); ++i)
        initial[schema.decl(i).name] = domain.initial().value(i).lo;
    doc["initial"] = std::move(initial);

    json util;
    if (!domain.constants().empty()) {
        json cs = json::object();
        for (const auto& [name, v] : domain.constants()) cs[name] = v;
        util["constants"] = std::move(cs);
    }
    auto guarded_to_json = [&](const std::vector<GuardedExpr>& parts) {
        json out = json::array();
        for (const GuardedExpr& g : parts)
            out.push_back(json{{"when", condition_to_json(g.when, schema)},
                               {"value", expr_to_string(g.value, schema)}});
        return out;
    };
    util["goal"] = guarded_to_json(domain.utility().goal);
    util["residual"] = guarded_to_json(domain.utility().residual);
    util["k_r"] = domain.utility().k_r;
    doc["utility"] = std::move(util);

    // Name-sorted so the bytes do not depend on action creation order.
    std::vector<std::pair<std::string, int>> prio_entries;
    for (const ActionDef& def : domain.actions()) {
        int p = domain.priority(domain.action_id(def.name));
        if (p != 0) prio_entries.emplace_back(def.name, p);
    }
    std::sort(prio_entries.begin(), prio_entries.end());
    json priorities = json::object();
    for (const auto& [name, p] : prio_entries) priorities[name] = p;
    if (!priorities.empty()) doc["priorities"] = std::move(priorities);

    return doc.dump(2) + "\n";
}

}  // namespace dtplan
