#pragma once

#include <map>
#include <string>
#include <vector>

#include "dtplan/domain.hpp"

namespace dtplan {

// Parses a JSON domain document.  Throws SyntaxError (with line/column) for
// malformed JSON, SchemaError for missing or ill-typed fields and malformed
// expressions, ReferenceError for identifiers that do not resolve.
// Everything else (probability sums, exclusivity, cycles, ...) is left to
// validate_domain.
Domain parse_domain(const std::string& text);

// Same, with named numeric constants replaced before expressions are folded.
Domain parse_domain(const std::string& text,
                    const std::map<std::string, double>& constant_overrides);

Domain load_domain_file(const std::string& path,
                        const std::map<std::string, double>& constant_overrides = {});

// Canonical JSON document; parse_domain(serialize_domain(d)) reproduces d,
// and serialization is byte-stable.
std::string serialize_domain(const Domain& domain);

struct ValidationEntry {
    std::string path;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool ok() const { return entries.empty(); }
};

ValidationReport validate_domain(const Domain& domain);

// Affine expression text, e.g. "0.9 * ton_intruck + ton_delivered - [1,2]".
// Identifiers resolve against the schema, then `constants`.  Nonlinear terms
// are rejected.  Exposed for tests and tooling; parse errors come back as
// SchemaError mentioning `field`.
AffineExpr parse_expr(const std::string& text, const AttributeSchema& schema,
                      const std::map<std::string, double>& constants,
                      const std::string& field);

std::string expr_to_string(const AffineExpr& expr, const AttributeSchema& schema);

}  // namespace dtplan
