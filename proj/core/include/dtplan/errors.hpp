#pragma once

#include <stdexcept>
#include <string>

namespace dtplan {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text: unbalanced syntax, bad tokens, wrong JSON types.
// Carries a 1-based line/column position when one is known.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, int line, int column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}
    explicit SyntaxError(const std::string& what) : Error(what), line_(0), column_(0) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

// An identifier (action, attribute, constant) that does not resolve.
class ReferenceError : public Error {
public:
    ReferenceError(const std::string& what, std::string identifier)
        : Error(what), identifier_(std::move(identifier)) {}
    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::string identifier_;
};

// Structurally valid input whose content violates the schema (missing or
// ill-typed field).  Carries the offending field path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string field)
        : Error(what + " (field '" + field + "')"), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A model construct the algorithms cannot handle, e.g. a condition that
// cannot be regressed through an effect during sequence composition.
class UnsupportedConstructError : public Error {
public:
    using Error::Error;
};

// A semantically broken model detected at evaluation time, e.g. a chronicle
// whose state satisfies no utility guard, or an infeasible probability box.
class ModelError : public Error {
public:
    using Error::Error;
};

// Misuse of an interface, e.g. expanding a primitive action.
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace dtplan
