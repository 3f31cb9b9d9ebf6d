#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subgeom {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression source. `offset()` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Identifier that is neither the expression variable nor a known function/constant.
class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(const std::string& name, std::size_t offset)
        : ParseError("unknown identifier \"" + name + "\"", offset), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation outside the domain of an expression (log of nonpositive, division by zero, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The differential of a chart is rank deficient at the requested point.
class RankError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation is violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Model parameters outside their admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input file or JSON document does not follow the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace subgeom
