#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhgf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dangling incidence, duplicate id, malformed bounds and similar shape problems.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A multiplicity-conservation violation. `subject` names the offending vertex
/// (or the rule whose application produced the violation).
class IntegrityError : public Error {
public:
    IntegrityError(std::string subject, const std::string& what)
        : Error(what), subject_(std::move(subject)) {}
    const std::string& subject() const noexcept { return subject_; }

private:
    std::string subject_;
};

/// A rule effect would drive an edge multiplicity below zero.
class EffectError : public Error {
public:
    using Error::Error;
};

/// Grounding enumeration would exceed the configured cap.
class EnumerationLimitError : public Error {
public:
    using Error::Error;
};

/// Syntax error in a domain or trace file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Referential or invariant problem in an otherwise well-formed domain file.
class SemanticError : public Error {
public:
    SemanticError(std::string identifier, const std::string& what)
        : Error(what), identifier_(std::move(identifier)) {}
    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::string identifier_;
};

/// Malformed observation passed to the filter.
class InputError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// No hypothesis explains the observation at `step` (1-based tuple index).
class TraceInconsistency : public Error {
public:
    TraceInconsistency(std::size_t step, const std::string& what)
        : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace mhgf
