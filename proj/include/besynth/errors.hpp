#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace besynth {

/// Syntax error raised by the formula parser. Carries the byte offset into
/// the input at which the error was detected.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Raised when the parsed text mentions an atom that the partition does not
/// declare.
class UndeclaredAtomError : public ParseError {
public:
    UndeclaredAtomError(const std::string& atom, std::size_t position)
        : ParseError("undeclared atom '" + atom + "'", position), atom_(atom) {}

    const std::string& atom() const { return atom_; }

private:
    std::string atom_;
};

/// Raised when a configurable resource cap (automaton states, BDD nodes,
/// proposition count) is exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace besynth
