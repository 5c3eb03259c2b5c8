#pragma once

#include <stdexcept>
#include <string>

namespace navrw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in a TBox, query or graph document.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column)
        : Error(format(message, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        if (line <= 0) return message;
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        return out + ": " + message;
    }

    int line_;
    int column_;
};

/// An axiom or query uses a construct outside the supported fragment.
class FragmentViolation : public Error {
public:
    using Error::Error;
};

/// A configured resource budget was exhausted.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// A path expression has no Cypher translation.
class UnsupportedPath : public Error {
public:
    using Error::Error;
};

/// Structural problem in graph data (dangling edge, duplicate id, ...).
class GraphError : public Error {
public:
    using Error::Error;
};

}  // namespace navrw
