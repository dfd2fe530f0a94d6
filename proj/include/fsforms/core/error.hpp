#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsforms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sum of terms of different bidegree, or a degree/dimension mismatch.
class DegreeError : public Error {
public:
    using Error::Error;
};

/// Adjoint-valued operand where a scalar was required, or vice versa.
class ValuednessError : public Error {
public:
    using Error::Error;
};

class DeclarationError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          message_(what),
          line_(line),
          column_(column) {}

    const std::string& message() const { return message_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

}  // namespace fsforms
