#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace capdeg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on the arguments of an operation does not hold.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// An instance would exceed a configured resource cap.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

// An internal post-verification failed; indicates a bug, never bad input.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

// An iterative method stopped at its iteration cap.
class NonConvergence : public Error {
public:
    using Error::Error;
};

// Malformed text input. Line and column are 1-based; column 0 means "whole line".
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(format(line, column, what)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& what) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) {
            out += ", column " + std::to_string(column);
        }
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace capdeg
