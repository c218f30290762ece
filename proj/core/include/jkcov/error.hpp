#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jkcov {

/// Precondition violated by the caller (bad shape, bad parameter, non-PD input).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative routine failed to converge or produced non-finite output.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (CSV data or config files). Carries the 1-based line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace jkcov
