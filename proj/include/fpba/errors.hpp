#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fpba {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input text that does not parse. line is 1-based, 0 when unknown.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
    std::size_t line;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

// A property the constructions are supposed to guarantee did not hold.
struct PropertyViolation : Error {
    using Error::Error;
};

}  // namespace fpba
