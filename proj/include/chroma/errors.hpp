#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chroma {

/// A configured size or budget limit would be exceeded.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input file; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message, const std::string& source = {})
        : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " + message),
          line_(line), message_(message)
    {
    }

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::string message_;
};

/// An internal invariant that a proven claim guarantees was observed to fail.
class InvariantViolation : public std::logic_error {
public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

} // namespace chroma
