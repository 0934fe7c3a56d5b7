#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcpm {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input bytes (XML syntax, broken gzip stream, unterminated CSV quote).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed input whose content violates the event model.
class ValidationError : public Error {
public:
    using Error::Error;
};

class EmptyLogError : public Error {
public:
    using Error::Error;
};

/// Bad column mapping, unknown encoding/model name, non-ascending grid and the like.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A precondition on the data set was not met (e.g. no resource long enough for a prefix length).
class DataError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public Error {
public:
    using Error::Error;
};

}  // namespace rcpm
