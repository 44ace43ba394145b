#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nowcast {

/// Base of every error the library raises on bad data or failed computation.
/// Precondition violations on plain arguments (lag = 0, negative lambda)
/// raise std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input too short (or empty) for the requested computation.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Input without enough spread to give a meaningful answer
/// (constant series, identical loss vectors, all-duplicate neighbours).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// Feature vector of the wrong length for a model.
class ShapeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line);
    explicit ParseError(const std::string& what);

    /// 1-based line number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// Malformed response from a quote endpoint.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nowcast
