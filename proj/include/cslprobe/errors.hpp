#pragma once

#include <stdexcept>
#include <string>

namespace cslprobe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

/// Operands live on different Fock spaces.
class SpaceMismatch : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "space_mismatch"; }
};

/// A numerical procedure failed to reach its accuracy target.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

/// Configuration could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }
    const char* kind() const noexcept override { return "config"; }

private:
    std::string field_;
};

}  // namespace cslprobe
