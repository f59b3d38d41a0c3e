#pragma once

#include <stdexcept>
#include <string>

namespace bifluid {

/// Base of all library errors. `exit_code()` follows the CLI contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 1; }
    virtual const char* kind() const noexcept { return "error"; }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
    const char* kind() const noexcept override { return "config_error"; }
};

/// Linear solve failure, Picard non-convergence, divergence.
class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
    const char* kind() const noexcept override { return "numerical_error"; }
};

/// A state invariant (positivity, cone membership, finiteness) was violated.
class InvariantViolation : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
    const char* kind() const noexcept override { return "invariant_violation"; }
};

/// The equation of state failed a structural certification check.
class CertificationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
    const char* kind() const noexcept override { return "certification_error"; }
};

} // namespace bifluid
