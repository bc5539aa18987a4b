#pragma once

#include <stdexcept>
#include <string>

namespace grs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or out-of-domain parameter. The message names the parameter.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Missing or inconsistent configuration (e.g. no phase derivative available).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A closed form was asked to evaluate a profile that violates its solvability condition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The profile detuning does not match the one induced by the ansatz.
class InconsistentProfile : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Interior zero of sin(2 * integral |w| cos(theta)).
class SingularAnsatz : public Error {
public:
    using Error::Error;
};

/// Quadrature or integrator failure.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Integrator step does not resolve the fastest time scale of the Hamiltonian.
class ResolutionError : public NumericError {
public:
    ResolutionError(const std::string& what, double suggested_step)
        : NumericError(what), suggested_step_(suggested_step) {}

    double suggested_step() const noexcept { return suggested_step_; }

private:
    double suggested_step_;
};

}  // namespace grs
