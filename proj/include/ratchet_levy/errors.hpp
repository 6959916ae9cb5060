#pragma once

#include <stdexcept>
#include <string>

namespace ratchet_levy {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs that violate a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class InvalidRegion : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidStrategy : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BackendUnavailable : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A numerical routine could not reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NoRoot : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InversionFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw ValidationError(what);
}

}  // namespace detail
}  // namespace ratchet_levy
