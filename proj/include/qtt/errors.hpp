// errors.hpp — Exception types shared by the transport library

#pragma once

#include <stdexcept>
#include <string>

namespace qtt {

// Quadrature or transform failed to meet its contract (non-decay, non-finite values).
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters outside the validity regime of a scheme (e.g. Redfield with E_- <= 0).
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Steady-state null space is not one-dimensional, or a closed form has a zero denominator.
struct DegenerateSteadyState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical or numerical parameter; `key` names the offending field.
struct ValidationError : std::invalid_argument {
    ValidationError(std::string key_, const std::string& what)
        : std::invalid_argument(key_ + ": " + what), key(std::move(key_)) {}
    std::string key;
};

} // namespace qtt
