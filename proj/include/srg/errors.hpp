#pragma once

#include <stdexcept>
#include <string>

namespace srg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a closed-form expression or operator.
struct DomainError : Error {
    using Error::Error;
};

// Feshbach gate failed: barred block not safely invertible or spectral
// parameter outside the shrunken disc.
struct GateError : Error {
    using Error::Error;
};

// Fixed-point iteration for the spectral-parameter inverse did not converge.
struct FixedPointError : Error {
    using Error::Error;
};

// Vacuum-expectation normalization of a renormalized family broke tolerance.
struct NormalizationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace srg
