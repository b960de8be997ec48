#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cir {

// Base type for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model parameters must be strictly positive (b, sigma, x0).
struct NonPositiveParameter : Error {
    explicit NonPositiveParameter(const std::string& field, double value)
        : Error("parameter '" + field + "' must be a positive finite real, got " +
                std::to_string(value)),
          field(field) {}
    std::string field;
};

// The marginal law collapses to a point mass at t = 0.
struct DegenerateTime : Error {
    using Error::Error;
};

// Barriers must satisfy 0 < alpha < x0 < beta.
struct OrderingViolation : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested accuracy.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Scale-function evaluations are refused very close to the origin, where the
// integrand blows up faster than we are willing to integrate.
struct DomainTooSmall : Error {
    using Error::Error;
};

// Raised when a scheme is asked to run outside the regime 2b >= sigma^2,
// n > 2T that guarantees strictly positive states.
struct PositivityNotGuaranteed : Error {
    using Error::Error;
};

// In unchecked mode a state can go negative; the step that would take a
// square root of it raises this instead of producing NaN.
struct NegativeStateEncountered : Error {
    explicit NegativeStateEncountered(std::size_t step, double state)
        : Error("state " + std::to_string(state) + " is negative at step " +
                std::to_string(step)),
          step(step) {}
    std::size_t step;
};

// Two paths that are supposed to share a grid or a noise sequence do not.
struct GridMismatch : Error {
    using Error::Error;
};

// A product price factor 1 + Q_k dropped to zero or below.
struct NonPositiveFactor : Error {
    explicit NonPositiveFactor(std::size_t step, double factor)
        : Error("price factor " + std::to_string(factor) + " at step " +
                std::to_string(step) + " is not positive"),
          step(step) {}
    std::size_t step;
};

// Step-process evaluation outside [0, T].
struct OutOfDomain : Error {
    using Error::Error;
};

// A series evaluation ran past its term budget.
struct SeriesNotConverged : Error {
    using Error::Error;
};

// Experiment or CLI configuration failed validation.
struct ConfigInvalid : Error {
    using Error::Error;
};

// Result serialization failure (unwritable file, non-finite value, ...).
struct IoFailure : Error {
    using Error::Error;
};

}  // namespace cir
