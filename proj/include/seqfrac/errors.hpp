#pragma once

#include <stdexcept>
#include <string>

namespace seqfrac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Gamma function evaluated at a non-positive integer.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

/// A series did not reach the requested tolerance within its term budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Alternating-series cancellation destroyed more digits than the tolerance allows
/// and no other evaluation path applies.
class PrecisionLossError : public Error {
public:
    using Error::Error;
};

/// Fractional orders outside the region where the boundary-value problem is well posed.
class AdmissibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Parameters outside the wedge 0 < alpha < 2 beta < 2 where the C/(1+|x|) decay bound holds.
class HypothesisError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Sampled forcing too coarse for the requested convolution tolerance.
class ResolutionError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw DomainError(message);
}

} // namespace detail
} // namespace seqfrac
