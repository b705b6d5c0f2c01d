#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "seqfrac/errors.hpp"

namespace seqfrac {

/// Largest argument for which Gamma(x) is finite in double precision.
inline constexpr double kGammaOverflowArg = 171.61447887182298;

namespace detail {

inline bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

inline bool is_nonpositive_integer(long double x)
{
    return x <= 0.0L && x == std::floor(x);
}

/// Sign of Gamma(x) for x away from the poles.
inline int gamma_sign(long double x)
{
    if (x > 0.0L) return 1;
    // Gamma alternates sign between consecutive negative integers; negative on (-1, 0).
    const long double k = std::floor(-x);
    return (static_cast<long long>(k) % 2 == 0) ? -1 : 1;
}

} // namespace detail

/// Euler gamma function.
///
/// Throws PoleError at 0, -1, -2, ... and OverflowError once the result exceeds
/// the double range (x > 171.61...).
inline double gamma_fn(double x)
{
    if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
    if (detail::is_nonpositive_integer(x))
        throw PoleError("gamma_fn: pole at x = " + std::to_string(x));
    if (x > kGammaOverflowArg)
        throw OverflowError("gamma_fn: Gamma(" + std::to_string(x) + ") overflows double");
    return std::tgamma(x);
}

/// log|Gamma(x)|; finite for arguments far beyond the gamma_fn overflow point.
inline double log_gamma(double x)
{
    if (std::isnan(x)) throw DomainError("log_gamma: NaN argument");
    if (detail::is_nonpositive_integer(x))
        throw PoleError("log_gamma: pole at x = " + std::to_string(x));
    return std::lgamma(x);
}

/// Gamma(a) / Gamma(b), formed through logarithms when either factor would overflow.
inline double gamma_ratio(double a, double b)
{
    if (detail::is_nonpositive_integer(b)) return 0.0;
    if (detail::is_nonpositive_integer(a))
        throw PoleError("gamma_ratio: numerator pole at " + std::to_string(a));
    if (a < kGammaOverflowArg && b < kGammaOverflowArg && a > -170.0 && b > -170.0)
        return std::tgamma(a) / std::tgamma(b);
    const long double mag = std::exp(std::lgamma(static_cast<long double>(a)) -
                                     std::lgamma(static_cast<long double>(b)));
    return static_cast<double>(mag) * detail::gamma_sign(a) * detail::gamma_sign(b);
}

/// 1/Gamma(x) in extended precision; zero at the poles of Gamma.
inline long double rgamma_ld(long double x)
{
    if (detail::is_nonpositive_integer(x)) return 0.0L;
    if (x > 1700.0L) return std::exp(-std::lgamma(x));
    return 1.0L / std::tgamma(x);
}

} // namespace seqfrac
