#pragma once

// Inversion of Laplace transforms at t = 1 along a parabolic Hankel contour.
//
// The contour s(u) = mu (1 + i u)^2, u in R, wraps the branch cut on the negative
// real axis. Poles of the transform lying to the right of the contour are swept
// when the Bromwich line is deformed onto it, so their residues are added back.
// The trapezoidal step is chosen from the width of the strip of analyticity in
// the u-plane, which is bounded by the branch cut (Im u = 1) and by the
// pre-images of the poles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "seqfrac/errors.hpp"

namespace seqfrac {

using cplx = std::complex<double>;

struct ContourConfig {
    /// Candidate parabola scales mu; the one keeping poles farthest from the
    /// contour (with a mild preference for small mu) is used.
    std::vector<double> scales{0.5, 1.0, 2.0, 4.0, 8.0};
    double scale_penalty = 0.05;
    /// Target discretisation error exp(-accuracy_exponent).
    double accuracy_exponent = 40.0;
    /// Truncate where |exp(s)| < exp(-truncation_exponent).
    double truncation_exponent = 45.0;
    int max_nodes = 50000;
};

/// A simple pole of the transform F together with Res(F, location).
/// Poles with Im > 0 stand for a conjugate pair.
struct ContourPole {
    cplx location;
    cplx residue;
};

struct ContourResult {
    double value = 0.0;
    int nodes = 0;
    double scale = 0.0;
};

namespace detail {

/// Imaginary part of the pre-image u of s under s = mu (1 + i u)^2.
/// Negative: s lies right of the contour. Between 0 and 1: between contour and cut.
inline double contour_preimage_offset(cplx s, double mu)
{
    return 1.0 - std::sqrt(s / mu).real();
}

} // namespace detail

/// Computes f(1) = (1 / 2 pi i) \int_Hankel e^s F(s) ds for a transform whose
/// inverse is real, i.e. F(conj s) = conj F(s).
template <class Transform>
ContourResult invert_laplace_at_one(Transform&& transform, std::span<const ContourPole> poles,
                                    const ContourConfig& config = {})
{
    if (config.scales.empty()) throw DomainError("invert_laplace_at_one: no contour scales");

    double best_score = -1e300;
    double mu = config.scales.front();
    for (double candidate : config.scales) {
        double closest = 1.0;
        for (const auto& p : poles)
            closest = std::min(closest, std::abs(detail::contour_preimage_offset(p.location, candidate)));
        const double score = closest - config.scale_penalty * candidate;
        if (score > best_score) {
            best_score = score;
            mu = candidate;
        }
    }

    double upper = 0.9;  // room towards the branch cut
    double lower = 1.0;  // room to the right
    for (const auto& p : poles) {
        const double b = detail::contour_preimage_offset(p.location, mu);
        if (b > 0.0) upper = std::min(upper, b);
        else lower = std::min(lower, -b);
    }
    upper *= 0.9;
    lower *= 0.9;
    if (upper <= 1e-6 || lower <= 1e-6)
        throw PrecisionLossError("invert_laplace_at_one: pole lies on the integration contour");

    const double two_pi = 2.0 * std::numbers::pi;
    const double h_upper = two_pi * upper / (config.accuracy_exponent + mu * (1.0 - upper) * (1.0 - upper));
    const double h_lower = two_pi * lower / (config.accuracy_exponent + mu * (1.0 + lower) * (1.0 + lower));
    const double h = std::min(h_upper, h_lower);
    const double half_width = std::sqrt(1.0 + config.truncation_exponent / mu);
    const int count = static_cast<int>(std::ceil(half_width / h));
    if (count > config.max_nodes)
        throw ConvergenceError("invert_laplace_at_one: contour needs more than max_nodes nodes");

    auto integrand = [&](double u) {
        const cplx w(1.0, u);
        const cplx s = mu * w * w;
        return (std::exp(s) * transform(s) * w).real();
    };

    double sum = 0.5 * integrand(0.0);
    for (int k = 1; k <= count; ++k) sum += integrand(k * h);
    double value = 2.0 * mu * h / std::numbers::pi * sum;

    for (const auto& p : poles) {
        if (detail::contour_preimage_offset(p.location, mu) >= 0.0) continue;
        const cplx contribution = std::exp(p.location) * p.residue;
        value += (p.location.imag() > 0.0) ? 2.0 * contribution.real() : contribution.real();
    }
    return {value, 2 * count + 1, mu};
}

} // namespace seqfrac
