#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

#include "seqfrac/contour.hpp"
#include "seqfrac/errors.hpp"
#include "seqfrac/gamma.hpp"

namespace seqfrac {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kMaxSeriesTerms = 10000;

enum class EvalPath { double_series, prabhakar_series, contour };

inline std::string_view to_string(EvalPath p)
{
    switch (p) {
    case EvalPath::double_series: return "double-series";
    case EvalPath::prabhakar_series: return "prabhakar-series";
    case EvalPath::contour: return "contour";
    }
    return "unknown";
}

/// Result of a special-function evaluation.
struct EvalReport {
    double value = 0.0;
    int terms_used = 1;
    /// Bound on the truncation error of the path that produced value.
    double tail_bound = 0.0;
    EvalPath path = EvalPath::prabhakar_series;
};

namespace detail {

inline constexpr long double kEpsLd = std::numeric_limits<long double>::epsilon();

/// Neumaier-compensated accumulator in extended precision.
struct CompensatedSum {
    long double sum = 0.0L;
    long double carry = 0.0L;

    void add(long double v)
    {
        const long double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) carry += (sum - t) + v;
        else carry += (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + carry; }
};

/// Series are truncated well below tol: once past the peak the terms decay
/// super-exponentially, so the extra accuracy is nearly free.
inline long double truncation_threshold(double tol)
{
    return std::min(1e-2L * tol, 1e-18L);
}

struct SeriesOutcome {
    double value = 0.0;
    int terms = 0;
    double tail = 0.0;
    /// Estimated error from rounding in the terms themselves.
    double rounding = 0.0;
    /// Sum of the absolute values of the terms taken.
    double abs_sum = 0.0;
};

/// Sum_k (g)_k / k! * z^k / Gamma(rho k + mu), k >= 0, in extended precision.
inline SeriesOutcome prabhakar_power_series(double rho, double mu, double g, double z, double tol,
                                            int max_terms)
{
    const long double lz = z;
    long double coeff = 1.0L;  // (g)_k z^k / k!
    CompensatedSum acc;
    long double weighted_abs = 0.0L;
    long double abs_sum = 0.0L;

    auto term_at = [&](int k, long double c) { return c * rgamma_ld(static_cast<long double>(rho) * k + mu); };

    long double term = term_at(0, coeff);
    for (int k = 0; k < max_terms; ++k) {
        acc.add(term);
        weighted_abs += (k + 16) * std::fabs(term);
        abs_sum += std::fabs(term);

        coeff *= (g + k) * lz / (k + 1);
        const long double next = term_at(k + 1, coeff);
        const long double current = acc.value();
        const long double stop = truncation_threshold(tol) * (1.0L + std::fabs(current));

        if (z == 0.0 || coeff == 0.0L)
            return {static_cast<double>(current), k + 1, 0.0, 0.0, static_cast<double>(abs_sum)};
        if (term != 0.0L && std::fabs(next) < std::fabs(term)) {
            const long double ratio = std::fabs(next) / std::fabs(term);
            const long double tail = std::fabs(next) / (1.0L - ratio);
            if (tail <= stop) {
                const double rounding = static_cast<double>(kEpsLd * weighted_abs);
                return {static_cast<double>(current), k + 1, static_cast<double>(tail), rounding,
                        static_cast<double>(abs_sum)};
            }
        }
        term = next;
    }
    throw ConvergenceError("Prabhakar series did not converge within the term budget");
}

/// Upper-half-plane roots of s^rho = z (z < 0) on the principal sheet.
inline std::vector<cplx> power_roots_upper(double rho, double z)
{
    std::vector<cplx> roots;
    const double radius = std::pow(-z, 1.0 / rho);
    for (int j = 0;; ++j) {
        const double theta = (std::numbers::pi + 2.0 * std::numbers::pi * j) / rho;
        if (theta >= std::numbers::pi) break;
        roots.push_back(std::polar(radius, theta));
    }
    return roots;
}

inline double series_stop_estimate(double rho, double z)
{
    // log of the largest term of the Mittag-Leffler series is about |z|^(1/rho).
    return std::pow(std::fabs(z), 1.0 / rho);
}

} // namespace detail

/// Contour evaluation of E_{rho,mu}(z) for z < 0.
inline EvalReport mittag_leffler_contour(double rho, double mu, double z, const ContourConfig& config = {})
{
    detail::require(z < 0.0, "mittag_leffler_contour: requires z < 0");
    std::vector<ContourPole> poles;
    for (cplx s : detail::power_roots_upper(rho, z))
        poles.push_back({s, std::pow(s, 1.0 - mu) / rho});
    auto transform = [=](cplx s) {
        const cplx ls = std::log(s);
        return std::exp((rho - mu) * ls) / (std::exp(rho * ls) - z);
    };
    const ContourResult r = invert_laplace_at_one(transform, poles, config);
    return {r.value, r.nodes, std::exp(r.scale - config.accuracy_exponent), EvalPath::contour};
}

/// Contour evaluation of the Prabhakar function for z < 0 and rho <= 1, where the
/// transform s^(rho g - mu) (s^rho - z)^(-g) has no singularity off the cut.
inline EvalReport prabhakar_contour(double rho, double mu, double g, double z, const ContourConfig& config = {})
{
    detail::require(z < 0.0 && rho <= 1.0, "prabhakar_contour: requires z < 0 and rho <= 1");
    auto transform = [=](cplx s) {
        const cplx ls = std::log(s);
        return std::exp((rho * g - mu) * ls - g * std::log(std::exp(rho * ls) - z));
    };
    const ContourResult r = invert_laplace_at_one(transform, std::span<const ContourPole>{}, config);
    return {r.value, r.nodes, std::exp(r.scale - config.accuracy_exponent), EvalPath::contour};
}

/// Prabhakar (three-parameter Mittag-Leffler) function
/// E^g_{rho,mu}(z) = sum_{k>=0} (g)_k z^k / (k! Gamma(rho k + mu)).
///
/// The power series is summed in extended precision. When cancellation for
/// negative z costs more digits than tol allows, a contour path is used where one
/// is available (g = 1, or rho <= 1); otherwise PrecisionLossError is thrown.
inline EvalReport prabhakar(double rho, double mu, double g, double z, double tol = kDefaultTol)
{
    detail::require(rho > 0.0, "prabhakar: rho must be positive");
    detail::require(g > 0.0, "prabhakar: gamma must be positive");
    detail::require(tol > 0.0, "prabhakar: tol must be positive");
    if (std::isnan(z)) throw DomainError("prabhakar: NaN argument");

    const bool contour_ok = z < 0.0 && (g == 1.0 || rho <= 1.0);
    auto via_contour = [&] {
        return g == 1.0 ? mittag_leffler_contour(rho, mu, z) : prabhakar_contour(rho, mu, g, z);
    };

    // Far out on the negative axis the series is hopeless in any fixed precision.
    if (contour_ok && detail::series_stop_estimate(rho, z) > 30.0) return via_contour();

    const detail::SeriesOutcome s = detail::prabhakar_power_series(rho, mu, g, z, tol, kMaxSeriesTerms);
    if (s.rounding <= 0.5 * tol * (1.0 + std::fabs(s.value)))
        return {s.value, s.terms, s.tail, EvalPath::prabhakar_series};
    if (contour_ok) return via_contour();

    std::ostringstream os;
    os << "prabhakar: cancellation error " << s.rounding << " exceeds tolerance at z=" << z;
    throw PrecisionLossError(os.str());
}

/// Two-parameter Mittag-Leffler function E_{rho,mu}(z) = sum_{k>=0} z^k / Gamma(rho k + mu).
inline EvalReport mittag_leffler(double rho, double mu, double z, double tol = kDefaultTol)
{
    return prabhakar(rho, mu, 1.0, z, tol);
}

} // namespace seqfrac
