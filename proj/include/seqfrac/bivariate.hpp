#pragma once

// Bivariate Mittag-Leffler function
//
//   E2(x, y) = sum_{m,n>=0} (g1)_{a1 m + b1 n} (g2)_{a2 m} x^m y^n
//              / ( Gamma(d1 + a3 m + b2 n) Gamma(d2 + a4 m) Gamma(d3 + b3 n) )
//
// and the one-parameter family that solves the sequential Cauchy problem,
//
//   E2[d](x, y) = sum_{m,n} (m+n)!/(m! n!) x^m y^n / Gamma(d + (alpha+beta) m + alpha n),
//
// which is E2 with g1 = a1 = b1 = g2 = d2 = a4 = d3 = b3 = 1, a2 = 0,
// a3 = alpha + beta, b2 = alpha and d1 = d.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "seqfrac/contour.hpp"
#include "seqfrac/errors.hpp"
#include "seqfrac/gamma.hpp"
#include "seqfrac/mittag_leffler.hpp"
#include "seqfrac/orders.hpp"

namespace seqfrac {

/// The twelve shape parameters of E2.
struct BivParams {
    double gamma1 = 1.0, alpha1 = 1.0, beta1 = 1.0;
    double gamma2 = 1.0, alpha2 = 0.0;
    double delta1 = 1.0, alpha3 = 1.0, beta2 = 1.0;
    double delta2 = 1.0, alpha4 = 1.0;
    double delta3 = 1.0, beta3 = 1.0;

    /// Convergence margins; the double series converges everywhere iff both are positive.
    double margin_x() const { return alpha3 + alpha4 - alpha1 - alpha2; }
    double margin_y() const { return beta2 + beta3 - beta1; }

    void validate() const
    {
        if (!(alpha1 > 0 && alpha3 > 0 && alpha4 > 0 && beta1 > 0 && beta2 > 0 && beta3 > 0 && alpha2 >= 0))
            throw DomainError("BivParams: exponents alpha1,alpha3,alpha4,beta1,beta2,beta3 must be positive "
                              "and alpha2 non-negative");
        if (!(gamma1 > 0 && gamma2 > 0 && delta1 > 0 && delta2 > 0 && delta3 > 0))
            throw DomainError("BivParams: gamma1, gamma2, delta1, delta2, delta3 must be positive");
        if (!(std::min(margin_x(), margin_y()) > 0.0)) {
            std::ostringstream os;
            os << "BivParams: convergence gate failed, min(margin_x, margin_y) = "
               << std::min(margin_x(), margin_y()) << " <= 0";
            throw DomainError(os.str());
        }
    }

    /// True when the parameters are those of the solver kernel family.
    bool is_solver_kernel() const
    {
        return gamma1 == 1 && alpha1 == 1 && beta1 == 1 && gamma2 == 1 && alpha2 == 0 && delta2 == 1 &&
               alpha4 == 1 && delta3 == 1 && beta3 == 1;
    }
};

/// E2[delta1] with x-order alpha+beta and y-order alpha.
struct SolverKernelParams {
    FractionalOrders orders;
    double delta1 = 1.0;

    double x_order() const { return orders.alpha + orders.beta; }
    double y_order() const { return orders.alpha; }

    SolverKernelParams with_delta(double d) const { return {orders, d}; }

    BivParams biv() const
    {
        BivParams p;
        p.delta1 = delta1;
        p.alpha3 = x_order();
        p.beta2 = y_order();
        return p;
    }
};

struct BivOptions {
    double tol = kDefaultTol;
    /// Double series is tried first when |x| + |y| does not exceed this.
    double series_radius = 40.0;
    int max_terms = kMaxSeriesTerms;
    ContourConfig contour{};
};

namespace detail {

struct DoubleSeriesOutcome {
    double value = 0.0;
    int terms = 0;
    double tail = 0.0;
    double rounding = 0.0;
};

/// Diagonal-ordered summation (by m + n). Stops once a diagonal past the peak has
/// absolute sum below the stopping threshold; that diagonal's absolute sum is the
/// reported tail bound.
template <class DiagonalTerms>
DoubleSeriesOutcome sum_by_diagonals(DiagonalTerms&& diagonal, double tol, int max_terms)
{
    CompensatedSum acc;
    long double weighted_abs = 0.0L;
    long double previous_abs = -1.0L;
    int terms = 0;
    std::vector<long double> buffer;
    for (int d = 0; d < max_terms; ++d) {
        buffer.clear();
        diagonal(d, buffer);
        long double diag_abs = 0.0L;
        for (long double t : buffer) diag_abs += std::fabs(t);

        const long double stop = truncation_threshold(tol) * (1.0L + std::fabs(acc.value()));
        if (d > 0 && diag_abs <= stop && diag_abs <= previous_abs) {
            return {static_cast<double>(acc.value()), std::max(terms, 1), static_cast<double>(diag_abs),
                    static_cast<double>(kEpsLd * weighted_abs)};
        }
        for (long double t : buffer) {
            acc.add(t);
            weighted_abs += (d + 16) * std::fabs(t);
            ++terms;
        }
        previous_abs = diag_abs;
    }
    throw ConvergenceError("bivariate Mittag-Leffler series exceeded its term budget");
}

inline DoubleSeriesOutcome kernel_double_series(const SolverKernelParams& k, double x, double y, double tol,
                                                int max_terms)
{
    const long double p = k.x_order(), q = k.y_order(), delta = k.delta1;
    std::vector<long double> px{1.0L}, py{1.0L}, binom;
    auto diagonal = [&](int d, std::vector<long double>& out) {
        if (d > 0) {
            px.push_back(px.back() * x);
            py.push_back(py.back() * y);
        }
        if (x == 0.0 && y == 0.0 && d > 0) return;
        long double c = 1.0L;  // C(d, m)
        for (int m = 0; m <= d; ++m) {
            const int n = d - m;
            const long double coeff = c * px[m] * py[n];
            if (coeff != 0.0L) out.push_back(coeff * rgamma_ld(delta + p * m + q * n));
            c = c * (d - m) / (m + 1);
        }
    };
    return sum_by_diagonals(diagonal, tol, max_terms);
}

inline DoubleSeriesOutcome general_double_series(const BivParams& b, double x, double y, double tol,
                                                 int max_terms)
{
    const long double lx = x == 0.0 ? 0.0L : std::log(std::fabs(static_cast<long double>(x)));
    const long double ly = y == 0.0 ? 0.0L : std::log(std::fabs(static_cast<long double>(y)));
    using ld = long double;
    const ld g1 = b.gamma1, a1 = b.alpha1, b1 = b.beta1, g2 = b.gamma2, a2 = b.alpha2;
    const ld d1 = b.delta1, a3 = b.alpha3, b2 = b.beta2, d2 = b.delta2, a4 = b.alpha4, d3 = b.delta3, b3 = b.beta3;
    const ld lg1 = std::lgamma(g1);
    const ld lg2 = std::lgamma(g2);

    std::vector<long double> row_m, row_n;  // per-index lgamma tables
    auto table_m = [&](int m) {
        while (static_cast<int>(row_m.size()) <= m) {
            const long double mm = row_m.size();
            row_m.push_back(std::lgamma(g2 + a2 * mm) - lg2 - std::lgamma(d2 + a4 * mm));
        }
        return row_m[m];
    };
    auto table_n = [&](int n) {
        while (static_cast<int>(row_n.size()) <= n) {
            const long double nn = row_n.size();
            row_n.push_back(-std::lgamma(d3 + b3 * nn));
        }
        return row_n[n];
    };

    long double magnitude_weight = 0.0L;
    auto diagonal = [&](int d, std::vector<long double>& out) {
        for (int m = 0; m <= d; ++m) {
            const int n = d - m;
            if ((m > 0 && x == 0.0) || (n > 0 && y == 0.0)) continue;
            const ld a = std::lgamma(g1 + a1 * m + b1 * n) - lg1;
            const ld c = std::lgamma(d1 + a3 * m + b2 * n);
            const long double log_mag = a + table_m(m) + table_n(n) + m * lx + n * ly - c;
            long double t = std::exp(log_mag);
            if ((m % 2 == 1 && x < 0) != (n % 2 == 1 && y < 0)) t = -t;
            magnitude_weight = std::max(magnitude_weight, std::fabs(a) + std::fabs(c) + std::fabs(m * lx) +
                                                              std::fabs(n * ly) + std::fabs(table_m(m)) +
                                                              std::fabs(table_n(n)));
            out.push_back(t);
        }
    };
    DoubleSeriesOutcome r = sum_by_diagonals(diagonal, tol, max_terms);
    // Terms built from exp(log) carry relative error ~ eps * |log components|.
    r.rounding *= static_cast<double>(1.0L + magnitude_weight / 16.0L);
    return r;
}

/// Upper-half-plane zero of s^p - y s^(p-q) - x on the principal sheet, if any,
/// tracked by continuation in y from the closed-form root at y = 0.
inline std::optional<cplx> kernel_pole(double p, double q, double x, double y)
{
    if (!(x < 0.0) || p <= 1.0) return std::nullopt;
    cplx w((std::log(-x)) / p, std::numbers::pi / p);  // log of the root
    constexpr int steps = 40;
    for (int k = 1; k <= steps; ++k) {
        const double yk = y * k / steps;
        for (int it = 0; it < 60; ++it) {
            const cplx ep = std::exp(p * w), eq = std::exp((p - q) * w);
            const cplx g = ep - yk * eq - x;
            const cplx dg = p * ep - yk * (p - q) * eq;
            const cplx dw = g / dg;
            w -= dw;
            if (std::abs(dw) < 1e-15 * (1.0 + std::abs(w))) break;
        }
        if (!(w.imag() > 0.0 && w.imag() < std::numbers::pi)) return std::nullopt;
    }
    return std::exp(w);
}

} // namespace detail

/// Contour evaluation of the kernel family for x <= 0, y <= 0.
inline EvalReport biv_ml_contour(const SolverKernelParams& k, double x, double y, const ContourConfig& config = {})
{
    detail::require(x <= 0.0 && y <= 0.0, "biv_ml_contour: requires x <= 0 and y <= 0");
    const double p = k.x_order(), q = k.y_order(), d = k.delta1;
    std::vector<ContourPole> poles;
    if (auto s = detail::kernel_pole(p, q, x, y)) {
        const cplx ls = std::log(*s);
        const cplx dg = p * std::exp((p - 1.0) * ls) - y * (p - q) * std::exp((p - q - 1.0) * ls);
        poles.push_back({*s, std::exp((p - d) * ls) / dg});
    }
    auto transform = [=](cplx s) {
        const cplx ls = std::log(s);
        return std::exp((p - d) * ls) / (std::exp(p * ls) - y * std::exp((p - q) * ls) - x);
    };
    const ContourResult r = invert_laplace_at_one(transform, poles, config);
    return {r.value, r.nodes, std::exp(r.scale - config.accuracy_exponent), EvalPath::contour};
}

/// Row-wise evaluation E2[d](x, y) = sum_n y^n E^{n+1}_{alpha+beta, d + alpha n}(x), each
/// row a Prabhakar power series. Independent of the diagonal double-series route.
inline EvalReport biv_ml_prabhakar_rows(const SolverKernelParams& k, double x, double y,
                                        double tol = kDefaultTol, int max_terms = kMaxSeriesTerms)
{
    detail::require(tol > 0.0, "biv_ml_prabhakar_rows: tol must be positive");
    const double p = k.x_order(), q = k.y_order();
    detail::CompensatedSum acc;
    long double rounding = 0.0L, previous = -1.0L, power = 1.0L;
    int terms = 0;
    for (int n = 0; n < max_terms; ++n) {
        const double row_tol = 1e-3 * tol / std::max(1.0L, std::fabs(power));
        const detail::SeriesOutcome row =
            detail::prabhakar_power_series(p, k.delta1 + q * n, n + 1.0, x, row_tol, max_terms);
        // |y|^n times the row's absolute sum bounds every later row as well once decreasing.
        const long double envelope = std::fabs(power) * row.abs_sum;
        const long double stop = detail::truncation_threshold(tol) * (1.0L + std::fabs(acc.value()));
        if (n > 0 && envelope <= stop && envelope <= previous) {
            if (rounding > 0.5L * tol * (1.0L + std::fabs(acc.value())))
                throw PrecisionLossError("biv_ml_prabhakar_rows: cancellation exceeds tolerance");
            return {static_cast<double>(acc.value()), std::max(terms, 1), static_cast<double>(envelope),
                    EvalPath::prabhakar_series};
        }
        terms += row.terms;
        acc.add(power * row.value);
        rounding += std::fabs(power) * (row.rounding + row.tail);
        previous = envelope;
        if (y == 0.0) return {static_cast<double>(acc.value()), terms, 0.0, EvalPath::prabhakar_series};
        power *= y;
    }
    throw ConvergenceError("biv_ml_prabhakar_rows: row sum exceeded its term budget");
}

/// E2 for the solver kernel family. Double series near the origin, contour
/// integral of the Hankel representation further out on the negative quadrant.
inline EvalReport biv_ml(const SolverKernelParams& k, double x, double y, const BivOptions& opt)
{
    k.biv().validate();
    detail::require(opt.tol > 0.0, "biv_ml: tol must be positive");
    if (std::isnan(x) || std::isnan(y)) throw DomainError("biv_ml: NaN argument");
    const bool contour_ok = x <= 0.0 && y <= 0.0;

    if (std::fabs(x) + std::fabs(y) <= opt.series_radius || !contour_ok) {
        const auto s = detail::kernel_double_series(k, x, y, opt.tol, opt.max_terms);
        if (s.rounding <= 0.5 * opt.tol * (1.0 + std::fabs(s.value)))
            return {s.value, s.terms, s.tail, EvalPath::double_series};
        if (!contour_ok) {
            std::ostringstream os;
            os << "biv_ml: cancellation error " << s.rounding << " exceeds tolerance at (" << x << ", " << y << ")";
            throw PrecisionLossError(os.str());
        }
    }
    return biv_ml_contour(k, x, y, opt.contour);
}

inline EvalReport biv_ml(const SolverKernelParams& k, double x, double y, double tol = kDefaultTol)
{
    BivOptions opt;
    opt.tol = tol;
    return biv_ml(k, x, y, opt);
}

/// E2 for arbitrary parameters. Kernel-family parameters are routed to the
/// kernel evaluator; everything else is summed as a double series.
inline EvalReport biv_ml(const BivParams& b, double x, double y, double tol = kDefaultTol)
{
    b.validate();
    detail::require(tol > 0.0, "biv_ml: tol must be positive");
    if (b.is_solver_kernel() && b.beta2 > 0.0 && b.alpha3 > b.beta2 && b.beta2 < 1.0 &&
        b.alpha3 - b.beta2 < 1.0 && b.alpha3 - b.beta2 > 0.0) {
        const SolverKernelParams k{{b.beta2, b.alpha3 - b.beta2}, b.delta1};
        return biv_ml(k, x, y, tol);
    }
    const auto s = detail::general_double_series(b, x, y, tol, kMaxSeriesTerms);
    if (s.rounding > 0.5 * tol * (1.0 + std::fabs(s.value))) {
        std::ostringstream os;
        os << "biv_ml: cancellation error " << s.rounding << " exceeds tolerance and no contour path applies";
        throw PrecisionLossError(os.str());
    }
    return {s.value, s.terms, s.tail, EvalPath::double_series};
}

namespace detail {

inline double decay_constant(const SolverKernelParams& k, std::span<const double> xs, std::span<const double> ys)
{
    double c = 0.0;
    for (double x : xs)
        for (double y : ys) c = std::max(c, (1.0 + std::fabs(x)) * std::fabs(biv_ml(k, x, y).value));
    return c;
}

} // namespace detail

/// Empirical constant C in |E2(x, y)| <= C / (1 + |x|): the maximum of
/// (1 + |x|) |E2(x, y)| over the sample grid. Requires 0 < alpha < 2 beta < 2.
inline double biv_ml_decay_check(const SolverKernelParams& k, std::span<const double> xs, std::span<const double> ys)
{
    if (!k.orders.in_decay_wedge()) {
        std::ostringstream os;
        os << "biv_ml_decay_check: (alpha, beta) = (" << k.orders.alpha << ", " << k.orders.beta
           << ") violates 0 < alpha < 2 beta < 2";
        throw HypothesisError(os.str());
    }
    for (double x : xs) detail::require(x <= 0.0, "biv_ml_decay_check: x samples must be <= 0");
    for (double y : ys) detail::require(y <= 0.0, "biv_ml_decay_check: y samples must be <= 0");
    return detail::decay_constant(k, xs, ys);
}

/// t^(delta-1) E2[delta](w1 t^(alpha+beta), w2 t^alpha) for t > 0.
inline double kernel_value(const SolverKernelParams& k, double w1, double w2, double t, double tol = kDefaultTol)
{
    detail::require(t > 0.0, "kernel_value: t must be positive");
    const double x = w1 * std::pow(t, k.x_order()), y = w2 * std::pow(t, k.y_order());
    return std::pow(t, k.delta1 - 1.0) * biv_ml(k, x, y, tol).value;
}

/// int_0^t eta^(delta-1) E2[delta](w1 eta^(alpha+beta), w2 eta^alpha) d eta
///   = t^delta E2[delta + 1](w1 t^(alpha+beta), w2 t^alpha), in closed form.
inline double kernel_integral(const SolverKernelParams& k, double w1, double w2, double t, double tol = kDefaultTol)
{
    detail::require(k.delta1 > 0.0, "kernel_integral: delta1 must be positive");
    detail::require(t >= 0.0, "kernel_integral: t must be non-negative");
    if (t == 0.0) return 0.0;
    const double x = w1 * std::pow(t, k.x_order()), y = w2 * std::pow(t, k.y_order());
    return std::pow(t, k.delta1) * biv_ml(k.with_delta(k.delta1 + 1.0), x, y, tol).value;
}

enum class ShiftForm {
    /// D^s [t^(d-1) E2[d]] = t^(d-s-1) E2[d-s]; needs d - s > 0.
    power,
    /// D^s of the convolution with t^(d-1) E2[d]; needs d > 1.
    convolution,
};

/// Parameters after a Caputo derivative of order shift: delta1 -> delta1 - shift.
inline SolverKernelParams kernel_caputo_shift(const SolverKernelParams& k, double shift,
                                              ShiftForm form = ShiftForm::power)
{
    detail::require(shift > 0.0 && shift < 1.0, "kernel_caputo_shift: shift must lie in (0,1)");
    detail::require(k.delta1 - shift > 0.0, "kernel_caputo_shift: requires delta1 - shift > 0");
    if (form == ShiftForm::convolution)
        detail::require(k.delta1 > 1.0, "kernel_caputo_shift: convolution form requires delta1 > 1");
    return k.with_delta(k.delta1 - shift);
}

} // namespace seqfrac
