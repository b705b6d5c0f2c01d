#pragma once

// Exact solution of the sequential fractional Cauchy problem
//
//   D^beta (D^alpha y) + D^beta y + lambda y = f(t),   y(0) = phi,  D^alpha y(0) = psi,
//
// and the eigenfunction series of the diffusion problem on (0,1) with zero
// Dirichlet data, whose k-th mode solves the Cauchy problem with lambda = (pi k)^2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "seqfrac/bivariate.hpp"
#include "seqfrac/errors.hpp"
#include "seqfrac/orders.hpp"

namespace seqfrac {

/// sin(pi v), exactly zero at integers.
inline double sin_pi(double v)
{
    double r = std::fmod(v, 2.0);  // (-2, 2)
    if (r > 1.0) r -= 2.0;
    else if (r < -1.0) r += 2.0;
    if (r == std::floor(r)) return 0.0;
    if (r > 0.5) r = 1.0 - r;
    else if (r < -0.5) r = -1.0 - r;
    return std::sin(std::numbers::pi * r);
}

/// Time-dependent forcing held as a piecewise-linear interpolant.
class Forcing {
public:
    Forcing() = default;

    static Forcing zero() { return {}; }

    /// Samples times[j], values[j]; times must start at 0 and increase strictly.
    static Forcing from_samples(std::vector<double> times, std::vector<double> values)
    {
        detail::require(times.size() == values.size(), "Forcing: times and values differ in length");
        detail::require(times.size() >= 2, "Forcing: at least two samples are required");
        detail::require(times.front() == 0.0, "Forcing: samples must start at t = 0");
        for (std::size_t j = 1; j < times.size(); ++j)
            detail::require(times[j] > times[j - 1], "Forcing: sample times must increase strictly");
        Forcing f;
        f.times_ = std::move(times);
        f.values_ = std::move(values);
        return f;
    }

    /// Samples a callback on the graded grid T (j/samples)^grading, j = 0..samples.
    static Forcing from_function(const std::function<double(double)>& fn, double T, int samples,
                                 double grading = 2.0)
    {
        detail::require(T > 0.0, "Forcing: T must be positive");
        detail::require(samples >= 1, "Forcing: samples must be >= 1");
        detail::require(grading >= 1.0, "Forcing: grading must be >= 1");
        std::vector<double> t(samples + 1), v(samples + 1);
        for (int j = 0; j <= samples; ++j) {
            t[j] = j == samples ? T : T * std::pow(static_cast<double>(j) / samples, grading);
            v[j] = fn(t[j]);
        }
        return from_samples(std::move(t), std::move(v));
    }

    static Forcing constant(double c, double T) { return from_samples({0.0, T}, {c, c}); }

    bool is_zero() const
    {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
    }
    double end_time() const { return times_.empty() ? std::numeric_limits<double>::infinity() : times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double t) const
    {
        if (times_.empty()) return 0.0;
        if (t <= 0.0) return values_.front();
        if (t >= times_.back()) return values_.back();
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - times_.begin());
        const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
        return values_[j - 1] + w * (values_[j] - values_[j - 1]);
    }

    Forcing scaled(double c) const
    {
        Forcing f = *this;
        for (double& v : f.values_) v *= c;
        return f;
    }

private:
    std::vector<double> times_, values_;
};

struct CauchyProblem {
    FractionalOrders orders;
    double lambda = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    Forcing forcing;
    double T = 1.0;

    void validate() const
    {
        orders.validate();
        detail::require(lambda >= 0.0, "CauchyProblem: lambda must be non-negative");
        detail::require(T > 0.0, "CauchyProblem: T must be positive");
        detail::require(forcing.end_time() >= T, "CauchyProblem: forcing does not cover [0, T]");
    }
};

/// Default tolerance of the solvers; special functions are evaluated well below it.
inline constexpr double kSolverTol = 1e-6;

namespace detail {

/// int_0^t (t - tau)^(d-1) E2[d](-lambda (t-tau)^(a), -(t-tau)^alpha) f(tau) d tau with f
/// replaced by its piecewise-linear interpolant, integrated exactly through the two
/// antiderivatives K1(s) = s^d E2[d+1] and K2(s) = s^(d+1) E2[d+2].
inline double forcing_convolution(const FractionalOrders& orders, double lambda, double d, const Forcing& f,
                                  double t, double tol)
{
    if (f.is_zero() || t == 0.0) return 0.0;
    const SolverKernelParams k1{orders, d};
    const SolverKernelParams k2{orders, d + 1.0};
    const double ftol = 1e-3 * tol;

    std::vector<double> nodes;
    for (double tau : f.times()) {
        if (tau >= t) break;
        nodes.push_back(tau);
    }
    nodes.push_back(t);
    std::vector<double> vals(nodes.size()), big(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        vals[j] = f(nodes[j]);
        big[j] = kernel_integral(k2, -lambda, -1.0, t - nodes[j], ftol);
    }
    const double head = f(0.0) * kernel_integral(k1, -lambda, -1.0, t, ftol);

    auto rule = [&](std::size_t stride) {
        double acc = head;
        std::size_t j = 0;
        while (j + 1 < nodes.size()) {
            const std::size_t next = std::min(j + stride, nodes.size() - 1);
            const double slope = (vals[next] - vals[j]) / (nodes[next] - nodes[j]);
            acc += slope * (big[j] - big[next]);
            j = next;
        }
        return acc;
    };
    const double fine = rule(1);
    if (nodes.size() > 4) {
        // Linear interpolation is second order, so the fine error is about a third of the gap.
        const double estimate = std::fabs(fine - rule(2)) / 3.0;
        if (estimate > tol * (1.0 + std::fabs(fine))) {
            std::ostringstream os;
            os << "forcing sampling too coarse: estimated convolution error " << estimate << " exceeds tol "
               << tol << " at t=" << t;
            throw ResolutionError(os.str());
        }
    }
    return fine;
}

} // namespace detail

/// y(t) = phi E2[1] + (phi + psi) t^alpha E2[alpha+1] + (forcing convolution with kernel
/// s^(alpha+beta-1) E2[alpha+beta]), every E2 taken at (-lambda t^(alpha+beta), -t^alpha).
inline double solve_cauchy(const CauchyProblem& p, double t, double tol = kSolverTol)
{
    p.validate();
    detail::require(tol > 0.0, "solve_cauchy: tol must be positive");
    detail::require(t >= 0.0 && t <= p.T, "solve_cauchy: t must lie in [0, T]");
    if (t == 0.0) return p.phi;

    const double a = p.orders.sum(), al = p.orders.alpha;
    const double x = -p.lambda * std::pow(t, a), y = -std::pow(t, al);
    const double ftol = 1e-3 * tol;
    double value = 0.0;
    if (p.phi != 0.0) value += p.phi * biv_ml(SolverKernelParams{p.orders, 1.0}, x, y, ftol).value;
    if (p.phi + p.psi != 0.0)
        value += (p.phi + p.psi) * std::pow(t, al) * biv_ml(SolverKernelParams{p.orders, al + 1.0}, x, y, ftol).value;
    value += detail::forcing_convolution(p.orders, p.lambda, a, p.forcing, t, tol);
    return value;
}

enum class DerivativeOrder { alpha, beta };

enum class DerivativeForm {
    /// Caputo derivative of the solution.
    caputo,
    /// Riemann-Liouville derivative: differs from caputo by phi t^(-s) / Gamma(1-s).
    riemann_liouville,
};

/// D^s y(t) for s = alpha or beta, from the closed forms with delta1 shifted by s termwise.
/// Requires alpha + beta > 1, so that the convolution kernel stays integrable.
inline double caputo_of_solution(const CauchyProblem& p, DerivativeOrder which, double t,
                                 DerivativeForm form = DerivativeForm::caputo, double tol = kSolverTol)
{
    p.validate();
    if (!(p.orders.sum() > 1.0)) {
        std::ostringstream os;
        os << "caputo_of_solution: requires alpha+beta>1, got " << p.orders.sum();
        throw DomainError(os.str());
    }
    detail::require(t <= p.T, "caputo_of_solution: t must not exceed T");
    if (!(t > 0.0)) throw DomainError("caputo_of_solution: derivative is singular at t = 0; t must be positive");

    const double s = which == DerivativeOrder::alpha ? p.orders.alpha : p.orders.beta;
    const double a = p.orders.sum(), al = p.orders.alpha;
    const double x = -p.lambda * std::pow(t, a), y = -std::pow(t, al);
    const double ftol = 1e-3 * tol;

    double value = 0.0;
    if (p.phi != 0.0) {
        const auto k = kernel_caputo_shift(SolverKernelParams{p.orders, 1.0}, s);
        double e = biv_ml(k, x, y, ftol).value;
        if (form == DerivativeForm::caputo) e -= 1.0 / gamma_fn(1.0 - s);
        value += p.phi * std::pow(t, -s) * e;
    }
    if (p.phi + p.psi != 0.0) {
        const auto k = kernel_caputo_shift(SolverKernelParams{p.orders, al + 1.0}, s);
        value += (p.phi + p.psi) * std::pow(t, al - s) * biv_ml(k, x, y, ftol).value;
    }
    if (!p.forcing.is_zero()) {
        const auto k = kernel_caputo_shift(SolverKernelParams{p.orders, a}, s, ShiftForm::convolution);
        value += detail::forcing_convolution(p.orders, p.lambda, k.delta1, p.forcing, t, tol);
    }
    return value;
}

/// g_k = 2 int_0^1 g(x) sin(k pi x) dx for k = 1..K. Composite 61-point Gauss-Kronrod on
/// panels no wider than half a period, doubled until the summed error estimate is below 1e-12.
inline std::vector<double> fourier_sine_coeffs(const std::function<double(double)>& g, int K)
{
    detail::require(K >= 1, "fourier_sine_coeffs: K must be >= 1");
    using rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    std::vector<double> out(K);
    for (int k = 1; k <= K; ++k) {
        const auto integrand = [&](double x) { return 2.0 * g(x) * sin_pi(k * x); };
        double error = 0.0, value = 0.0;
        for (int panels = std::max(4, k); panels <= (1 << 16); panels *= 2) {
            value = 0.0;
            error = 0.0;
            for (int j = 0; j < panels; ++j) {
                double e = 0.0;
                value += rule::integrate(integrand, static_cast<double>(j) / panels,
                                         static_cast<double>(j + 1) / panels, 0, 0.0, &e);
                error += e;
            }
            if (error <= 1e-12) break;
        }
        if (!(error <= 1e-12)) {
            std::ostringstream os;
            os << "fourier_sine_coeffs: quadrature error " << error << " for k=" << k;
            throw ConvergenceError(os.str());
        }
        out[k - 1] = value;
    }
    return out;
}

struct PdeProblem {
    FractionalOrders orders;
    double T = 1.0;
    std::function<double(double)> phi = [](double) { return 0.0; };
    std::function<double(double)> psi = [](double) { return 0.0; };
    /// Source f(x, t); empty means f = 0.
    std::function<double(double, double)> f;
    int K_modes = 48;
    /// Time samples per mode for the forcing coefficients.
    int forcing_samples = 512;

    void validate() const
    {
        orders.require_admissible();
        detail::require(T > 0.0, "PdeProblem: T must be positive");
        detail::require(K_modes >= 1, "PdeProblem: K_modes must be >= 1");
        detail::require(forcing_samples >= 1, "PdeProblem: forcing_samples must be >= 1");
        detail::require(static_cast<bool>(phi) && static_cast<bool>(psi), "PdeProblem: phi and psi must be set");
        const double ends[] = {std::fabs(phi(0.0)), std::fabs(phi(1.0)), std::fabs(psi(0.0)), std::fabs(psi(1.0))};
        if (*std::max_element(std::begin(ends), std::end(ends)) > 1e-12)
            throw DomainError("PdeProblem: initial data must vanish at x = 0 and x = 1");
    }
};

struct SeriesEvaluation {
    double value = 0.0;
    /// Envelope estimate of the neglected modes k > K_modes.
    double tail_estimate = 0.0;
    /// False when the orders leave the wedge alpha < 2 beta where the envelope is proven;
    /// the tail is then an empirical estimate only.
    bool tail_bounded = true;
    std::string warning;
};

/// Truncated eigenfunction series sum_k U_k(t) sin(k pi x). Data coefficients are
/// computed once at construction.
class PdeSeriesSolver {
public:
    explicit PdeSeriesSolver(PdeProblem p) : p_(std::move(p))
    {
        p_.validate();
        const int K = p_.K_modes, K_tail = 2 * p_.K_modes;
        phi_k_ = fourier_sine_coeffs(p_.phi, K_tail);
        psi_k_ = fourier_sine_coeffs(p_.psi, K_tail);
        forcing_.assign(K_tail, Forcing::zero());
        if (p_.f) {
            const int J = p_.forcing_samples;
            std::vector<double> times(J + 1);
            std::vector<std::vector<double>> vals(K_tail, std::vector<double>(J + 1));
            for (int j = 0; j <= J; ++j) {
                times[j] = j == J ? p_.T : p_.T * std::pow(static_cast<double>(j) / J, 2.0);
                const double tj = times[j];
                const auto c = fourier_sine_coeffs([&](double x) { return p_.f(x, tj); }, K_tail);
                for (int k = 0; k < K_tail; ++k) vals[k][j] = c[k];
            }
            for (int k = 0; k < K_tail; ++k) forcing_[k] = Forcing::from_samples(times, vals[k]);
        }

        double tail_data = 0.0;
        for (int k = K; k < K_tail; ++k) {
            double fmax = 0.0;
            for (double v : forcing_[k].values()) fmax = std::max(fmax, std::fabs(v));
            tail_data += std::fabs(phi_k_[k]) + std::fabs(psi_k_[k]) + fmax;
        }
        const double ym = std::pow(p_.T, p_.orders.alpha);
        const std::vector<double> xs{0.0, -1.0, -10.0, -100.0, -1000.0, -1e4};
        const std::vector<double> ys{0.0, -0.5 * ym, -ym};
        const SolverKernelParams kernel{p_.orders, 1.0};
        double C = 0.0;
        if (p_.orders.in_decay_wedge()) {
            C = biv_ml_decay_check(kernel, xs, ys);
        } else {
            tail_bounded_ = false;
            C = detail::decay_constant(kernel, xs, ys);
            std::ostringstream os;
            os << "tail not bounded: (alpha, beta) = (" << p_.orders.alpha << ", " << p_.orders.beta
               << ") lies outside 0 < alpha < 2 beta; tail estimate is empirical";
            warning_ = os.str();
        }
        tail_ = C * tail_data;
    }

    const PdeProblem& problem() const { return p_; }
    int modes() const { return p_.K_modes; }
    double phi_coeff(int k) const { return phi_k_.at(k - 1); }
    double psi_coeff(int k) const { return psi_k_.at(k - 1); }

    CauchyProblem mode_problem(int k) const
    {
        detail::require(k >= 1 && k <= 2 * p_.K_modes, "PdeSeriesSolver: mode index out of range");
        const double pk = std::numbers::pi * k;
        return {p_.orders, pk * pk, phi_k_[k - 1], psi_k_[k - 1], forcing_[k - 1], p_.T};
    }

    /// U_k(t) for k = 1..K_modes.
    std::vector<double> mode_values(double t, double tol = kSolverTol) const
    {
        std::vector<double> u(p_.K_modes);
        for (int k = 1; k <= p_.K_modes; ++k) u[k - 1] = solve_cauchy(mode_problem(k), t, tol);
        return u;
    }

    SeriesEvaluation evaluate(double x, double t, double tol = kSolverTol) const
    {
        detail::require(x >= 0.0 && x <= 1.0, "solve_pde_series: x must lie in [0, 1]");
        detail::require(t >= 0.0 && t <= p_.T, "solve_pde_series: t must lie in [0, T]");
        const auto u = mode_values(t, tol);
        double sum = 0.0;
        for (int k = 1; k <= p_.K_modes; ++k) sum += u[k - 1] * sin_pi(k * x);
        return {sum, tail_, tail_bounded_, warning_};
    }

private:
    PdeProblem p_;
    std::vector<double> phi_k_, psi_k_;
    std::vector<Forcing> forcing_;
    double tail_ = 0.0;
    bool tail_bounded_ = true;
    std::string warning_;
};

inline SeriesEvaluation solve_pde_series(const PdeProblem& p, double x, double t, double tol = kSolverTol)
{
    return PdeSeriesSolver(p).evaluate(x, t, tol);
}

} // namespace seqfrac
