#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "seqfrac/errors.hpp"
#include "seqfrac/gamma.hpp"
#include "seqfrac/orders.hpp"

namespace seqfrac {

/// Time nodes t_n = T (n/N)^r, n = 0..N.
struct GradedMesh {
    double T = 1.0;
    int N = 1;
    double r = 1.0;
    std::vector<double> t;
    /// dt[n] = t_n - t_{n-1} for n >= 1; dt[0] = 0.
    std::vector<double> dt;
};

inline GradedMesh build_graded_mesh(double T, int N, double r)
{
    detail::require(T > 0.0, "build_graded_mesh: T must be positive");
    detail::require(N >= 1, "build_graded_mesh: N must be >= 1");
    detail::require(r >= 1.0, "build_graded_mesh: r must be >= 1");
    GradedMesh m{T, N, r, std::vector<double>(N + 1), std::vector<double>(N + 1, 0.0)};
    for (int n = 0; n <= N; ++n) m.t[n] = T * std::pow(static_cast<double>(n) / N, r);
    m.t[N] = T;
    for (int n = 1; n <= N; ++n) m.dt[n] = m.t[n] - m.t[n - 1];
    return m;
}

/// Grading exponent; nullopt stands for "auto" and resolves to 2 - min(alpha, beta).
inline double resolve_grading(std::optional<double> r, const FractionalOrders& orders)
{
    return r ? *r : orders.auto_grading();
}

/// L1 weights a_{n,k} = [(t_n - t_{k-1})^(1-g) - (t_n - t_k)^(1-g)] / (Gamma(2-g) dt_k), 1 <= k <= n.
class L1Weights {
public:
    L1Weights() = default;

    L1Weights(const GradedMesh& mesh, double gamma) : gamma_(gamma), N_(mesh.N)
    {
        detail::require(gamma > 0.0 && gamma < 1.0, "l1_weights: gamma must lie in (0,1)");
        const double e = 1.0 - gamma, g = gamma_fn(2.0 - gamma);
        w_.resize(static_cast<std::size_t>(N_) * (N_ + 1) / 2);
        for (int n = 1; n <= N_; ++n)
            for (int k = 1; k <= n; ++k)
                w_[offset(n) + k - 1] = (std::pow(mesh.t[n] - mesh.t[k - 1], e) - std::pow(mesh.t[n] - mesh.t[k], e)) /
                                        (g * mesh.dt[k]);
    }

    double gamma() const { return gamma_; }
    int levels() const { return N_; }

    double operator()(int n, int k) const { return w_[offset(n) + k - 1]; }

    /// Row n: a_{n,1}, ..., a_{n,n}.
    std::span<const double> row(int n) const { return {w_.data() + offset(n), static_cast<std::size_t>(n)}; }

    /// Discrete Caputo derivative at level n of a scalar sequence w_0..w_N.
    double caputo(int n, std::span<const double> w) const
    {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += (*this)(n, k) * (w[k] - w[k - 1]);
        return s;
    }

private:
    static std::size_t offset(int n) { return static_cast<std::size_t>(n - 1) * n / 2; }

    double gamma_ = 0.5;
    int N_ = 0;
    std::vector<double> w_;
};

inline L1Weights l1_weights(const GradedMesh& mesh, double gamma)
{
    return {mesh, gamma};
}

} // namespace seqfrac
