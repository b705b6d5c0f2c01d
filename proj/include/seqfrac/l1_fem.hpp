#pragma once

// Fully discrete L1 / P1 scheme for D^beta(D^alpha u) + D^beta u - u_xx = f with the
// auxiliary variable V = D^alpha u:
//
//   M (D^beta V^n + D^beta U^n) + K U^n = F^n,   V^n = D^alpha U^n,
//
// every Caputo derivative replaced by its L1 approximation on a graded mesh.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "seqfrac/errors.hpp"
#include "seqfrac/fem.hpp"
#include "seqfrac/mesh.hpp"
#include "seqfrac/orders.hpp"

namespace seqfrac {

using SpaceFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double, double)>;

struct DiscreteProblem {
    FractionalOrders orders;
    double T = 1.0;
    int N = 400;
    int M = 200;
    /// Grading exponent; nullopt means 2 - min(alpha, beta).
    std::optional<double> r;
    SpaceFunction phi = [](double) { return 0.0; };
    SpaceFunction psi = [](double) { return 0.0; };
    /// Source f(x, t); empty means f = 0.
    SpaceTimeFunction f;
    /// Exact solution, when known, for error norms.
    SpaceTimeFunction exact;
    /// Abscissa of the recorded point trace.
    double trace_x = 0.5;

    void validate() const
    {
        orders.require_admissible();
        detail::require(T > 0.0, "DiscreteProblem: T must be positive");
        detail::require(N >= 1, "DiscreteProblem: N must be >= 1");
        detail::require(M >= 2, "DiscreteProblem: M must be >= 2");
        detail::require(!r || *r >= 1.0, "DiscreteProblem: r must be >= 1");
        detail::require(trace_x >= 0.0 && trace_x <= 1.0, "DiscreteProblem: trace_x must lie in [0,1]");
        detail::require(static_cast<bool>(phi) && static_cast<bool>(psi), "DiscreteProblem: phi and psi must be set");
    }
};

struct SolutionTrajectory {
    GradedMesh mesh;
    FemSpace fem;
    std::vector<std::vector<double>> U, V;
    /// ||u_h(t_n)||_{L2}, |u_h(t_n)|_{H1} and u_h(trace_x, t_n) per level.
    std::vector<double> l2, h1, trace;
    /// Per-level error norms against the exact solution (level 0 included).
    std::vector<double> err_l2, err_h1;
    /// Maxima over levels n >= 1.
    double max_err_l2 = 0.0, max_err_h1 = 0.0;
    /// c_n = a^beta_{n,n} (1 + a^alpha_{n,n}) and the smallest LDL^T pivot of K + c_n M.
    std::vector<double> multiplier, min_pivot;
    /// Largest relative residual ||A x - b|| / ||b|| of the per-step solves.
    double max_relative_residual = 0.0;

    int levels() const { return static_cast<int>(U.size()) - 1; }
};

namespace detail {

inline double norm2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// -a_{n,n} W^{n-1} + sum_{k=1}^{n-1} a_{n,k} (W^k - W^{k-1}), summed left to right.
inline std::vector<double> history(int n, const L1Weights& w, const std::vector<std::vector<double>>& W)
{
    const std::size_t m = W[0].size();
    std::vector<double> H(m, 0.0);
    for (int k = 1; k < n; ++k) {
        const double a = w(n, k);
        for (std::size_t i = 0; i < m; ++i) H[i] += a * (W[k][i] - W[k - 1][i]);
    }
    const double ann = w(n, n);
    for (std::size_t i = 0; i < m; ++i) H[i] -= ann * W[n - 1][i];
    return H;
}

inline void record_diagnostics(SolutionTrajectory& s, const DiscreteProblem& p)
{
    const auto& U = s.U.back();
    s.l2.push_back(s.fem.l2_norm(U));
    s.h1.push_back(s.fem.h1_seminorm(U));
    s.trace.push_back(s.fem.evaluate(U, p.trace_x));
    if (p.exact) {
        const double t = s.mesh.t[s.levels()];
        auto e = s.fem.interpolate([&](double x) { return p.exact(x, t); });
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = U[i] - e[i];
        s.err_l2.push_back(s.fem.l2_norm(e));
        s.err_h1.push_back(s.fem.h1_seminorm(e));
        if (s.levels() >= 1) {
            s.max_err_l2 = std::max(s.max_err_l2, s.err_l2.back());
            s.max_err_h1 = std::max(s.max_err_h1, s.err_h1.back());
        }
    }
}

} // namespace detail

/// Advances the trajectory from level n-1 to level n. F is the load vector at t_n.
inline void step(int n, SolutionTrajectory& state, const L1Weights& wa, const L1Weights& wb, const FemSpace& fem,
                 const std::vector<double>& F)
{
    detail::require(n >= 1 && state.levels() == n - 1, "step: levels 0..n-1 must be present");
    const auto Ha = detail::history(n, wa, state.U);
    const auto HbU = detail::history(n, wb, state.U);
    const auto HbV = detail::history(n, wb, state.V);
    const double ann = wa(n, n), bnn = wb(n, n);
    const double c = bnn * (1.0 + ann);

    const Tridiagonal A = Tridiagonal::combine(1.0, fem.stiffness, c, fem.mass);
    const auto pivots = A.ldl_pivots();
    const double min_pivot = *std::min_element(pivots.begin(), pivots.end());
    if (!(c > 0.0) || !(min_pivot > 0.0) || !A.symmetric())
        throw Error("step: system matrix K + c_n M is not symmetric positive definite");

    std::vector<double> mix(Ha.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = bnn * Ha[i] + HbU[i] + HbV[i];
    const auto Mmix = fem.mass.multiply(mix);
    std::vector<double> b(F.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = F[i] - Mmix[i];

    auto Un = A.solve(b);
    const auto Ax = A.multiply(Un);
    std::vector<double> res(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) res[i] = Ax[i] - b[i];
    const double bn = detail::norm2(b);
    if (bn > 0.0) state.max_relative_residual = std::max(state.max_relative_residual, detail::norm2(res) / bn);

    std::vector<double> Vn(Un.size());
    for (std::size_t i = 0; i < Vn.size(); ++i) Vn[i] = ann * Un[i] + Ha[i];

    state.U.push_back(std::move(Un));
    state.V.push_back(std::move(Vn));
    state.multiplier.push_back(c);
    state.min_pivot.push_back(min_pivot);
}

/// Runs the scheme over all levels. Deterministic: identical inputs give
/// bit-identical trajectories.
inline SolutionTrajectory run(const DiscreteProblem& p)
{
    p.validate();
    SolutionTrajectory s;
    s.mesh = build_graded_mesh(p.T, p.N, resolve_grading(p.r, p.orders));
    s.fem = assemble_fem(p.M);
    const L1Weights wa(s.mesh, p.orders.alpha), wb(s.mesh, p.orders.beta);

    s.U.push_back(s.fem.interpolate(p.phi));
    s.V.push_back(s.fem.interpolate(p.psi));
    detail::record_diagnostics(s, p);

    for (int n = 1; n <= p.N; ++n) {
        const double tn = s.mesh.t[n];
        std::vector<double> F = p.f ? load_vector([&](double x) { return p.f(x, tn); }, s.fem)
                                    : std::vector<double>(s.fem.n_interior, 0.0);
        step(n, s, wa, wb, s.fem, F);
        detail::record_diagnostics(s, p);
    }
    return s;
}

/// u_h(x, t) by linear interpolation in time between levels.
inline double trajectory_value(const SolutionTrajectory& s, double x, double t)
{
    const auto& tn = s.mesh.t;
    detail::require(t >= 0.0 && t <= tn.back(), "trajectory_value: t outside the mesh");
    const auto it = std::lower_bound(tn.begin(), tn.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - tn.begin());
    if (tn[j] == t) return s.fem.evaluate(s.U[j], x);
    const double w = (t - tn[j - 1]) / (tn[j] - tn[j - 1]);
    return (1.0 - w) * s.fem.evaluate(s.U[j - 1], x) + w * s.fem.evaluate(s.U[j], x);
}

} // namespace seqfrac
