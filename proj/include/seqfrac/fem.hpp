#pragma once

// Continuous piecewise-linear elements on a uniform partition of [0,1] with
// homogeneous Dirichlet conditions. Unknowns are the interior nodal values.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "seqfrac/errors.hpp"

namespace seqfrac {

/// Square tridiagonal matrix.
struct Tridiagonal {
    std::vector<double> lower;  // size n-1, entry (i+1, i)
    std::vector<double> diag;   // size n
    std::vector<double> upper;  // size n-1, entry (i, i+1)

    static Tridiagonal constant(int n, double lo, double d, double up)
    {
        return {std::vector<double>(std::max(n - 1, 0), lo), std::vector<double>(n, d),
                std::vector<double>(std::max(n - 1, 0), up)};
    }

    int size() const { return static_cast<int>(diag.size()); }

    bool symmetric() const { return lower == upper; }

    /// a A + b B.
    static Tridiagonal combine(double a, const Tridiagonal& A, double b, const Tridiagonal& B)
    {
        Tridiagonal C = A;
        for (std::size_t i = 0; i < C.diag.size(); ++i) C.diag[i] = a * A.diag[i] + b * B.diag[i];
        for (std::size_t i = 0; i < C.lower.size(); ++i) {
            C.lower[i] = a * A.lower[i] + b * B.lower[i];
            C.upper[i] = a * A.upper[i] + b * B.upper[i];
        }
        return C;
    }

    std::vector<double> multiply(const std::vector<double>& x) const
    {
        const int n = size();
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += lower[i - 1] * x[i - 1];
            if (i + 1 < n) s += upper[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

    double quadratic_form(const std::vector<double>& x) const
    {
        const auto y = multiply(x);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    }

    /// Pivots of the LDL^T factorisation; all positive iff a symmetric matrix is SPD.
    std::vector<double> ldl_pivots() const
    {
        const int n = size();
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = diag[i] - (i > 0 ? lower[i - 1] * upper[i - 1] / d[i - 1] : 0.0);
        return d;
    }

    bool is_spd() const
    {
        if (!symmetric()) return false;
        const auto d = ldl_pivots();
        return std::all_of(d.begin(), d.end(), [](double v) { return v > 0.0; });
    }

    /// Thomas elimination.
    std::vector<double> solve(const std::vector<double>& b) const
    {
        const int n = size();
        if (static_cast<int>(b.size()) != n) throw DomainError("Tridiagonal::solve: size mismatch");
        std::vector<double> c(n), x(n);
        double piv = diag[0];
        if (piv == 0.0) throw Error("Tridiagonal::solve: singular system");
        x[0] = b[0] / piv;
        for (int i = 1; i < n; ++i) {
            c[i - 1] = upper[i - 1] / piv;
            piv = diag[i] - lower[i - 1] * c[i - 1];
            if (piv == 0.0) throw Error("Tridiagonal::solve: singular system");
            x[i] = (b[i] - lower[i - 1] * x[i - 1]) / piv;
        }
        for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
        return x;
    }
};

struct FemSpace {
    int M_elems = 2;
    double h = 0.5;
    int n_interior = 1;
    /// (h/6) tridiag(1, 4, 1).
    Tridiagonal mass;
    /// (1/h) tridiag(-1, 2, -1).
    Tridiagonal stiffness;

    double node(int i) const { return (i + 1) * h; }  // interior node i = 0..n_interior-1

    std::vector<double> interpolate(const std::function<double(double)>& g) const
    {
        std::vector<double> v(n_interior);
        for (int i = 0; i < n_interior; ++i) v[i] = g(node(i));
        return v;
    }

    /// Value of the P1 function with interior nodal values U at x in [0,1].
    double evaluate(const std::vector<double>& U, double x) const
    {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const double s = x / h;
        const int e = std::min(static_cast<int>(std::floor(s)), M_elems - 1);
        const double w = s - e;
        const double left = e == 0 ? 0.0 : U[e - 1];
        const double right = e + 1 >= M_elems ? 0.0 : U[e];
        return (1.0 - w) * left + w * right;
    }

    double l2_norm(const std::vector<double>& U) const { return std::sqrt(std::max(0.0, mass.quadratic_form(U))); }
    double h1_seminorm(const std::vector<double>& U) const
    {
        return std::sqrt(std::max(0.0, stiffness.quadratic_form(U)));
    }
};

inline FemSpace assemble_fem(int M_elems)
{
    detail::require(M_elems >= 2, "assemble_fem: at least two elements are required");
    FemSpace s;
    s.M_elems = M_elems;
    s.h = 1.0 / M_elems;
    s.n_interior = M_elems - 1;
    s.mass = Tridiagonal::constant(s.n_interior, s.h / 6.0, 4.0 * s.h / 6.0, s.h / 6.0);
    s.stiffness = Tridiagonal::constant(s.n_interior, -1.0 / s.h, 2.0 / s.h, -1.0 / s.h);
    return s;
}

/// F_i = (f, phi_i) with two-point Gauss-Legendre quadrature on every element.
inline std::vector<double> load_vector(const std::function<double(double)>& f, const FemSpace& fem)
{
    std::vector<double> F(fem.n_interior, 0.0);
    const double g = 0.5 / std::sqrt(3.0);
    const double xi[2] = {0.5 - g, 0.5 + g};  // reference coordinates in [0,1]
    for (int e = 0; e < fem.M_elems; ++e) {
        const double x0 = e * fem.h;
        for (double s : xi) {
            const double fx = f(x0 + s * fem.h) * 0.5 * fem.h;
            if (e >= 1) F[e - 1] += fx * (1.0 - s);       // left node of the element
            if (e + 1 <= fem.n_interior) F[e] += fx * s;  // right node
        }
    }
    return F;
}

} // namespace seqfrac
