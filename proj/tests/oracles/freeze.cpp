// Prints the reference values frozen in tests/unit/frozen_values.hpp.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "oracles.hpp"

namespace {

/// Kernel double series in long double; arguments in the tests are small enough
/// that no cancellation arises.
long double kernel_series_ld(double p, double q, double delta, double x, double y)
{
    long double sum = 0.0L;
    for (int d = 0; d < 80; ++d) {
        long double binom = 1.0L;
        for (int m = 0; m <= d; ++m) {
            const int n = d - m;
            sum += binom * std::pow(static_cast<long double>(x), m) * std::pow(static_cast<long double>(y), n) /
                   std::tgamma(static_cast<long double>(delta) + static_cast<long double>(p) * m +
                               static_cast<long double>(q) * n);
            binom = binom * (d - m) / (m + 1);
        }
    }
    return sum;
}

void print(const char* name, double v)
{
    std::printf("inline constexpr double %s = %.17g;\n", name, v);
}

} // namespace

int main()
{
    const double pi = std::numbers::pi;

    print("kMittagLeffler08_1_m5", oracle::mittag_leffler_series(0.8, 1.0, -5.0, 300));
    print("kPrabhakar12_12_3_m15", oracle::prabhakar_series(1.2, 1.2, 3.0, -1.5, 200));

    // Row-wise sum sum_n (-1)^n t^(alpha n) E^{n+1}_{alpha+beta, alpha(n+1)+beta}(-pi^2 t^(alpha+beta)).
    {
        const double al = 0.8, be = 0.4, t = 0.5, lam = pi * pi;
        const double x = -lam * std::pow(t, al + be);
        double sum = 0.0;
        for (int n = 0; n < 60; ++n)
            sum += std::pow(-1.0, n) * std::pow(t, al * n) *
                   oracle::prabhakar_series(al + be, al * (n + 1) + be, n + 1.0, x, 200);
        print("kBivRowSum", sum);
        print("kBivDoubleSeriesMp", oracle::kernel_series(al + be, al, al + be, x, -std::pow(t, al), 150));
    }

    print("kRelaxation08", 1.0 - oracle::mittag_leffler_series(0.8, 1.0, -1.0, 300));

    {
        // int_0^1 eta^0.2 E2[1.2](-eta^1.2, -eta^0.8) d eta with eta = u^5.
        const auto integrand = [](double eta) {
            return std::pow(eta, 0.2) * static_cast<double>(kernel_series_ld(1.2, 0.8, 1.2, -std::pow(eta, 1.2),
                                                                             -std::pow(eta, 0.8)));
        };
        print("kKernelIntegralQuadrature", oracle::graded_simpson(integrand, 1.0, 5.0, 4000));
    }

    {
        // Single mode: U_1(0.5) = E2[1] + t^alpha E2[alpha+1] at (-pi^2 t^1.2, -t^0.8).
        const double t = 0.5, x = -pi * pi * std::pow(t, 1.2), y = -std::pow(t, 0.8);
        const double u1 = oracle::kernel_series(1.2, 0.8, 1.0, x, y, 150) +
                          std::pow(t, 0.8) * oracle::kernel_series(1.2, 0.8, 1.8, x, y, 150);
        print("kSingleModeU1", u1);
    }

    for (int k = 1; k <= 6; ++k) {
        const double c = oracle::simpson([k](double x) { return 2.0 * std::pow(x * (1 - x), 3) * std::sin(k * std::numbers::pi * x); },
                                         0.0, 1.0, 1000000);
        char name[64];
        std::snprintf(name, sizeof name, "kSineCoeffG%d", k);
        print(name, c);
    }
    return 0;
}
