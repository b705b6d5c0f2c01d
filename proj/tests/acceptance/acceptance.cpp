// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "oracles/oracles.hpp"
#include "seqfrac/analytic.hpp"
#include "seqfrac/harness.hpp"

using namespace seqfrac;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double rel(double a, double b)
{
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("seqfrac_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Verdict table1()
{
    HarnessConfig cfg;
    const auto rep = run_table1(cfg, false);
    return {rep.pass(), "max L2 error " + fmt("%.4e", rep.l2) + " in [0.8e-6, 4e-6], max H1 error " +
                            fmt("%.4e", rep.h1) + " in [3e-6, 1.5e-5]"};
}

Verdict table2()
{
    HarnessConfig cfg;
    const auto ladder = run_table2(cfg, {100, 200, 400}, false);
    std::string d;
    for (const auto& row : ladder.rows)
        if (row.rate_l2) d += row.kind + " N=" + std::to_string(row.N) + " rate " + fmt("%.3f", *row.rate_l2) + "; ";
    d += "gain at N=400 " + fmt("%.2f", ladder.find("uniform", 400).l2 / ladder.find("graded", 400).l2);
    return {ladder.pass(), d};
}

Verdict cross_validation()
{
    DiscreteProblem p;
    p.orders = {0.8, 0.4};
    p.N = 800;
    p.M = 200;
    p.r = 1.6;
    p.phi = [](double x) { return std::sin(kPi * x); };
    const double uh = trajectory_value(run(p), 0.5, 0.5);
    const CauchyProblem mode{p.orders, kPi * kPi, 1.0, 0.0, Forcing::zero(), 1.0};
    const double u1 = solve_cauchy(mode, 0.5, 1e-9);
    const double gap = std::fabs(uh - u1);
    return {gap <= 5e-3, "u_h(0.5,0.5) = " + fmt("%.8f", uh) + ", U1(0.5) = " + fmt("%.8f", u1) + ", gap " +
                             fmt("%.2e", gap) + " <= 5e-3"};
}

Verdict special_functions()
{
    double reduction = 0.0;
    for (double rho : {0.5, 0.8, 1.0, 1.4})
        for (double mu : {0.7, 1.0, 2.2})
            for (double z : {-6.0, -0.5, 0.3, 2.0})
                reduction = std::max(reduction, rel(prabhakar(rho, mu, 1.0, z, 1e-13).value,
                                                    oracle::mittag_leffler_series(rho, mu, z, 400)));

    double collapse = 0.0;
    const SolverKernelParams base{{0.8, 0.4}, 1.0};
    for (double delta : {1.0, 1.2, 1.8})
        for (double x : {-0.5, -5.0, -35.0, -500.0}) {
            const auto k = base.with_delta(delta);
            collapse = std::max(collapse, rel(biv_ml(k, x, 0.0).value, mittag_leffler(1.2, delta, x).value));
            collapse = std::max(collapse, rel(biv_ml(k, 0.0, x / 100.0).value, mittag_leffler(0.8, delta, x / 100.0).value));
        }

    double paths = 0.0;
    const auto k12 = base.with_delta(1.2);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double x = -20.0 * i / 4.0, y = -2.0 * j / 4.0;
            paths = std::max(paths, rel(biv_ml(k12, x, y).value, biv_ml_prabhakar_rows(k12, x, y).value));
        }

    const auto integrand = [&](double eta) { return kernel_value(k12, -1.0, -1.0, eta, 1e-13); };
    const double closed = std::fabs(kernel_integral(k12, -1.0, -1.0, 1.0) - oracle::graded_simpson(integrand, 1.0, 5.0, 4000));

    double laplace = 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double rho = 0.8, mu = 1.2, g = 2.0, lambda = -1.0, cutoff = 200.0;
    for (double s : {2.0, 5.0, 10.0}) {
        const auto f = [&](double t) {
            return t <= 0.0 ? 0.0 : std::exp(-s * t) * std::pow(t, mu - 1.0) * prabhakar(rho, mu, g, lambda * std::pow(t, rho)).value;
        };
        const double exact = std::pow(s, rho * g - mu) / std::pow(std::pow(s, rho) - lambda, g);
        const double tail = std::pow(cutoff, mu - 1.0) * std::exp(-s * cutoff) / s;
        laplace = std::max(laplace, std::max(0.0, std::fabs(ts.integrate(f, 0.0, cutoff) - exact) - tail) / exact);
    }

    const bool pass = reduction <= 1e-12 && collapse <= 1e-10 && paths <= 1e-8 && closed <= 1e-8 && laplace <= 1e-5;
    return {pass, "gamma=1 reduction " + fmt("%.1e", reduction) + ", column collapse " + fmt("%.1e", collapse) +
                      ", series paths " + fmt("%.1e", paths) + ", closed-form integral " + fmt("%.1e", closed) +
                      ", Laplace pair " + fmt("%.1e", laplace)};
}

Verdict l1_exactness()
{
    double const_err = 0.0, lin_err = 0.0;
    for (double r : {1.0, 1.6, 2.0})
        for (double g : {0.3, 0.8}) {
            const auto m = build_graded_mesh(1.0, 64, r);
            const auto w = l1_weights(m, g);
            std::vector<double> c(65, 2.5), t(m.t);
            for (int n = 1; n <= 64; ++n) {
                const_err = std::max(const_err, std::fabs(w.caputo(n, c)));
                lin_err = std::max(lin_err, std::fabs(w.caputo(n, t) - std::pow(m.t[n], 1.0 - g) / gamma_fn(2.0 - g)));
            }
        }
    const double g = 0.4, exact = 2.0 / gamma_fn(3.0 - g);
    std::vector<double> errs;
    for (int N : {32, 64, 128, 256}) {
        const auto m = build_graded_mesh(1.0, N, 1.0);
        std::vector<double> sq(N + 1);
        for (int n = 0; n <= N; ++n) sq[n] = m.t[n] * m.t[n];
        errs.push_back(std::fabs(l1_weights(m, g).caputo(N, sq) - exact));
    }
    double worst_rate = INFINITY;
    for (std::size_t i = 1; i < errs.size(); ++i) worst_rate = std::min(worst_rate, convergence_rate(errs[i - 1], errs[i]));
    const bool pass = const_err == 0.0 && lin_err <= 1e-13 && worst_rate >= 1.0;
    return {pass, "constants " + fmt("%.1e", const_err) + ", linear " + fmt("%.1e", lin_err) + " <= 1e-13, t^2 rate " +
                      fmt("%.3f", worst_rate) + " >= 1"};
}

Verdict round_trip()
{
    const auto rep = manufactured_round_trip({0.8, 0.4});
    std::string d = "max residual per N:";
    for (std::size_t i = 0; i < rep.Ns.size(); ++i) d += " " + std::to_string(rep.Ns[i]) + ":" + fmt("%.3e", rep.max_error[i]);
    return {rep.pass(), d + (rep.monotone ? " (monotone)" : " (not monotone)")};
}

Verdict invariants()
{
    HarnessConfig cfg;
    const auto s = run(cfg.discrete());
    bool spd = s.multiplier.size() == static_cast<std::size_t>(cfg.N);
    for (int n = 0; n < cfg.N && spd; ++n) spd = s.multiplier[n] > 0.0 && s.min_pivot[n] > 0.0;

    HarnessConfig zero = cfg;
    zero.preset = Preset::zero;
    zero.N = 50;
    zero.M = 32;
    bool fixed_point = true;
    for (const auto& U : run(zero.discrete()).U)
        for (double v : U) fixed_point = fixed_point && v == 0.0;

    PdeProblem pde;
    pde.orders = {0.8, 0.6};
    pde.phi = [](double x) { return x * (1.0 - x); };
    pde.K_modes = 16;
    const PdeSeriesSolver series(pde);
    const bool boundary = series.evaluate(0.0, 0.5).value == 0.0 && series.evaluate(1.0, 0.5).value == 0.0;

    std::vector<fs::path> dirs{scratch("run_a"), scratch("run_b")};
    for (const auto& dir : dirs) {
        HarnessConfig c = cfg;
        c.out_dir = dir.string();
        c.N = 60;
        c.M = 32;
        c.preset = Preset::mode1;
        run_sweep({0.6, 0.9, 0.1}, c, true);
        run_table1(c);
        run_table2(c, {20, 40});
    }
    bool identical = true;
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const auto other = dirs[1] / fs::relative(entry.path(), dirs[0]);
        identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
    }
    identical = identical && files > 3;

    auto yn = [](bool b) { return b ? std::string("yes") : std::string("no"); };
    return {spd && fixed_point && boundary && identical,
            "SPD at every step " + yn(spd) + ", zero-data fixed point " + yn(fixed_point) + ", boundary annihilation " +
                yn(boundary) + ", byte-identical CSVs (" + std::to_string(files) + " files) " + yn(identical)};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"manufactured error band", table1},
        {"uniform vs graded convergence rates", table2},
        {"analytic-discrete cross-validation", cross_validation},
        {"special-function identities", special_functions},
        {"L1 operator exactness", l1_exactness},
        {"manufactured round trip", round_trip},
        {"structural invariants", invariants},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
