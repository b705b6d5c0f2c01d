#pragma once

// Command-line front end: solve-analytic, solve-fem, verify, convergence, sweep.
// Exit status: 0 success, 1 invalid input or runtime error, 2 failed acceptance check (verify).

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "seqfrac/analytic.hpp"
#include "seqfrac/errors.hpp"
#include "seqfrac/expression.hpp"
#include "seqfrac/harness.hpp"

namespace seqfrac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

/// Raw option values as given on the command line or in the config file.
struct RunOptions {
    std::string command;
    double alpha = 0.8;
    double beta = 0.4;
    int N = 400;
    int M = 200;
    std::string r = "auto";
    double T = 1.0;
    int modes = 48;
    double tol = kSolverTol;
    std::string out = ".";
    std::string preset = "example1";
    std::string phi, psi, f;
    double x = 0.5;
};

inline std::optional<double> parse_grading(const std::string& r)
{
    if (r == "auto") return std::nullopt;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(r, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != r.size()) throw DomainError("--r must be a number >= 1 or 'auto', got '" + r + "'");
    if (!(v >= 1.0)) throw DomainError("--r must be >= 1, got " + r);
    return v;
}

/// Validates the options and turns them into a harness configuration.
inline HarnessConfig make_config(const RunOptions& o)
{
    HarnessConfig c;
    c.orders = FractionalOrders::make(o.alpha, o.beta);
    detail::require(o.N >= 1, "--N must be >= 1");
    detail::require(o.M >= 2, "--M must be >= 2");
    detail::require(o.T > 0.0, "--T must be positive");
    detail::require(o.modes >= 1, "--modes must be >= 1");
    detail::require(o.tol > 0.0, "--tol must be positive");
    detail::require(o.x >= 0.0 && o.x <= 1.0, "--x must lie in [0, 1]");
    c.N = o.N;
    c.M = o.M;
    c.r = parse_grading(o.r);
    c.T = o.T;
    c.modes = o.modes;
    c.tol = o.tol;
    c.out_dir = o.out;
    c.preset = parse_preset(o.preset);
    if (!o.phi.empty() || !o.psi.empty() || !o.f.empty()) {
        ProblemData d = preset_data(c.preset, c.orders);
        d.exact = nullptr;
        const ExprVars base{0.0, 0.0, c.orders.alpha, c.orders.beta};
        if (!o.phi.empty()) {
            auto e = Expression::parse(o.phi);
            d.phi = [e, base](double x) { ExprVars v = base; v.x = x; return e(v); };
        }
        if (!o.psi.empty()) {
            auto e = Expression::parse(o.psi);
            d.psi = [e, base](double x) { ExprVars v = base; v.x = x; return e(v); };
        }
        if (!o.f.empty()) {
            auto e = Expression::parse(o.f);
            d.f = [e, base](double x, double t) { ExprVars v = base; v.x = x; v.t = t; return e(v); };
        }
        c.data = d;
    }
    return c;
}

namespace detail {

inline std::filesystem::path out_path(const HarnessConfig& c, const std::string& name)
{
    return std::filesystem::path(c.out_dir) / name;
}

inline int run_solve_analytic(const HarnessConfig& c, double x, std::ostream& out)
{
    c.orders.require_admissible();
    const ProblemData d = c.problem_data();
    PdeProblem p;
    p.orders = c.orders;
    p.T = c.T;
    p.phi = d.phi;
    p.psi = d.psi;
    p.f = d.f;
    p.K_modes = c.modes;
    const PdeSeriesSolver solver(p);

    CsvTable table("analytic", {"t", "u", "tail_estimate"});
    nlohmann::json values = nlohmann::json::array();
    constexpr int steps = 20;
    SeriesEvaluation last;
    for (int j = 0; j <= steps; ++j) {
        const double t = c.T * j / steps;
        last = solver.evaluate(x, t, c.tol);
        table.row({format_double(t), format_double(last.value), format_double(last.tail_estimate)});
        values.push_back({{"t", t}, {"u", last.value}});
    }
    table.write(out_path(c, "analytic.csv"));
    nlohmann::json extra{{"x", x}, {"values", values}, {"tail_estimate", last.tail_estimate},
                         {"tail_bounded", last.tail_bounded}};
    if (!last.warning.empty()) extra["warning"] = last.warning;
    write_report(out_path(c, "report.json"), "solve-analytic", c, {}, extra);
    out << "solve-analytic: u(" << x << ", " << c.T << ") = " << format_double(last.value) << "\n";
    if (!last.warning.empty()) out << "warning: " << last.warning << "\n";
    return kExitOk;
}

inline int run_solve_fem(const HarnessConfig& c, std::ostream& out)
{
    const auto s = run(c.discrete());
    trace_table(s).write(out_path(c, "solve_fem.csv"));
    nlohmann::json extra{{"final_l2", s.l2.back()},
                         {"final_h1", s.h1.back()},
                         {"final_trace", s.trace.back()},
                         {"max_relative_residual", s.max_relative_residual}};
    if (!s.err_l2.empty()) {
        extra["max_l2_error"] = s.max_err_l2;
        extra["max_h1_error"] = s.max_err_h1;
    }
    write_report(out_path(c, "report.json"), "solve-fem", c, {}, extra);
    out << "solve-fem: u_h(0.5, " << c.T << ") = " << format_double(s.trace.back());
    if (!s.err_l2.empty())
        out << ", max L2 error " << format_double(s.max_err_l2) << ", max H1 error " << format_double(s.max_err_h1);
    out << "\n";
    return kExitOk;
}

inline Check round_trip_check(const HarnessConfig& c, nlohmann::json& extra)
{
    const auto rt = manufactured_round_trip(c.orders, {256, 512, 1024, 2048}, 20, 20240611u, c.T, c.r);
    extra["round_trip_errors"] = rt.max_error;
    Check chk{"manufactured_round_trip_monotone", rt.max_error.back(), -INFINITY, INFINITY, std::nullopt, rt.pass()};
    return chk;
}

inline int run_verify(const HarnessConfig& c, std::ostream& out)
{
    c.orders.require_admissible();
    nlohmann::json extra;
    std::vector<Check> checks{round_trip_check(c, extra)};
    const auto rep = run_table1(c);
    checks.insert(checks.end(), rep.checks.begin(), rep.checks.end());
    extra["max_l2_error"] = rep.l2;
    extra["max_h1_error"] = rep.h1;
    write_report(out_path(c, "report.json"), "verify", c, checks, extra);
    for (const auto& chk : checks)
        out << (chk.pass ? "PASS " : "FAIL ") << chk.name << " = " << format_double(chk.value) << "\n";
    return all_pass(checks) ? kExitOk : kExitCheckFailed;
}

inline int run_convergence(const HarnessConfig& c, std::ostream& out)
{
    c.orders.require_admissible();
    nlohmann::json extra;
    std::vector<Check> checks{round_trip_check(c, extra)};
    const auto ladder = run_table2(c);
    checks.insert(checks.end(), ladder.checks.begin(), ladder.checks.end());
    write_report(out_path(c, "report.json"), "convergence", c, checks, extra);
    for (const auto& row : ladder.rows) {
        out << row.kind << " N=" << row.N << " L2=" << format_double(row.l2) << " H1=" << format_double(row.h1);
        if (row.rate_l2) out << " rate_L2=" << format_double(*row.rate_l2);
        out << "\n";
    }
    return kExitOk;
}

inline int run_sweep_command(const HarnessConfig& c, std::ostream& out)
{
    const auto res = run_sweep(SweepGrid{}, c, true);
    int ok = 0, absent = 0, failed = 0;
    for (const auto& p : res.points) {
        if (p.status == SweepPoint::Status::ok) ++ok;
        else if (p.status == SweepPoint::Status::absent) ++absent;
        else ++failed;
    }
    write_report(out_path(c, "report.json"), "sweep", c, {},
                 nlohmann::json{{"points_ok", ok}, {"points_absent", absent}, {"points_failed", failed}});
    out << "sweep: " << ok << " points solved, " << absent << " outside the wedge, " << failed << " failed\n";
    return kExitOk;
}

} // namespace detail

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunOptions o;
    CLI::App app{"Solvers for the sequential Caputo fractional diffusion equation on (0,1).", "seqfrac"};
    app.set_config("--config", "", "Read options from a key = value file; command-line flags take precedence");
    app.add_option("--alpha", o.alpha, "Inner Caputo order alpha in (0,1)")->capture_default_str();
    app.add_option("--beta", o.beta, "Outer Caputo order beta in (0,1)")->capture_default_str();
    app.add_option("--N", o.N, "Number of time steps")->capture_default_str();
    app.add_option("--M", o.M, "Number of finite elements")->capture_default_str();
    app.add_option("--r", o.r, "Time-mesh grading exponent >= 1, or 'auto' for 2 - min(alpha, beta)")
        ->capture_default_str();
    app.add_option("--T", o.T, "Final time")->capture_default_str();
    app.add_option("--modes", o.modes, "Number of eigenmodes in the analytic series")->capture_default_str();
    app.add_option("--tol", o.tol, "Solver tolerance")->capture_default_str();
    app.add_option("--out", o.out, "Output directory")->capture_default_str();
    app.add_option("--preset", o.preset, "Problem data: example1 (manufactured), mode1 (sin(pi x) decay), zero")
        ->capture_default_str();
    app.add_option("--phi", o.phi, "Initial value phi(x) as an expression in x (overrides the preset)");
    app.add_option("--psi", o.psi, "Initial value of D^alpha u, psi(x), as an expression in x");
    app.add_option("--f", o.f, "Source f(x, t) as an expression in x and t");
    app.add_option("--x", o.x, "Abscissa for solve-analytic output")->capture_default_str();

    const std::vector<std::pair<std::string, std::string>> commands{
        {"solve-analytic", "Evaluate the eigenfunction-series solution u(x, t) on 21 equispaced times"},
        {"solve-fem", "Run the L1 finite-element scheme and write the midpoint trace with L2/H1 norms"},
        {"verify", "Manufactured-solution error check at the given N, M, r against the reference error band"},
        {"convergence", "Uniform versus graded time meshes over N = 100, 200, 400 with observed rates"},
        {"sweep", "Midpoint value Q = u_h(0.5, 0.5) over an (alpha, beta) grid plus per-point traces"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->fallthrough()->callback([&o, n = name] { o.command = n; });
    }
    app.require_subcommand(1, 1);
    app.footer("Exit status: 0 success, 1 invalid input, 2 failed verification.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    try {
        const HarnessConfig c = make_config(o);
        CsvTable::ensure_directory(c.out_dir);
        if (o.command == "solve-analytic") return detail::run_solve_analytic(c, o.x, out);
        if (o.command == "solve-fem") return detail::run_solve_fem(c, out);
        if (o.command == "verify") return detail::run_verify(c, out);
        if (o.command == "convergence") return detail::run_convergence(c, out);
        if (o.command == "sweep") return detail::run_sweep_command(c, out);
        err << "error: no command given\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

} // namespace seqfrac::cli
