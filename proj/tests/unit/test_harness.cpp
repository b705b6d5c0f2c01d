#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "seqfrac/harness.hpp"

using namespace seqfrac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("seqfrac_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

HarnessConfig small_config(const fs::path& out)
{
    HarnessConfig cfg;
    cfg.N = 60;
    cfg.M = 32;
    cfg.out_dir = out.string();
    return cfg;
}

} // namespace

TEST(Manufactured, SecondDerivativeMatchesDifferences)
{
    const double h = 1e-4;
    for (double x : {0.1, 0.33, 0.5, 0.8}) {
        const double fd = (ManufacturedCase::g(x + h) - 2.0 * ManufacturedCase::g(x) + ManufacturedCase::g(x - h)) / (h * h);
        EXPECT_NEAR(ManufacturedCase::g_xx(x), fd, 1e-6) << "x=" << x;
    }
}

TEST(Manufactured, InitialData)
{
    const ManufacturedCase c{{0.8, 0.4}};
    EXPECT_DOUBLE_EQ(c.exact(0.3, 0.0), ManufacturedCase::g(0.3));
    EXPECT_DOUBLE_EQ(c.time_factor(1.0), 3.0);
    EXPECT_NEAR(c.psi(0.3), std::tgamma(1.8) * ManufacturedCase::g(0.3), 1e-15);
}

TEST(Manufactured, ForcingResidualShrinksWithN)
{
    const auto rep = manufactured_round_trip({0.8, 0.4}, {256, 512, 1024}, 10);
    ASSERT_EQ(rep.max_error.size(), 3u);
    EXPECT_TRUE(rep.pass());
    EXPECT_LT(rep.max_error.back(), 1e-3);
    EXPECT_THROW(manufactured_round_trip({0.8, 0.4}, {100}), DomainError);
}

TEST(Manufactured, GradedErrorAtN200)
{
    const auto s = run(ManufacturedCase{{0.8, 0.4}}.discrete(1.0, 200, 200, 1.6));
    EXPECT_NEAR(s.max_err_l2, 3.824e-6, 0.05e-6);
}

TEST(Manufactured, ExactSolutionComparedWithItselfHasNoError)
{
    auto p = ManufacturedCase{{0.8, 0.4}}.discrete(1.0, 4, 16, 1.6);
    p.exact = [](double, double) { return 0.0; };
    p.phi = [](double) { return 0.0; };
    p.psi = [](double) { return 0.0; };
    p.f = nullptr;
    const auto s = run(p);
    EXPECT_EQ(s.max_err_l2, 0.0);
    EXPECT_EQ(s.max_err_h1, 0.0);
}

TEST(Rates, Arithmetic)
{
    const double e = 1e-3;
    EXPECT_NEAR(convergence_rate(4 * e, 2 * e, 100, 200), 1.0, 1e-14);
    EXPECT_NEAR(convergence_rate(2 * e, e, 200, 400), 1.0, 1e-14);
    EXPECT_NEAR(convergence_rate(8 * e, e, 1, 2), 3.0, 1e-14);
    EXPECT_THROW(convergence_rate(0.0, e), DomainError);
}

TEST(Tables, FirstTableIsGradedRowOfLadder)
{
    const auto dir = scratch("tables");
    HarnessConfig cfg;
    cfg.out_dir = dir.string();
    cfg.N = 200;
    const auto t1 = run_table1(cfg);
    const auto ladder = run_table2(cfg, {100, 200});
    EXPECT_EQ(t1.l2, ladder.find("graded", 200).l2);
    EXPECT_EQ(t1.h1, ladder.find("graded", 200).h1);
    EXPECT_TRUE(fs::exists(dir / "table1.csv"));
    EXPECT_TRUE(fs::exists(dir / "table2.csv"));
    EXPECT_EQ(slurp(dir / "table2.csv").rfind("# seqfrac-csv v1 table2\n", 0), 0u);
    EXPECT_THROW(ladder.find("graded", 400), DomainError);
}

TEST(Tables, CsvRowsMustMatchHeader)
{
    CsvTable t("demo", {"a", "b"});
    EXPECT_THROW(t.row({"1"}), DomainError);
    t.row({"1", "2"});
    EXPECT_EQ(t.str(), "# seqfrac-csv v1 demo\na,b\n1,2\n");
}

TEST(Traces, InadmissiblePairsAreSkipped)
{
    const auto dir = scratch("wedge");
    auto cfg = small_config(dir);
    cfg.preset = Preset::mode1;
    const auto out = run_traces({0.5, 0.8}, {0.4, 0.6}, cfg);
    ASSERT_EQ(out.size(), 4u);
    int written = 0;
    for (const auto& o : out) {
        EXPECT_EQ(o.admissible, o.orders.admissible());
        if (o.admissible) {
            EXPECT_TRUE(fs::exists(o.file));
            ++written;
        } else {
            EXPECT_FALSE(o.message.empty());
        }
    }
    EXPECT_EQ(written, 2);
    EXPECT_TRUE(fs::exists(dir / "traces" / "0.80_0.60.csv"));
}

TEST(Traces, HomogeneousModeDecays)
{
    auto cfg = small_config(scratch("decay"));
    cfg.orders = {0.8, 0.6};
    cfg.preset = Preset::mode1;
    const auto s = run(cfg.discrete());
    EXPECT_DOUBLE_EQ(s.trace.front(), 1.0);
    EXPECT_LT(std::fabs(s.trace.back()), 0.5 * s.trace.front());
}

TEST(Traces, ZeroDataGivesZeroTrace)
{
    auto cfg = small_config(scratch("zero"));
    cfg.preset = Preset::zero;
    const auto s = run(cfg.discrete());
    for (double v : s.trace) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(s.max_err_l2, 0.0);
}

TEST(Traces, ManufacturedTraceFollowsExactSolution)
{
    HarnessConfig cfg;
    const auto s = run(cfg.discrete());
    const ManufacturedCase c{cfg.orders};
    for (int n = 0; n <= s.levels(); n += 40) EXPECT_NEAR(s.trace[n], c.exact(0.5, s.mesh.t[n]), 1e-4);
}

TEST(Traces, ManufacturedTraceIncreases)
{
    HarnessConfig cfg;
    cfg.N = 100;
    const auto s = run(cfg.discrete());
    for (int n = 1; n <= s.levels(); ++n) EXPECT_GT(s.trace[n], s.trace[n - 1]) << "n=" << n;
}

TEST(Sweep, GridAndStatus)
{
    const auto dir = scratch("sweep");
    auto cfg = small_config(dir);
    cfg.preset = Preset::mode1;
    const SweepGrid grid{0.55, 0.75, 0.1};
    ASSERT_EQ(grid.values(), (std::vector<double>{0.55, 0.65, 0.75}));
    const auto res = run_sweep(grid, cfg);
    ASSERT_EQ(res.points.size(), 9u);
    for (const auto& p : res.points) {
        const auto expected = p.orders.admissible() ? SweepPoint::Status::ok : SweepPoint::Status::absent;
        EXPECT_EQ(p.status, expected) << pair_label(p.orders);
    }
    EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
    EXPECT_THROW((SweepGrid{0.5, 1.0, 0.1}.values()), DomainError);
}

TEST(Sweep, NeighbouringValuesAreClose)
{
    auto cfg = small_config(scratch("continuity"));
    cfg.preset = Preset::mode1;
    const auto res = run_sweep({0.80, 0.90, 0.025}, cfg);
    int compared = 0;
    for (const auto& p : res.points)
        for (const auto& q : res.points) {
            if (p.status != SweepPoint::Status::ok || q.status != SweepPoint::Status::ok) continue;
            const double da = std::fabs(p.orders.alpha - q.orders.alpha), db = std::fabs(p.orders.beta - q.orders.beta);
            if (std::fabs(da + db - 0.025) > 1e-9) continue;
            EXPECT_LT(std::fabs(p.Q - q.Q), 0.1) << pair_label(p.orders) << " vs " << pair_label(q.orders);
            ++compared;
        }
    EXPECT_GT(compared, 10);
}

TEST(Output, RepeatedRunsAreByteIdentical)
{
    const auto a = scratch("repeat_a"), b = scratch("repeat_b");
    for (const auto& dir : {a, b}) {
        auto cfg = small_config(dir);
        cfg.preset = Preset::mode1;
        run_sweep({0.6, 0.8, 0.1}, cfg, true);
        run_table1(small_config(dir));
    }
    for (const char* name : {"sweep.csv", "table1.csv", "traces/0.80_0.60.csv"})
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Output, ReportEchoesConfiguration)
{
    const auto dir = scratch("report");
    auto cfg = small_config(dir);
    cfg.r = std::nullopt;
    write_report(dir / "report.json", "demo", cfg, {Check::within("x", 1.0, 0.0, 2.0)});
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(j["command"], "demo");
    EXPECT_EQ(j["config"]["r"], "auto");
    EXPECT_DOUBLE_EQ(j["config"]["r_resolved"].get<double>(), 1.6);
    EXPECT_EQ(j["config"]["N"], 60);
    EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Presets, Parsing)
{
    EXPECT_EQ(parse_preset("mode1"), Preset::mode1);
    EXPECT_EQ(to_string(Preset::example1), "example1");
    EXPECT_THROW(parse_preset("nope"), DomainError);
}
