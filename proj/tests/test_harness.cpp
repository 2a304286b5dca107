#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "padic_expsums/errors.hpp"
#include "padic_expsums/harness.hpp"

using namespace padic;

namespace {

SweepConfig small()
{
    SweepConfig cfg;
    cfg.primes = {3};
    cfg.n_min = 2;
    cfg.n_max = 3;
    return cfg;
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("csv layout")
{
    ResultRow row;
    row.suite = "x";
    row.check = "a, \"quoted\" check";
    row.p = 3;
    row.value = cplx{0.1, -2.0};
    row.abs_diff = 1.0 / 3.0;
    row.verdict = Verdict::Excluded;
    const auto lines = lines_of(render_rows({row}, OutputFormat::Csv));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "# padic-expsums schema v1");
    CHECK(lines[1].rfind("suite,check,p,n,r,", 0) == 0);
    CHECK(lines[2].find("\"a, \"\"quoted\"\" check\"") != std::string::npos);
    CHECK(lines[2].find("0.10000000000000001,-2") != std::string::npos);
    CHECK(lines[2].find("0.33333333333333331") != std::string::npos);
    CHECK(lines[2].find("regime-excluded") != std::string::npos);
}

TEST_CASE("json lines mirror the csv columns")
{
    const auto rows = run_suite("postnikov", small());
    const auto lines = lines_of(render_rows(rows, OutputFormat::Json));
    REQUIRE(lines.size() == rows.size());
    for (const auto& line : lines) {
        const auto j = nlohmann::json::parse(line);
        REQUIRE(j.size() == csv_columns().size());
        for (const auto& col : csv_columns()) CHECK(j.contains(col));
        CHECK(j["suite"] == "postnikov");
        CHECK(j["verdict"] == "pass");
    }
}

TEST_CASE("config precedence and parsing")
{
    SweepConfig cfg;
    const std::string path = "harness_test.cfg";
    {
        std::ofstream out(path);
        out << "# comment\nseed = 11\nprimes = 3, 5\nformat = json\n\ntolerance = 1e-4  # trailing\n";
    }
    load_config_file(path, cfg);
    CHECK(cfg.seed == 11);
    CHECK(cfg.primes == std::vector<u64>{3, 5});
    CHECK(cfg.format == OutputFormat::Json);
    CHECK(*cfg.tolerance == doctest::Approx(1e-4));
    apply_setting(cfg, "seed", "12");
    CHECK(cfg.seed == 12);
    CHECK_THROWS_AS(apply_setting(cfg, "colour", "blue"), InvalidArgument);
    CHECK_THROWS_AS(apply_setting(cfg, "seed", "twelve"), InvalidArgument);
    CHECK_THROWS_AS(apply_setting(cfg, "format", "xml"), InvalidArgument);
    CHECK_THROWS_AS(load_config_file("does/not/exist.cfg", cfg), InvalidArgument);
    std::remove(path.c_str());

    setenv("PADIC_EXPSUMS_BUDGET", "12345", 1);
    CHECK(default_budget() == doctest::Approx(12345));
    setenv("PADIC_EXPSUMS_BUDGET", "nonsense", 1);
    CHECK(default_budget() == doctest::Approx(1e8));
    unsetenv("PADIC_EXPSUMS_BUDGET");
    CHECK(default_budget() == doctest::Approx(1e8));
}

TEST_CASE("budget is checked before any work")
{
    SweepConfig cfg;
    cfg.budget = 1;
    CHECK_THROWS_AS(run_suite("all", cfg), BudgetExceeded);
    CHECK_THROWS_AS(run_measurement("cancellation", cfg), BudgetExceeded);
    CHECK(suite_cost("all", SweepConfig{}) > 1);
    CHECK_THROWS_AS(run_suite("nope", SweepConfig{}), InvalidArgument);
    cfg = SweepConfig{};
    cfg.workers = 0;
    CHECK_THROWS_AS(run_suite("postnikov", cfg), InvalidArgument);
}

TEST_CASE("suites pass on small grids")
{
    for (const auto& name : suite_names()) {
        CAPTURE(name);
        const auto rows = run_suite(name, small());
        CHECK_FALSE(rows.empty());
        CHECK(summarize(rows).fail == 0);
    }
}

TEST_CASE("output does not depend on worker count or run")
{
    for (const auto& name : {"kloosterman", "gsum", "csupport", "reciprocity"}) {
        SweepConfig a = small();
        a.seed = 5;
        SweepConfig b = a;
        b.workers = 3;
        const std::string one = render_rows(run_suite(name, a), OutputFormat::Csv);
        CHECK(one == render_rows(run_suite(name, a), OutputFormat::Csv));
        CHECK(one == render_rows(run_suite(name, b), OutputFormat::Csv));
    }
    SweepConfig a = small();
    a.seed = 1;
    SweepConfig b = small();
    b.seed = 2;
    a.exhaustive_threshold = b.exhaustive_threshold = 0;
    CHECK(render_rows(run_suite("kloosterman", a), OutputFormat::Csv) !=
          render_rows(run_suite("kloosterman", b), OutputFormat::Csv));
}

TEST_CASE("measurements")
{
    SweepConfig cfg;
    cfg.primes = {3};
    cfg.n_max = 4;
    const auto rows = run_measurement("cancellation", cfg);
    bool saw_max = false;
    for (const auto& r : rows)
        if (r.check == "max ratio") {
            saw_max = true;
            CHECK(std::isfinite(*r.ratio));
        }
    CHECK(saw_max);

    const auto sdt = run_measurement("sdt-constant", SweepConfig{});
    const auto constants = sdt_constants(sdt);
    CHECK(constants.size() >= 6 * 2);
    for (const auto& c : constants) CHECK(c.constant > 0);
}

TEST_CASE("adjacent stability")
{
    CHECK(adjacent_stable({{2, 1.0}, {3, 1.9}, {4, 1.0}}));
    CHECK_FALSE(adjacent_stable({{2, 1.0}, {3, 2.1}}));
    CHECK(adjacent_stable({{2, 0.0}, {3, 0.0}}));
    CHECK_FALSE(adjacent_stable({{2, 0.0}, {3, 1.0}}));
    CHECK(adjacent_stable({{2, 1.0}, {4, 5.0}}));
}

TEST_CASE("summary line")
{
    std::vector<ResultRow> rows(3);
    rows[1].verdict = Verdict::Fail;
    rows[2].verdict = Verdict::Excluded;
    CHECK(summary_line("verify x", summarize(rows)) == "verify x: pass=1 fail=1 regime-excluded=1");
}
