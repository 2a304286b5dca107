#pragma once

// Verification suites, measurement sweeps and their CSV / JSON-lines output.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "padic_expsums/modarith.hpp"
#include "padic_expsums/phase.hpp"

namespace padic {

enum class OutputFormat { Csv, Json };

struct SweepConfig {
    /// Empty: each suite's own grid.
    std::vector<u64> primes;
    unsigned n_min = 0;  // 0: suite default
    unsigned n_max = 0;
    unsigned r_min = 0;
    unsigned r_max = 0;
    std::vector<u64> c_list;  // empty: {1, 2}
    /// "one" (d = 1), "c" (d = c) or "all" (every divisor of c).
    std::string d_rule = "one";
    /// Grids with at most this many points are walked exhaustively, larger
    /// ones are sampled.
    u64 exhaustive_threshold = 4096;
    /// Random points per grid cell when sampling; 0 means the suite default.
    u64 samples = 0;
    /// Cap on (l1, l2) pairs per (p, n, r) in the C sums.
    u64 max_pairs = 16;
    u64 seed = 0;
    double budget = 1e8;
    /// Absolute tolerance override for every floating comparison.
    std::optional<double> tolerance;
    unsigned workers = 1;
    OutputFormat format = OutputFormat::Csv;
};

/// Flat key = value file, '#' starts a comment. Unknown keys are an error.
void load_config_file(const std::string& path, SweepConfig& cfg);
/// Applies a single key = value setting, as read from a config file.
void apply_setting(SweepConfig& cfg, const std::string& key, const std::string& value);
/// Default budget: PADIC_EXPSUMS_BUDGET when set and valid, else 1e8.
double default_budget();

enum class Verdict { Pass, Fail, Excluded };
const char* to_string(Verdict v);

struct ResultRow {
    std::string suite;
    std::string check;
    std::optional<i64> p, n, r, k, c, d, a, b, m, l, l1, l2, mt, member;
    std::optional<cplx> value;
    std::optional<cplx> oracle;
    std::optional<double> abs_diff;
    std::optional<double> tolerance;
    std::optional<double> bound;
    std::optional<double> ratio;
    Verdict verdict = Verdict::Pass;
    std::string note;
};

struct Summary {
    u64 pass = 0;
    u64 fail = 0;
    u64 excluded = 0;
};
Summary summarize(const std::vector<ResultRow>& rows);
std::string summary_line(const std::string& what, const Summary& s);

/// Writes the schema comment and header (CSV) followed by every row. Floats use
/// 17 significant digits.
void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format);
std::string render_rows(const std::vector<ResultRow>& rows, OutputFormat format);
const std::vector<std::string>& csv_columns();

const std::vector<std::string>& suite_names();        // without "all"
const std::vector<std::string>& measurement_names();

/// Estimated summand evaluations for a suite or measurement under cfg.
double suite_cost(const std::string& name, const SweepConfig& cfg);
double measurement_cost(const std::string& name, const SweepConfig& cfg);

/// Runs one suite, or every suite in order for "all". BudgetExceeded before any
/// work when the estimate is over cfg.budget; InvalidArgument for unknown names.
std::vector<ResultRow> run_suite(const std::string& name, const SweepConfig& cfg);
std::vector<ResultRow> run_measurement(const std::string& name, const SweepConfig& cfg);

/// Per-family empirical constants from the sdt-constant rows: the max ratio at
/// each (family, p, n), and whether adjacent n stay within a factor of 2.
struct SdtConstant {
    std::string family;
    u64 p = 0;
    std::vector<std::pair<unsigned, double>> max_ratio_by_n;
    double constant = 0.0;
    bool stable = true;
    bool contract_held = true;
};
std::vector<SdtConstant> sdt_constants(const std::vector<ResultRow>& rows);

/// Adjacent-n ratio test for a (n, value) series: max/min <= factor for every
/// consecutive pair. Zero entries only pass against zero.
bool adjacent_stable(const std::vector<std::pair<unsigned, double>>& series, double factor = 2.0);

}  // namespace padic
