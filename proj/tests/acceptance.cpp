// Runs every acceptance criterion at full size and prints one PASS/FAIL line each.
// Exit status is 0 only when all of them pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "padic_expsums/characters.hpp"
#include "padic_expsums/errors.hpp"
#include "padic_expsums/harness.hpp"

using namespace padic;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SweepConfig base(unsigned workers)
{
    SweepConfig cfg;
    cfg.budget = 1e13;
    cfg.workers = workers;
    return cfg;
}

SweepConfig cells(unsigned workers, u64 p, unsigned n_min, unsigned n_max)
{
    SweepConfig cfg = base(workers);
    cfg.primes = {p};
    cfg.n_min = n_min;
    cfg.n_max = n_max;
    return cfg;
}

void append(std::vector<ResultRow>& out, std::vector<ResultRow> rows)
{
    for (auto& r : rows) out.push_back(std::move(r));
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string counts(const std::vector<ResultRow>& rows)
{
    const Summary s = summarize(rows);
    return "pass=" + std::to_string(s.pass) + " fail=" + std::to_string(s.fail) +
           " excluded=" + std::to_string(s.excluded);
}

std::string first_failure(const std::vector<ResultRow>& rows)
{
    for (const auto& r : rows)
        if (r.verdict == Verdict::Fail) {
            std::ostringstream os;
            os << "; first failure: " << r.check;
            if (r.p) os << " p=" << *r.p;
            if (r.n) os << " n=" << *r.n;
            if (r.abs_diff) os << " diff=" << fmt(*r.abs_diff);
            if (!r.note.empty()) os << " (" << r.note << ")";
            return os.str();
        }
    return "";
}

unsigned workers = 4;

Outcome postnikov()
{
    std::vector<ResultRow> rows;
    for (auto [p, lo, hi] : {std::tuple<u64, unsigned, unsigned>{3, 2, 7}, {5, 2, 5}, {7, 2, 4}}) {
        SweepConfig cfg = cells(workers, p, lo, hi);
        cfg.samples = 20;
        append(rows, run_suite("postnikov", cfg));
    }
    std::map<std::pair<i64, i64>, u64> moduli;
    for (const auto& r : rows) ++moduli[{*r.p, *r.n}];
    // at least 20 characters per modulus, or all of them when there are fewer
    bool covered = moduli.size() == 13;
    for (const auto& [key, count] : moduli) {
        const u64 available = primitive_indices(static_cast<u64>(key.first), static_cast<unsigned>(key.second)).size();
        if (count < std::min<u64>(20, available)) covered = false;
    }
    const Summary s = summarize(rows);
    return {s.fail == 0 && s.excluded == 0 && covered,
            std::to_string(moduli.size()) + " moduli, " + std::to_string(rows.size()) +
                " characters, every m = 1 mod p; " + counts(rows) + first_failure(rows)};
}

Outcome kloosterman()
{
    std::vector<ResultRow> rows;
    u64 exhaustive = 0, sampled = 0;
    for (auto [p, lo, hi] : {std::tuple<u64, unsigned, unsigned>{3, 2, 6}, {5, 2, 4}, {7, 2, 3}}) {
        SweepConfig cfg = cells(workers, p, lo, hi);
        cfg.exhaustive_threshold = u64{1} << 40;
        auto part = run_suite("kloosterman", cfg);
        exhaustive += part.size();
        append(rows, std::move(part));
    }
    // 1000 seeded pairs at every p^n <= 10^5
    for (auto [p, hi] : {std::pair<u64, unsigned>{3, 10}, {5, 7}, {7, 5}, {11, 4}, {13, 4}}) {
        SweepConfig cfg = cells(workers, p, 2, hi);
        cfg.exhaustive_threshold = 0;
        cfg.samples = 1000;
        cfg.seed = 20261016;
        auto part = run_suite("kloosterman", cfg);
        sampled += part.size();
        append(rows, std::move(part));
    }
    const Summary s = summarize(rows);
    return {s.fail == 0 && s.excluded == 0 && sampled == 1000 * 25,
            std::to_string(exhaustive) + " exhaustive and " + std::to_string(sampled) + " sampled pairs; " +
                counts(rows) + first_failure(rows)};
}

Outcome statphase()
{
    std::vector<ResultRow> rows;
    for (auto [p, lo, hi] : {std::tuple<u64, unsigned, unsigned>{3, 2, 5}, {5, 2, 4}, {7, 2, 3}})
        append(rows, run_suite("statphase", cells(workers, p, lo, hi)));
    std::set<std::string> families;
    std::map<std::string, u64> excluded;
    for (const auto& r : rows) {
        families.insert(r.check);
        if (r.verdict == Verdict::Excluded) ++excluded[r.check + " p=" + std::to_string(*r.p) + " n=" + std::to_string(*r.n)];
    }
    std::string ex;
    for (const auto& [k, v] : excluded) ex += "; excluded " + std::to_string(v) + " " + k;
    const Summary s = summarize(rows);
    return {s.fail == 0 && s.pass > 0 && families.size() >= 6,
            std::to_string(families.size()) + " reduction/battery kinds; " + counts(rows) + ex + first_failure(rows)};
}

Outcome gsum()
{
    std::vector<ResultRow> rows;
    for (auto [p, lo, hi] : {std::tuple<u64, unsigned, unsigned>{3, 2, 5}, {5, 2, 5}, {7, 2, 4}}) {
        SweepConfig cfg = cells(workers, p, lo, hi);
        cfg.samples = 50;
        cfg.c_list = {1, 2};
        append(rows, run_suite("gsum", cfg));
    }
    u64 literal = 0;
    std::map<std::tuple<i64, i64, i64>, u64> closed_points;
    bool calibrated = false;
    std::string cal_note;
    for (const auto& r : rows) {
        if (r.check == "closed form calibration") {
            calibrated = r.verdict == Verdict::Pass;
            cal_note = r.note;
        } else if (r.check.rfind("triple sum", 0) == 0 || r.check.rfind("Gauss-normalized", 0) == 0) {
            ++literal;
        } else if (r.verdict == Verdict::Pass) {
            ++closed_points[{*r.p, *r.n, *r.r}];
        }
    }
    // p = 3, n = 3 only contributes its predicted zeros
    u64 full = 0;
    for (const auto& [key, count] : closed_points)
        if (count >= 100) ++full;
    const Summary s = summarize(rows);
    return {s.fail == 0 && calibrated && literal == 2 * 4 * 2 * 36 && full == 10 + 10 + 6 - 2,
            std::to_string(literal) + " literal-sum rows at 3^2, " + std::to_string(full) +
                " (p, n, r) cells with >= 100 passing points; " + counts(rows) +
                " (excluded: p=3, n=3 has no valid step); " +
                cal_note + first_failure(rows)};
}

Outcome czero()
{
    SweepConfig cfg = base(workers);
    cfg.primes = {3, 5, 7};
    cfg.n_min = 2;
    cfg.n_max = 4;
    cfg.r_min = 2;
    cfg.r_max = 3;
    const auto rows = run_suite("czero", cfg);
    std::set<std::tuple<i64, i64, i64>> exact_cells;
    for (const auto& r : rows)
        if (r.verdict == Verdict::Pass) exact_cells.insert({*r.p, *r.n, *r.r});
    const Summary s = summarize(rows);
    return {s.fail == 0 && exact_cells.size() == 3,
            std::to_string(exact_cells.size()) + " exact (p, n, r) cells with r < n; " + counts(rows) +
                " (excluded rows have r = n)" + first_failure(rows)};
}

Outcome support()
{
    SweepConfig cfg = base(workers);
    cfg.primes = {3, 5};
    cfg.n_min = 2;
    cfg.n_max = 4;
    cfg.max_pairs = 24;
    const auto rows = run_suite("csupport", cfg);
    u64 off_support = 0, off_support_ok = 0;
    std::set<i64> primes;
    for (const auto& r : rows) {
        if (r.check != "predicted zero") continue;
        const i64 step = static_cast<i64>(std::llround(std::pow(static_cast<double>(*r.p), *r.n - *r.r)));
        if (*r.mt % step == 0) continue;
        ++off_support;
        if (r.verdict == Verdict::Pass) {
            ++off_support_ok;
            primes.insert(*r.p);
        }
    }
    const Summary s = summarize(rows);
    return {s.fail == 0 && off_support >= 500 && off_support_ok == off_support && primes.size() == 2,
            std::to_string(off_support_ok) + "/" + std::to_string(off_support) +
                " points with p^{n-r} not dividing mt vanish; whole suite " + counts(rows) + first_failure(rows)};
}

Outcome bound_law(std::vector<ResultRow>& sweep_rows)
{
    std::vector<ResultRow> rows;
    for (auto [p, lo, hi] : {std::tuple<u64, unsigned, unsigned>{3, 2, 5}, {5, 2, 4}}) {
        SweepConfig cfg = cells(workers, p, lo, hi);
        cfg.max_pairs = 64;
        append(rows, run_measurement("cancellation", cfg));
    }
    bool ok = summarize(rows).fail == 0;
    std::string series;
    u64 stable_rows = 0;
    for (const auto& r : rows) {
        if (r.check == "max ratio" && !(r.ratio && std::isfinite(*r.ratio))) ok = false;
        if (r.check == "max ratio stable in n") {
            ++stable_rows;
            ok = ok && r.verdict == Verdict::Pass;
            series += " p=" + std::to_string(*r.p) + " [" + r.note + "]";
        }
    }
    sweep_rows = rows;
    return {ok && stable_rows == 2, "max |C| / p^{n+(r+omega)/2} by n:" + series + first_failure(rows)};
}

Outcome sdt()
{
    SweepConfig cfg = base(workers);
    cfg.primes = {3, 5, 7};
    cfg.n_min = 2;
    cfg.n_max = 5;
    const auto rows = run_measurement("sdt-constant", cfg);
    const auto constants = sdt_constants(rows);
    std::map<std::string, double> per_family;
    bool ok = !constants.empty();
    std::string unstable;
    for (const auto& c : constants) {
        per_family[c.family] = std::max(per_family[c.family], c.constant);
        if (!c.stable) {
            ok = false;
            unstable += " " + c.family + "@" + std::to_string(c.p);
        }
    }
    // every member under its family's single constant
    for (const auto& r : rows)
        if (r.member && r.ratio && !(*r.ratio <= per_family[r.check])) ok = false;
    std::string list;
    for (const auto& [family, c] : per_family) list += " " + family + "=" + fmt(c);
    return {ok && per_family.size() >= 6,
            "C_emp per battery:" + list + (unstable.empty() ? "" : "; unstable:" + unstable)};
}

Outcome determinism()
{
    std::vector<std::string> diffs;
    auto check = [&](const std::string& what, const std::function<std::vector<ResultRow>(unsigned)>& run) {
        const std::string a = render_rows(run(1), OutputFormat::Csv);
        const std::string b = render_rows(run(1), OutputFormat::Csv);
        const std::string c = render_rows(run(4), OutputFormat::Csv);
        const std::string j1 = render_rows(run(1), OutputFormat::Json);
        const std::string j4 = render_rows(run(4), OutputFormat::Json);
        if (a != b || a != c || j1 != j4) diffs.push_back(what);
    };
    check("verify all", [](unsigned w) {
        SweepConfig cfg = base(w);
        cfg.seed = 7;
        return run_suite("all", cfg);
    });
    for (const auto& m : measurement_names())
        check("sweep " + m, [&](unsigned w) {
            SweepConfig cfg = base(w);
            cfg.seed = 7;
            return run_measurement(m, cfg);
        });
    std::string d;
    for (const auto& x : diffs) d += " " + x;
    return {diffs.empty(), diffs.empty() ? "verify all and every sweep byte-identical across two runs and workers {1, 4}, csv and json"
                                         : "differs:" + d};
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc > 1) workers = static_cast<unsigned>(std::stoul(argv[1]));
    std::vector<ResultRow> sweep_rows;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 postnikov exactness", postnikov},
        {"2 kloosterman closed form", kloosterman},
        {"3 stationary-phase engine", statphase},
        {"4 G three-way agreement", gsum},
        {"5 diagonal evaluation", czero},
        {"6 support law", support},
        {"7 bound law", [&] { return bound_law(sweep_rows); }},
        {"8 second-derivative constants", sdt},
        {"9 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt(secs) << " s]"
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
