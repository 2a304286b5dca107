#include "padic_expsums/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "padic_expsums/characters.hpp"
#include "padic_expsums/expsums.hpp"
#include "padic_expsums/padic.hpp"
#include "padic_expsums/charsums.hpp"
#include "padic_expsums/parallel.hpp"
#include "padic_expsums/statphase.hpp"

namespace padic {

namespace {

u64 mix(u64 x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based draw: the value depends only on (seed, stream, index).
u64 draw(u64 seed, u64 stream, u64 index) { return mix(mix(seed ^ mix(stream)) + index); }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<u64> parse_u64_list(const std::string& v)
{
    std::vector<u64> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::size_t used = 0;
        unsigned long long x = 0;
        try {
            x = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("not a non-negative integer: '" + item + "'");
        }
        if (used != item.size()) throw InvalidArgument("not a non-negative integer: '" + item + "'");
        out.push_back(x);
    }
    return out;
}

u64 parse_u64(const std::string& v)
{
    auto xs = parse_u64_list(v);
    if (xs.size() != 1) throw InvalidArgument("expected one integer, got '" + v + "'");
    return xs[0];
}

double parse_double(const std::string& v)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + v + "'");
    }
    if (used != v.size()) throw InvalidArgument("not a number: '" + v + "'");
    return x;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Cell {
    u64 p;
    unsigned n;
};

std::vector<Cell> range_cells(std::initializer_list<std::tuple<u64, unsigned, unsigned>> ranges)
{
    std::vector<Cell> out;
    for (auto [p, lo, hi] : ranges)
        for (unsigned n = lo; n <= hi; ++n) out.push_back({p, n});
    return out;
}

// The suite's own cells unless the config names primes or an n range.
std::vector<Cell> cells_for(const SweepConfig& cfg, const std::vector<Cell>& defaults, double max_q, unsigned min_n = 2)
{
    if (cfg.primes.empty() && cfg.n_min == 0 && cfg.n_max == 0) return defaults;
    std::vector<u64> primes = cfg.primes;
    if (primes.empty()) {
        for (const auto& c : defaults)
            if (std::find(primes.begin(), primes.end(), c.p) == primes.end()) primes.push_back(c.p);
    }
    unsigned lo = cfg.n_min, hi = cfg.n_max;
    if (lo == 0) {
        lo = 100;
        for (const auto& c : defaults) lo = std::min(lo, c.n);
    }
    if (hi == 0) {
        hi = 0;
        for (const auto& c : defaults) hi = std::max(hi, c.n);
    }
    lo = std::max(lo, min_n);
    std::vector<Cell> out;
    for (u64 p : primes) {
        if (p < 3 || !is_prime(p)) throw InvalidArgument("primes must be odd primes, got " + std::to_string(p));
        for (unsigned n = lo; n <= hi; ++n)
            if (std::pow(static_cast<double>(p), n) <= max_q) out.push_back({p, n});
    }
    return out;
}

std::vector<u64> c_values(const SweepConfig& cfg)
{
    return cfg.c_list.empty() ? std::vector<u64>{1, 2} : cfg.c_list;
}

std::vector<u64> d_values(const SweepConfig& cfg, u64 c)
{
    if (cfg.d_rule == "one") return {1};
    if (cfg.d_rule == "c") return {c};
    if (cfg.d_rule == "all") return divisors(c);
    throw InvalidArgument("d_rule must be one, c or all");
}

std::pair<unsigned, unsigned> r_bounds(const SweepConfig& cfg, unsigned lo, unsigned hi)
{
    if (cfg.r_min) lo = std::max(lo, cfg.r_min);
    if (cfg.r_max) hi = std::min(hi, cfg.r_max);
    return {lo, hi};
}

double tol_or(const SweepConfig& cfg, double fallback) { return cfg.tolerance ? *cfg.tolerance : fallback; }

double qd(u64 p, unsigned n) { return std::pow(static_cast<double>(p), n); }

std::vector<i64> units_below(u64 p, u64 m)
{
    std::vector<i64> out;
    for (u64 x = 1; x < m; ++x)
        if (x % p) out.push_back(static_cast<i64>(x));
    return out;
}

// `count` distinct picks out of `pool`, in pool order, keyed on (seed, stream).
template <class T>
std::vector<T> pick(const std::vector<T>& pool, u64 count, u64 seed, u64 stream)
{
    if (pool.size() <= count) return pool;
    std::vector<std::pair<u64, std::size_t>> keyed;
    for (std::size_t i = 0; i < pool.size(); ++i) keyed.emplace_back(draw(seed, stream, i), i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> idx;
    for (u64 j = 0; j < count; ++j) idx.push_back(keyed[j].second);
    std::sort(idx.begin(), idx.end());
    std::vector<T> out;
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

u64 stream_of(const std::string& name, u64 p, unsigned n, u64 extra = 0)
{
    u64 h = 1469598103934665603ull;
    for (char ch : name) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
    return mix(h ^ (p << 32) ^ (static_cast<u64>(n) << 16) ^ mix(extra));
}

ResultRow compare_row(std::string suite, std::string check, cplx value, cplx oracle, double tol)
{
    ResultRow row;
    row.suite = std::move(suite);
    row.check = std::move(check);
    row.value = value;
    row.oracle = oracle;
    row.abs_diff = std::abs(value - oracle);
    row.tolerance = tol;
    row.verdict = *row.abs_diff <= tol ? Verdict::Pass : Verdict::Fail;
    return row;
}

void flatten_into(std::vector<ResultRow>& out, std::vector<std::vector<ResultRow>>&& parts)
{
    for (auto& part : parts)
        for (auto& row : part) out.push_back(std::move(row));
}

// ---------------------------------------------------------------- postnikov

std::vector<Cell> postnikov_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 5}, {5, 2, 3}, {7, 2, 2}}), 1e6);
}

u64 postnikov_samples(const SweepConfig& cfg) { return cfg.samples ? cfg.samples : 20; }

double postnikov_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : postnikov_cells(cfg))
        total += static_cast<double>(postnikov_samples(cfg)) * (qd(c.p, c.n) + qd(c.p, c.n - 1) * c.n);
    return total;
}

std::vector<ResultRow> suite_postnikov(const SweepConfig& cfg)
{
    struct Item {
        Cell cell;
        u64 k;
    };
    std::vector<Item> items;
    for (auto cell : postnikov_cells(cfg))
        for (u64 k : pick(primitive_indices(cell.p, cell.n), postnikov_samples(cfg), cfg.seed,
                          stream_of("postnikov", cell.p, cell.n)))
            items.push_back({cell, k});
    return parallel_map(items.size(), cfg.workers, [&](std::size_t i) {
        const auto& it = items[i];
        ResultRow row;
        row.suite = "postnikov";
        row.check = "chi(m) = theta(alpha log m / p^n)";
        row.p = static_cast<i64>(it.cell.p);
        row.n = it.cell.n;
        row.k = static_cast<i64>(it.k);
        row.oracle = cplx{0.0, 0.0};
        row.tolerance = 0.0;
        try {
            MultChar chi(it.cell.p, it.cell.n, it.k);
            const u64 q = chi.modulus().value();
            u64 misses = 0;
            for (u64 m = 1; m < q; m += it.cell.p)
                if (!chi.postnikov_holds(m)) ++misses;
            row.value = cplx{static_cast<double>(misses), 0.0};
            row.abs_diff = static_cast<double>(misses);
            row.verdict = misses == 0 ? Verdict::Pass : Verdict::Fail;
            row.note = "alpha=" + std::to_string(chi.alpha().value()) + " classes=" + std::to_string(q / it.cell.p);
        } catch (const Error& e) {
            row.verdict = Verdict::Fail;
            row.note = e.what();
        }
        return row;
    });
}

// ---------------------------------------------------------------- kloosterman

std::vector<Cell> kloosterman_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 3}, {7, 2, 2}}), 1e6);
}

u64 kloosterman_samples(const SweepConfig& cfg) { return cfg.samples ? cfg.samples : 256; }

std::vector<std::pair<i64, i64>> kloosterman_pairs(const SweepConfig& cfg, Cell cell)
{
    const u64 q = checked_pow(cell.p, cell.n);
    const auto units = units_below(cell.p, q);
    const u64 total = static_cast<u64>(units.size()) * units.size();
    std::vector<std::pair<i64, i64>> out;
    if (total <= cfg.exhaustive_threshold) {
        for (i64 a : units)
            for (i64 b : units) out.emplace_back(a, b);
        return out;
    }
    const u64 stream = stream_of("kloosterman", cell.p, cell.n);
    for (u64 j = 0; j < kloosterman_samples(cfg); ++j) {
        const u64 h = draw(cfg.seed, stream, j);
        out.emplace_back(units[h % units.size()], units[mix(h) % units.size()]);
    }
    return out;
}

double kloosterman_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : kloosterman_cells(cfg)) {
        const double q = qd(c.p, c.n);
        const double units = q - q / static_cast<double>(c.p);
        const double pairs = units * units <= static_cast<double>(cfg.exhaustive_threshold)
                                 ? units * units
                                 : static_cast<double>(kloosterman_samples(cfg));
        total += pairs * (q + c.n);
    }
    return total;
}

std::vector<ResultRow> suite_kloosterman(const SweepConfig& cfg)
{
    std::vector<ResultRow> out;
    for (auto cell : kloosterman_cells(cfg)) {
        const PrimePowerModulus q(cell.p, cell.n);
        const auto inverses = inverse_table(q.value());
        const auto pairs = kloosterman_pairs(cfg, cell);
        const SqrtBranch branch = SqrtBranch::canonical(cell.p);
        const double tol = tol_or(cfg, 1e-6 * std::pow(static_cast<double>(cell.p), cell.n / 2.0));
        auto rows = parallel_map(pairs.size(), cfg.workers, [&](std::size_t i) {
            const auto [a, b] = pairs[i];
            const cplx brute = kloosterman_brute(a, b, q.value(), inverses).value;
            const cplx closed = kloosterman_closed(a, b, q, branch);
            ResultRow row = compare_row("kloosterman", "closed form vs brute force", closed, brute, tol);
            row.p = static_cast<i64>(cell.p);
            row.n = cell.n;
            row.a = a;
            row.b = b;
            return row;
        });
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------- gsum

bool gsum_wants_base(const SweepConfig& cfg)
{
    if (!cfg.primes.empty() && std::find(cfg.primes.begin(), cfg.primes.end(), 3) == cfg.primes.end()) return false;
    if (cfg.n_min > 2 || (cfg.n_max != 0 && cfg.n_max < 2)) return false;
    return true;
}

std::vector<Cell> gsum_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 3}, {7, 2, 2}}), 1e4);
}

u64 gsum_samples(const SweepConfig& cfg) { return cfg.samples ? cfg.samples : 16; }

double gsum_cost(const SweepConfig& cfg)
{
    double total = 0;
    if (gsum_wants_base(cfg)) total += 2.0 * 6 * 2 * 36 * (6 * 6 * 6);  // def and tau grids at 3^2
    total += 12 * 2 * 36 * 9.0;                                           // calibration
    for (auto c : gsum_cells(cfg)) {
        const double q = qd(c.p, c.n);
        for (unsigned r = 2; r <= c.n; ++r)
            total += static_cast<double>(c_values(cfg).size()) * (q * (c.n + 1) + gsum_samples(cfg) * 2 * q);
    }
    return total;
}

std::vector<ResultRow> suite_gsum(const SweepConfig& cfg)
{
    std::vector<ResultRow> out;
    const auto cs = c_values(cfg);
    if (gsum_wants_base(cfg)) {
        // the literal sums against the Kloosterman-product form, full grid at 3^2
        struct Item {
            u64 k, c;
            i64 m, l;
        };
        std::vector<Item> items;
        for (u64 k : primitive_indices(3, 2))
            for (u64 c : cs) {
                if (c % 3 == 0) continue;
                for (i64 m : units_below(3, 9))
                    for (i64 l : units_below(3, 9)) items.push_back({k, c, m, l});
            }
        const double tol = tol_or(cfg, 1e-6 * 4 * 3);
        auto rows = parallel_map(items.size(), cfg.workers, [&](std::size_t i) {
            const auto& it = items[i];
            MultChar chi(3, 2, it.k);
            GSumParams g{chi, 2, it.c, it.m, it.l};
            const cplx kl = G_kloosterman(g);
            std::vector<ResultRow> rows;
            rows.push_back(compare_row("gsum", "triple sum vs Kloosterman product", G_def(g), kl, tol));
            rows.push_back(compare_row("gsum", "Gauss-normalized sum vs chi(-1) Kloosterman product", G_tau(g),
                                       chi.value(-1) * kl, tol));
            for (auto& r : rows) {
                r.p = 3;
                r.n = 2;
                r.r = 2;
                r.k = static_cast<i64>(it.k);
                r.c = static_cast<i64>(it.c);
                r.m = it.m;
                r.l = it.l;
            }
            return rows;
        });
        flatten_into(out, std::move(rows));
    }

    const Calibration cal = calibrate(1e-9);
    {
        ResultRow row;
        row.suite = "gsum";
        row.check = "closed form calibration";
        row.p = 3;
        row.n = 2;
        row.r = 2;
        row.verdict = cal.selected ? Verdict::Pass : Verdict::Fail;
        std::ostringstream note;
        double printed_err = 0;
        for (const auto& cand : cal.candidates)
            if (cand.form == GClosedForm::AsPrinted) printed_err = std::max(printed_err, cand.max_error);
        bool printed_any = std::any_of(cal.candidates.begin(), cal.candidates.end(), [](const auto& c) {
            return c.form == GClosedForm::AsPrinted && c.matched;
        });
        if (cal.selected)
            note << "selected " << to_string(cal.selected->form) << " lift=" << cal.selected->alpha_lift
                 << " branch=" << cal.selected->branch_mask << " max_error=" << fmt(cal.selected->max_error) << "; ";
        else
            note << "no convention matched; ";
        note << "as-printed " << (printed_any ? "matched" : "unmatched") << " max_error=" << fmt(printed_err);
        row.note = note.str();
        if (cal.selected) row.abs_diff = cal.selected->max_error;
        row.tolerance = 1e-9;
        out.push_back(row);
    }
    const GClosedForm form = cal.selected ? cal.selected->form : GClosedForm::Corrected;
    const u64 lift = cal.selected ? cal.selected->alpha_lift : 0;
    const u64 mask = cal.selected ? cal.selected->branch_mask : 0;

    struct Group {
        Cell cell;
        unsigned r;
        u64 c;
    };
    std::vector<Group> groups;
    for (auto cell : gsum_cells(cfg)) {
        auto [rlo, rhi] = r_bounds(cfg, 2, cell.n);
        for (unsigned r = rlo; r <= rhi; ++r)
            for (u64 c : cs)
                if (c % cell.p) groups.push_back({cell, r, c});
    }
    auto parts = parallel_map(groups.size(), cfg.workers, [&](std::size_t gi) {
        const auto& g = groups[gi];
        const u64 p = g.cell.p;
        const unsigned n = g.cell.n;
        const u64 stream = stream_of("gsum", p, n, (static_cast<u64>(g.r) << 32) ^ g.c);
        const auto ks = primitive_indices(p, n);
        const u64 k = ks[draw(cfg.seed, stream, 0) % ks.size()];
        MultChar chi(p, n, k);
        GEvaluator ev(chi, g.r, g.c);
        const SqrtBranch branch = SqrtBranch::from_mask(p, mask % (u64{1} << SqrtBranch::canonical(p).class_count()));
        const auto m_units = units_below(p, checked_pow(p, n));
        const auto l_units = units_below(p, checked_pow(p, g.r));
        const bool valid = g_closed_valid(p, n);
        const double tol = tol_or(cfg, 1e-6 * 4 * std::pow(static_cast<double>(p), g.r / 2.0));
        std::vector<ResultRow> rows;
        for (u64 j = 0; j < gsum_samples(cfg); ++j) {
            const u64 h = draw(cfg.seed, stream, j + 1);
            const i64 m = m_units[h % m_units.size()];
            const i64 l = l_units[mix(h) % l_units.size()];
            GSumParams gp{chi, g.r, g.c, m, l};
            const cplx kl = ev.value(m, l);
            ResultRow row;
            if (g_vanishes_predicted(gp)) {
                row = compare_row("gsum", "predicted zero", kl, cplx{0.0, 0.0}, tol);
            } else {
                row = compare_row("gsum", "closed form vs Kloosterman product", G_closed(gp, form, branch, lift), kl,
                                  tol);
                if (!valid) {
                    row.verdict = Verdict::Excluded;
                    row.note = "no step kappa with 2 kappa <= n and 3 kappa >= n + iota";
                }
            }
            row.p = static_cast<i64>(p);
            row.n = n;
            row.r = g.r;
            row.k = static_cast<i64>(k);
            row.c = static_cast<i64>(g.c);
            row.m = m;
            row.l = l;
            rows.push_back(std::move(row));
        }
        return rows;
    });
    flatten_into(out, std::move(parts));
    return out;
}

// ---------------------------------------------------------------- czero

std::vector<Cell> czero_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 2}}), 81);
}

double czero_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : czero_cells(cfg)) {
        const double q = qd(c.p, c.n);
        for (unsigned r = 2; r <= std::min(3u, c.n); ++r) {
            const double units = qd(c.p, r) * (1 - 1.0 / c.p);
            total += static_cast<double>(c_values(cfg).size()) * (units * q * q + units * units * q);
        }
    }
    return total;
}

std::vector<ResultRow> suite_czero(const SweepConfig& cfg)
{
    struct Group {
        Cell cell;
        unsigned r;
        u64 c;
    };
    std::vector<Group> groups;
    for (auto cell : czero_cells(cfg)) {
        auto [rlo, rhi] = r_bounds(cfg, 2, std::min(3u, cell.n));
        for (unsigned r = rlo; r <= rhi; ++r)
            for (u64 c : c_values(cfg))
                if (c % cell.p) groups.push_back({cell, r, c});
    }
    std::vector<ResultRow> out;
    for (const auto& g : groups) {
        MultChar chi(g.cell.p, g.cell.n, 1);
        GEvaluator ev(chi, g.r, g.c);
        const u64 pr = checked_pow(g.cell.p, g.r);
        const auto rows = parallel_map(pr, cfg.workers, [&](std::size_t l) {
            return l % g.cell.p ? ev.row(static_cast<i64>(l)) : std::vector<cplx>{};
        });
        const auto units = units_below(g.cell.p, pr);
        std::vector<std::pair<i64, i64>> pairs;
        for (i64 a : units)
            for (i64 b : units) pairs.emplace_back(a, b);
        const double tol = tol_or(cfg, 1e-3);
        auto part = parallel_map(pairs.size(), cfg.workers, [&](std::size_t i) {
            const auto [l1, l2] = pairs[i];
            const cplx v = C_from_rows(rows[static_cast<std::size_t>(l1)], rows[static_cast<std::size_t>(l2)], 0, 1,
                                       chi.modulus());
            const i64 exact = C_zero_closed(g.cell.p, g.cell.n, g.r, l1, l2);
            ResultRow row = compare_row("czero", "C(0, l1, l2) = p^n S(0, l1 - l2; p^r)", v,
                                        cplx{static_cast<double>(exact), 0.0}, tol);
            if (std::llround(v.real()) != exact) row.verdict = Verdict::Fail;
            if (g.r >= g.cell.n) {
                // the off-diagonal u1 = u2 mod p^{n-1} terms only cancel when r < n
                row.verdict = Verdict::Excluded;
                row.note = "needs r < n";
            }
            row.p = static_cast<i64>(g.cell.p);
            row.n = g.cell.n;
            row.r = g.r;
            row.k = 1;
            row.c = static_cast<i64>(g.c);
            row.d = 1;
            row.l1 = l1;
            row.l2 = l2;
            row.mt = 0;
            return row;
        });
        for (auto& r : part) out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------- csupport

std::vector<Cell> csupport_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 3}}), 1e4);
}

double csupport_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : csupport_cells(cfg)) {
        const double q = qd(c.p, c.n);
        for (unsigned r = (c.n + 1) / 2; r < c.n; ++r) {
            const double units = qd(c.p, r) * (1 - 1.0 / c.p);
            const double pairs = std::min(units * units, static_cast<double>(std::max<u64>(cfg.max_pairs, 1)));
            for (u64 cv : c_values(cfg))
                total += static_cast<double>(d_values(cfg, cv).size()) * (units * q * q + pairs * q * q * 1.5);
        }
    }
    return total;
}

std::vector<ResultRow> suite_csupport(const SweepConfig& cfg)
{
    struct Group {
        Cell cell;
        unsigned r;
        u64 c;
        u64 d;
    };
    std::vector<Group> groups;
    for (auto cell : csupport_cells(cfg)) {
        auto [rlo, rhi] = r_bounds(cfg, (cell.n + 1) / 2, cell.n - 1);
        for (unsigned r = rlo; r <= rhi; ++r)
            for (u64 c : c_values(cfg)) {
                if (c % cell.p == 0) continue;
                for (u64 d : d_values(cfg, c)) groups.push_back({cell, r, c, d});
            }
    }
    std::vector<ResultRow> out;
    for (const auto& g : groups) {
        const u64 p = g.cell.p;
        const unsigned n = g.cell.n;
        MultChar chi(p, n, 1);
        GEvaluator ev(chi, g.r, g.c);
        const u64 q = chi.modulus().value();
        const u64 pr = checked_pow(p, g.r);
        const u64 pnr = checked_pow(p, n - g.r);
        const auto rows = parallel_map(pr, cfg.workers, [&](std::size_t l) {
            return l % p ? ev.row(static_cast<i64>(l)) : std::vector<cplx>{};
        });
        const auto pairs =
            cancellation_pairs(p, g.r, std::max<u64>(cfg.max_pairs, 1), draw(cfg.seed, stream_of("csupport", p, n, g.r), 0));
        const double vtol = tol_or(cfg, 1e-3);
        auto parts = parallel_map(pairs.size(), cfg.workers, [&](std::size_t i) {
            const auto [l1, l2] = pairs[i];
            const auto& r1 = rows[static_cast<std::size_t>(l1)];
            const auto& r2 = rows[static_cast<std::size_t>(l2)];
            std::vector<ResultRow> part;
            auto stamp = [&](ResultRow& row, i64 mt) {
                row.p = static_cast<i64>(p);
                row.n = n;
                row.r = g.r;
                row.k = 1;
                row.c = static_cast<i64>(g.c);
                row.d = static_cast<i64>(g.d);
                row.l1 = l1;
                row.l2 = l2;
                row.mt = mt;
            };
            for (u64 mt = 0; mt < q; ++mt) {
                const cplx v = C_from_rows(r1, r2, static_cast<i64>(mt), g.d, chi.modulus());
                const CSupport sup = C_support_bound({chi, g.r, g.c, g.d, static_cast<i64>(mt), l1, l2});
                ResultRow row;
                if (sup.vanishes_predicted) {
                    row = compare_row("csupport", "predicted zero", v, cplx{0.0, 0.0}, vtol);
                } else {
                    row.suite = "csupport";
                    row.check = "bound ratio";
                    row.value = v;
                    row.verdict = std::isfinite(std::abs(v) / sup.bound) ? Verdict::Pass : Verdict::Fail;
                }
                row.bound = sup.bound;
                row.ratio = std::abs(v) / sup.bound;
                row.note = "omega=" + std::to_string(sup.omega) +
                           (sup.stationary_exists ? " stationary=yes" : " stationary=no");
                stamp(row, static_cast<i64>(mt));
                part.push_back(std::move(row));
            }
            // conjugate-swap symmetry at a few frequencies
            for (i64 mt : {i64{0}, i64{1}, static_cast<i64>(pnr)}) {
                const cplx lhs = C_from_rows(r1, r2, mt, g.d, chi.modulus());
                const cplx rhs = std::conj(C_from_rows(r2, r1, -mt, g.d, chi.modulus()));
                ResultRow row = compare_row("csupport", "C(mt, l1, l2) = conj C(-mt, l2, l1)", lhs, rhs,
                                            tol_or(cfg, 1e-9 * static_cast<double>(q * q)));
                stamp(row, mt);
                part.push_back(std::move(row));
            }
            return part;
        });
        flatten_into(out, std::move(parts));

        // the full sum over u mod d p^n against its factorization, on the first pairs
        const std::size_t kpairs = std::min<std::size_t>(pairs.size(), 2);
        for (std::size_t i = 0; i < kpairs; ++i) {
            const auto [l1, l2] = pairs[i];
            for (int sign : {1, -1}) {
                for (i64 mt : {i64{0}, i64{1}, static_cast<i64>(pnr)}) {
                    const KFull kf = K_full(chi, mt, l1, l2, g.c, g.d, g.r, sign);
                    ResultRow row = compare_row("csupport", "K(mt) = e(mt l1 p^{n-r} (p^r)^-1 / d) C(s mt, s l1, s l2)",
                                                kf.defining, kf.factored,
                                                tol_or(cfg, 1e-9 * static_cast<double>(q * q)));
                    row.p = static_cast<i64>(p);
                    row.n = n;
                    row.r = g.r;
                    row.k = 1;
                    row.c = static_cast<i64>(g.c);
                    row.d = static_cast<i64>(g.d);
                    row.l1 = l1;
                    row.l2 = l2;
                    row.mt = mt;
                    row.a = sign;
                    row.note = "sign=" + std::to_string(sign) +
                               " flipped_diff=" + fmt(std::abs(kf.defining - kf.factored_flipped));
                    out.push_back(std::move(row));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- statphase

std::vector<Cell> statphase_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 2}, {7, 2, 2}}), 625);
}

double battery_cost(const std::vector<Cell>& cells)
{
    double total = 0;
    for (auto c : cells) total += 600.0 * qd(c.p, c.n) * 4;
    return total;
}

struct MemberOutcome {
    cplx direct;
    std::optional<cplx> reduced;
    std::string failure;
    bool excluded = false;
    double bound = 0;
    SdtContractReport contract;
};

MemberOutcome run_member(const PhaseData& d, bool reduce)
{
    MemberOutcome out;
    out.direct = direct_sum(d);
    out.bound = second_derivative_bound(d);
    out.contract = sdt_contract(d);
    if (!reduce) return out;
    try {
        out.reduced = d.kind == ReductionKind::Linear ? reduce_linear(d).value : reduce_quadratic(d).value;
    } catch (const RegimeViolation& e) {
        out.excluded = true;
        out.failure = e.what();
    } catch (const Error& e) {
        out.failure = e.what();
    }
    return out;
}

std::string contract_note(const SdtContractReport& c)
{
    return std::string("contract=") + (c.holds ? "held" : "failed") + " ord_phi2=[" + std::to_string(c.min_ord) + "," +
           std::to_string(c.max_ord) + "]";
}

std::vector<ResultRow> suite_statphase(const SweepConfig& cfg)
{
    std::vector<ResultRow> out;
    for (auto cell : statphase_cells(cfg)) {
        const auto battery = builtin_battery(cell.p, cell.n);
        const double q = qd(cell.p, cell.n);
        auto rows = parallel_map(battery.size(), cfg.workers, [&](std::size_t i) {
            const PhaseData& d = battery[i];
            const MemberOutcome mo = run_member(d, true);
            ResultRow row;
            const double tol = tol_or(cfg, 1e-6 * q);
            const std::string check =
                std::string(d.kind == ReductionKind::Linear ? "linear" : "quadratic") + " reduction: " + d.family;
            if (mo.reduced) {
                row = compare_row("statphase", check, *mo.reduced, mo.direct, tol);
            } else {
                row.suite = "statphase";
                row.check = check;
                row.oracle = mo.direct;
                row.tolerance = tol;
                row.verdict = mo.excluded ? Verdict::Excluded : Verdict::Fail;
            }
            row.p = static_cast<i64>(cell.p);
            row.n = cell.n;
            row.member = static_cast<i64>(i);
            row.bound = mo.bound;
            row.ratio = std::abs(mo.direct) / mo.bound;
            row.note = d.instance + "; " + contract_note(mo.contract);
            if (!mo.failure.empty()) row.note += "; " + mo.failure;
            return row;
        });
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------- reciprocity

std::vector<Cell> reciprocity_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 4}, {5, 2, 3}, {7, 2, 2}}), 1e9);
}

u64 reciprocity_samples(const SweepConfig& cfg) { return cfg.samples ? cfg.samples : 24; }

double reciprocity_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : reciprocity_cells(cfg)) total += static_cast<double>(reciprocity_samples(cfg)) * c.n * 8;
    return total;
}

std::vector<ResultRow> suite_reciprocity(const SweepConfig& cfg)
{
    struct Item {
        Cell cell;
        unsigned r;
        u64 j;
    };
    std::vector<Item> items;
    for (auto cell : reciprocity_cells(cfg)) {
        auto [rlo, rhi] = r_bounds(cfg, 1, cell.n);
        for (unsigned r = rlo; r <= rhi; ++r)
            for (u64 j = 0; j < reciprocity_samples(cfg); ++j) items.push_back({cell, r, j});
    }
    const std::vector<u64> cofactors{1, 2, 4, 5, 7, 8, 10, 11, 13, 14, 16, 17, 19, 20, 22, 23};
    return parallel_map(items.size(), cfg.workers, [&](std::size_t i) {
        const auto& it = items[i];
        const u64 p = it.cell.p;
        const u64 stream = stream_of("reciprocity", p, it.cell.n, it.r);
        u64 h = draw(cfg.seed, stream, it.j);
        std::vector<u64> cs;
        for (u64 c : cofactors)
            if (c % p) cs.push_back(c);
        const u64 c = cs[h % cs.size()];
        const PrimePowerModulus q(p, it.cell.n);
        const u64 big = checked_mul(c, q.value());
        // draw until a and a p^{n-r} + b c are units where they must be
        i64 a = 0, b = 0;
        for (u64 t = 1;; ++t) {
            h = mix(h + t);
            a = static_cast<i64>(h % big);
            b = static_cast<i64>(mix(h) % q.value());
            if (std::gcd(static_cast<u64>(a), c * p) != 1) continue;
            const i128 x = static_cast<i128>(a) * checked_pow(p, it.cell.n - it.r) + static_cast<i128>(b) * c;
            if (std::gcd(reduce(x, big), big) == 1) break;
        }
        const i64 m = static_cast<i64>(mix(h ^ 1) % big);
        const i64 l = static_cast<i64>(mix(h ^ 2) % big);
        const bool ok = verify_reciprocity_instances(m, l, a, b, c, q, it.r) && verify_reciprocity(m, a, c, q);
        ResultRow row = compare_row("reciprocity", "additive character splitting", cplx{ok ? 1.0 : 0.0, 0.0},
                                    cplx{1.0, 0.0}, 0.0);
        row.p = static_cast<i64>(p);
        row.n = it.cell.n;
        row.r = it.r;
        row.c = static_cast<i64>(c);
        row.a = a;
        row.b = b;
        row.m = m;
        row.l = l;
        return row;
    });
}

// ---------------------------------------------------------------- measurements

CancellationGrid cancellation_grid(const SweepConfig& cfg)
{
    CancellationGrid g;
    g.primes = cfg.primes.empty() ? std::vector<u64>{3} : cfg.primes;
    g.n_min = cfg.n_min ? cfg.n_min : 2;
    g.n_max = cfg.n_max ? cfg.n_max : 4;
    g.c = c_values(cfg).front();
    g.d = d_values(cfg, g.c).back();
    g.max_pairs = std::max<u64>(cfg.max_pairs, 1);
    g.seed = cfg.seed;
    g.budget = cfg.budget;
    g.workers = cfg.workers;
    return g;
}

std::vector<ResultRow> measure_cancellation(const SweepConfig& cfg)
{
    const CancellationGrid grid = cancellation_grid(cfg);
    const auto crow = cancellation_sweep(grid, tol_or(cfg, 1e-3));
    std::vector<ResultRow> out;
    std::map<std::pair<u64, unsigned>, double> max_ratio;
    for (const auto& c : crow) {
        ResultRow row;
        row.suite = "cancellation";
        row.check = c.vanishes_predicted ? "predicted zero" : "bound ratio";
        row.p = static_cast<i64>(c.p);
        row.n = c.n;
        row.r = c.r;
        row.k = 1;
        row.c = static_cast<i64>(c.c);
        row.d = static_cast<i64>(c.d);
        row.l1 = c.l1;
        row.l2 = c.l2;
        row.mt = c.mt;
        row.value = c.value;
        row.bound = c.bound;
        row.ratio = c.ratio;
        row.note = "omega=" + std::to_string(c.omega);
        if (c.vanishes_predicted) {
            row.abs_diff = std::abs(c.value);
            row.tolerance = tol_or(cfg, 1e-3);
            row.verdict = c.vanished ? Verdict::Pass : Verdict::Fail;
        } else {
            row.verdict = std::isfinite(c.ratio) ? Verdict::Pass : Verdict::Fail;
            auto& mr = max_ratio[{c.p, c.n}];
            mr = std::max(mr, c.ratio);
        }
        out.push_back(std::move(row));
    }
    std::map<u64, std::vector<std::pair<unsigned, double>>> series;
    for (const auto& [key, ratio] : max_ratio) {
        ResultRow row;
        row.suite = "cancellation";
        row.check = "max ratio";
        row.p = static_cast<i64>(key.first);
        row.n = key.second;
        row.ratio = ratio;
        row.verdict = std::isfinite(ratio) ? Verdict::Pass : Verdict::Fail;
        out.push_back(row);
        series[key.first].emplace_back(key.second, ratio);
    }
    for (const auto& [p, s] : series) {
        ResultRow row;
        row.suite = "cancellation";
        row.check = "max ratio stable in n";
        row.p = static_cast<i64>(p);
        double hi = 0;
        std::string list;
        for (const auto& [n, v] : s) {
            hi = std::max(hi, v);
            list += (list.empty() ? "" : " ") + std::to_string(n) + ":" + fmt(v);
        }
        row.ratio = hi;
        row.verdict = adjacent_stable(s) ? Verdict::Pass : Verdict::Fail;
        row.note = list;
        out.push_back(row);
    }
    return out;
}

std::vector<Cell> sdt_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 5}, {5, 2, 3}, {7, 2, 2}}), 1e4);
}

std::vector<ResultRow> measure_sdt(const SweepConfig& cfg)
{
    std::vector<ResultRow> out;
    for (auto cell : sdt_cells(cfg)) {
        const auto battery = builtin_battery(cell.p, cell.n);
        auto rows = parallel_map(battery.size(), cfg.workers, [&](std::size_t i) {
            const PhaseData& d = battery[i];
            const MemberOutcome mo = run_member(d, false);
            ResultRow row;
            row.suite = "sdt-constant";
            row.check = d.family;
            row.p = static_cast<i64>(cell.p);
            row.n = cell.n;
            row.member = static_cast<i64>(i);
            row.value = mo.direct;
            row.bound = mo.bound;
            row.ratio = std::abs(mo.direct) / mo.bound;
            row.verdict = std::isfinite(*row.ratio) ? Verdict::Pass : Verdict::Fail;
            row.note = contract_note(mo.contract) + "; " + d.instance;
            return row;
        });
        for (auto& r : rows) out.push_back(std::move(r));
    }
    for (const auto& sc : sdt_constants(out)) {
        ResultRow row;
        row.suite = "sdt-constant";
        row.check = "constant: " + sc.family;
        row.p = static_cast<i64>(sc.p);
        row.ratio = sc.constant;
        row.verdict = sc.stable ? Verdict::Pass : Verdict::Fail;
        std::string list;
        for (const auto& [n, v] : sc.max_ratio_by_n) list += (list.empty() ? "" : " ") + std::to_string(n) + ":" + fmt(v);
        row.note = list + (sc.contract_held ? "; contract=held" : "; contract=failed");
        out.push_back(row);
    }
    return out;
}

std::vector<Cell> gauss_cells(const SweepConfig& cfg)
{
    return cells_for(cfg, range_cells({{3, 2, 6}, {5, 2, 4}, {7, 2, 3}}), 1e6);
}

u64 gauss_samples(const SweepConfig& cfg) { return cfg.samples ? cfg.samples : 8; }

std::vector<ResultRow> measure_gauss(const SweepConfig& cfg)
{
    struct Item {
        Cell cell;
        u64 k;
    };
    std::vector<Item> items;
    for (auto cell : gauss_cells(cfg))
        for (u64 k : pick(primitive_indices(cell.p, cell.n), gauss_samples(cfg), cfg.seed,
                          stream_of("gauss", cell.p, cell.n)))
            items.push_back({cell, k});
    return parallel_map(items.size(), cfg.workers, [&](std::size_t i) {
        const auto& it = items[i];
        MultChar chi(it.cell.p, it.cell.n, it.k);
        const cplx tau = gauss_sum(chi);
        const double expect = std::pow(static_cast<double>(it.cell.p), it.cell.n / 2.0);
        ResultRow row;
        row.suite = "gauss-magnitude";
        row.check = "|tau(chi)| = p^{n/2}";
        row.p = static_cast<i64>(it.cell.p);
        row.n = it.cell.n;
        row.k = static_cast<i64>(it.k);
        row.value = tau;
        row.bound = expect;
        row.ratio = std::abs(tau) / expect;
        row.abs_diff = std::abs(std::abs(tau) - expect);
        row.tolerance = tol_or(cfg, 1e-9 * expect);
        row.verdict = *row.abs_diff <= *row.tolerance ? Verdict::Pass : Verdict::Fail;
        return row;
    });
}

using SuiteFn = std::vector<ResultRow> (*)(const SweepConfig&);
using CostFn = double (*)(const SweepConfig&);

struct Entry {
    const char* name;
    SuiteFn run;
    CostFn cost;
};

double statphase_cost(const SweepConfig& cfg) { return battery_cost(statphase_cells(cfg)); }
double sdt_cost(const SweepConfig& cfg) { return battery_cost(sdt_cells(cfg)); }
double cancellation_cost_cfg(const SweepConfig& cfg) { return cancellation_cost(cancellation_grid(cfg)); }
double gauss_cost(const SweepConfig& cfg)
{
    double total = 0;
    for (auto c : gauss_cells(cfg)) total += static_cast<double>(gauss_samples(cfg)) * qd(c.p, c.n) * 2;
    return total;
}

const std::vector<Entry>& suites()
{
    static const std::vector<Entry> table{
        {"postnikov", suite_postnikov, postnikov_cost}, {"kloosterman", suite_kloosterman, kloosterman_cost},
        {"gsum", suite_gsum, gsum_cost},                {"czero", suite_czero, czero_cost},
        {"csupport", suite_csupport, csupport_cost},    {"statphase", suite_statphase, statphase_cost},
        {"reciprocity", suite_reciprocity, reciprocity_cost},
    };
    return table;
}

const std::vector<Entry>& measurements()
{
    static const std::vector<Entry> table{
        {"cancellation", measure_cancellation, cancellation_cost_cfg},
        {"sdt-constant", measure_sdt, sdt_cost},
        {"gauss-magnitude", measure_gauss, gauss_cost},
    };
    return table;
}

const Entry& find_entry(const std::vector<Entry>& table, const std::string& name, const char* what)
{
    for (const auto& e : table)
        if (name == e.name) return e;
    std::string known;
    for (const auto& e : table) known += (known.empty() ? "" : ", ") + std::string(e.name);
    throw InvalidArgument(std::string("unknown ") + what + " '" + name + "' (known: " + known + ")");
}

void check_budget(double cost, const SweepConfig& cfg, const std::string& what)
{
    if (!(cfg.budget > 0)) throw InvalidArgument("budget must be positive");
    if (cost > cfg.budget)
        throw BudgetExceeded(what + " needs about " + fmt(std::ceil(cost)) + " summand evaluations, budget is " +
                             fmt(cfg.budget));
}

void check_config(const SweepConfig& cfg)
{
    if (cfg.workers == 0) throw InvalidArgument("workers must be at least 1");
    if (cfg.n_min && cfg.n_max && cfg.n_min > cfg.n_max) throw InvalidArgument("n_min exceeds n_max");
    if (cfg.r_min && cfg.r_max && cfg.r_min > cfg.r_max) throw InvalidArgument("r_min exceeds r_max");
    if (cfg.tolerance && !(*cfg.tolerance >= 0)) throw InvalidArgument("tolerance must be non-negative");
    for (u64 c : cfg.c_list)
        if (c == 0) throw InvalidArgument("c values must be positive");
    d_values(cfg, 1);
}

}  // namespace

double default_budget()
{
    if (const char* env = std::getenv("PADIC_EXPSUMS_BUDGET")) {
        try {
            double v = parse_double(trim(env));
            if (v > 0) return v;
        } catch (const InvalidArgument&) {
        }
    }
    return 1e8;
}

void apply_setting(SweepConfig& cfg, const std::string& key_in, const std::string& value_in)
{
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "seed") cfg.seed = parse_u64(value);
    else if (key == "budget") cfg.budget = parse_double(value);
    else if (key == "tolerance") cfg.tolerance = parse_double(value);
    else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_u64(value));
    else if (key == "format") {
        if (value == "csv") cfg.format = OutputFormat::Csv;
        else if (value == "json") cfg.format = OutputFormat::Json;
        else throw InvalidArgument("format must be csv or json");
    } else if (key == "primes") cfg.primes = parse_u64_list(value);
    else if (key == "n_min") cfg.n_min = static_cast<unsigned>(parse_u64(value));
    else if (key == "n_max") cfg.n_max = static_cast<unsigned>(parse_u64(value));
    else if (key == "r_min") cfg.r_min = static_cast<unsigned>(parse_u64(value));
    else if (key == "r_max") cfg.r_max = static_cast<unsigned>(parse_u64(value));
    else if (key == "c_list") cfg.c_list = parse_u64_list(value);
    else if (key == "d_rule") cfg.d_rule = value;
    else if (key == "exhaustive_threshold") cfg.exhaustive_threshold = parse_u64(value);
    else if (key == "samples") cfg.samples = parse_u64(value);
    else if (key == "max_pairs") cfg.max_pairs = parse_u64(value);
    else throw InvalidArgument("unknown config key '" + key + "'");
}

void load_config_file(const std::string& path, SweepConfig& cfg)
{
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Excluded: return "regime-excluded";
    }
    return "fail";
}

Summary summarize(const std::vector<ResultRow>& rows)
{
    Summary s;
    for (const auto& r : rows) {
        if (r.verdict == Verdict::Pass) ++s.pass;
        else if (r.verdict == Verdict::Fail) ++s.fail;
        else ++s.excluded;
    }
    return s;
}

std::string summary_line(const std::string& what, const Summary& s)
{
    return what + ": pass=" + std::to_string(s.pass) + " fail=" + std::to_string(s.fail) +
           " regime-excluded=" + std::to_string(s.excluded);
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{
        "suite", "check",    "p",        "n",        "r",         "k",         "c",        "d",         "a",
        "b",     "m",        "l",        "l1",       "l2",        "mt",        "member",   "value_re",  "value_im",
        "oracle_re", "oracle_im", "abs_diff", "tolerance", "bound", "ratio", "verdict", "note"};
    return cols;
}

namespace {

// Cells of one row in column order; nullopt for an empty field.
std::vector<std::pair<std::optional<std::string>, bool>> row_cells(const ResultRow& r)
{
    // second: true when the cell is a string (quoted in JSON)
    std::vector<std::pair<std::optional<std::string>, bool>> out;
    auto str = [&](const std::string& s) { out.emplace_back(s, true); };
    auto integer = [&](const std::optional<i64>& v) {
        out.emplace_back(v ? std::optional<std::string>(std::to_string(*v)) : std::nullopt, false);
    };
    auto real = [&](const std::optional<double>& v) {
        if (!v || !std::isfinite(*v)) out.emplace_back(v ? std::optional<std::string>(fmt(*v)) : std::nullopt, false);
        else out.emplace_back(fmt(*v), false);
    };
    str(r.suite);
    str(r.check);
    for (const auto* v : {&r.p, &r.n, &r.r, &r.k, &r.c, &r.d, &r.a, &r.b, &r.m, &r.l, &r.l1, &r.l2, &r.mt, &r.member})
        integer(*v);
    real(r.value ? std::optional<double>(r.value->real()) : std::nullopt);
    real(r.value ? std::optional<double>(r.value->imag()) : std::nullopt);
    real(r.oracle ? std::optional<double>(r.oracle->real()) : std::nullopt);
    real(r.oracle ? std::optional<double>(r.oracle->imag()) : std::nullopt);
    real(r.abs_diff);
    real(r.tolerance);
    real(r.bound);
    real(r.ratio);
    str(to_string(r.verdict));
    str(r.note);
    return out;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format)
{
    const auto& cols = csv_columns();
    if (format == OutputFormat::Csv) {
        out << "# padic-expsums schema v1\n";
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const auto& r : rows) {
            const auto cells = row_cells(r);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out << ',';
                if (cells[i].first) out << csv_escape(*cells[i].first);
            }
            out << '\n';
        }
        return;
    }
    for (const auto& r : rows) {
        const auto cells = row_cells(r);
        out << '{';
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << nlohmann::json(cols[i]).dump() << ':';
            const auto& [text, is_string] = cells[i];
            if (!text) out << "null";
            else if (is_string) out << nlohmann::json(*text).dump();
            else if (*text == "inf" || *text == "-inf" || *text == "nan" || *text == "-nan") out << "null";
            else out << *text;
        }
        out << "}\n";
    }
}

std::string render_rows(const std::vector<ResultRow>& rows, OutputFormat format)
{
    std::ostringstream os;
    write_rows(os, rows, format);
    return os.str();
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : suites()) v.push_back(e.name);
        return v;
    }();
    return names;
}

const std::vector<std::string>& measurement_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : measurements()) v.push_back(e.name);
        return v;
    }();
    return names;
}

double suite_cost(const std::string& name, const SweepConfig& cfg)
{
    if (name == "all") {
        double total = 0;
        for (const auto& e : suites()) total += e.cost(cfg);
        return total;
    }
    return find_entry(suites(), name, "suite").cost(cfg);
}

double measurement_cost(const std::string& name, const SweepConfig& cfg)
{
    return find_entry(measurements(), name, "measurement").cost(cfg);
}

std::vector<ResultRow> run_suite(const std::string& name, const SweepConfig& cfg)
{
    check_config(cfg);
    check_budget(suite_cost(name, cfg), cfg, "verify " + name);
    if (name != "all") return find_entry(suites(), name, "suite").run(cfg);
    std::vector<ResultRow> out;
    for (const auto& e : suites()) {
        auto rows = e.run(cfg);
        for (auto& r : rows) out.push_back(std::move(r));
    }
    return out;
}

std::vector<ResultRow> run_measurement(const std::string& name, const SweepConfig& cfg)
{
    check_config(cfg);
    const Entry& e = find_entry(measurements(), name, "measurement");
    check_budget(e.cost(cfg), cfg, "sweep " + name);
    return e.run(cfg);
}

bool adjacent_stable(const std::vector<std::pair<unsigned, double>>& series, double factor)
{
    auto sorted = series;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first != sorted[i - 1].first + 1) continue;
        const double a = sorted[i - 1].second, b = sorted[i].second;
        if (!std::isfinite(a) || !std::isfinite(b)) return false;
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (hi == 0) continue;
        if (lo == 0 || hi / lo > factor) return false;
    }
    return true;
}

std::vector<SdtConstant> sdt_constants(const std::vector<ResultRow>& rows)
{
    std::map<std::pair<std::string, u64>, std::map<unsigned, double>> by_key;
    std::map<std::pair<std::string, u64>, bool> held;
    for (const auto& r : rows) {
        if (r.suite != "sdt-constant" || !r.member || !r.ratio || !r.p || !r.n) continue;
        const auto key = std::make_pair(r.check, static_cast<u64>(*r.p));
        auto& slot = by_key[key][static_cast<unsigned>(*r.n)];
        slot = std::max(slot, *r.ratio);
        auto it = held.try_emplace(key, true).first;
        if (r.note.rfind("contract=held", 0) != 0) it->second = false;
    }
    std::vector<SdtConstant> out;
    for (const auto& [key, series] : by_key) {
        SdtConstant sc;
        sc.family = key.first;
        sc.p = key.second;
        for (const auto& [n, v] : series) {
            sc.max_ratio_by_n.emplace_back(n, v);
            sc.constant = std::max(sc.constant, v);
        }
        sc.stable = adjacent_stable(sc.max_ratio_by_n);
        sc.contract_held = held[key];
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace padic
