#include "padic_expsums/charsums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "padic_expsums/parallel.hpp"

namespace padic {

namespace {

u64 mix(u64 x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void check_g_params(const GSumParams& params)
{
    const u64 p = params.chi.p();
    if (params.r < 1 || params.r > params.chi.n()) throw InvalidArgument("need 1 <= r <= n");
    if (params.c == 0 || params.c % p == 0) throw InvalidArgument("c must be positive and prime to p");
}

void check_c_params(const CSumParams& params)
{
    const u64 p = params.chi.p();
    if (params.r < 1 || params.r > params.chi.n()) throw InvalidArgument("need 1 <= r <= n");
    if (params.c == 0 || params.c % p == 0) throw InvalidArgument("c must be positive and prime to p");
    if (params.d == 0 || params.c % params.d != 0) throw InvalidArgument("d must divide c");
}

UnitPhase char_phase(const MultChar& chi, u64 x)
{
    auto v = chi(static_cast<i64>(x));
    if (!v) throw InternalInconsistency("character evaluated at a non-unit");
    return *v;
}

}  // namespace

cplx G_def(const GSumParams& params)
{
    check_g_params(params);
    const MultChar& chi = params.chi;
    const u64 p = chi.p();
    const unsigned n = chi.n(), r = params.r;
    const u64 q = chi.modulus().value();
    const u64 pr = checked_pow(p, r);
    const u64 pnr = checked_pow(p, n - r);
    const u64 den = checked_mul(q, p - 1);
    const u64 c_bar = inv_mod(static_cast<i64>(params.c % q), q);
    const u64 mc = mul_mod(reduce(params.m, q), c_bar, q);
    const u64 lc = mul_mod(reduce(params.l, pr), c_bar % pr, pr);

    PhaseAccumulator acc(den);
    for (u64 u = 1; u < q; ++u) {
        if (u % p == 0) continue;
        const u64 chi_idx = mul_mod(chi.phase_index(static_cast<i64>(u)), p, den);
        for (u64 b = 1; b < q; ++b) {
            if (b % p == 0) continue;
            for (u64 a = 1; a < pr; ++a) {
                if (a % p == 0) continue;
                const u64 h = (mul_mod(a, pnr, q) + mul_mod(b, params.c % q, q)) % q;
                if (h % p == 0) continue;
                const u64 top = (mul_mod(b, u, q) + mul_mod(mc, inv_mod(static_cast<i64>(h), q), q)) % q;
                const u64 low = mul_mod(lc, inv_mod(static_cast<i64>(a), pr), pr);
                u64 idx = (chi_idx + mul_mod(top, p - 1, den)) % den;
                idx = (idx + den - mul_mod(mul_mod(low, pnr, den), p - 1, den)) % den;
                acc.add_index(idx);
            }
        }
    }
    return acc.total() / static_cast<double>(q);
}

cplx G_tau(const GSumParams& params)
{
    check_g_params(params);
    const MultChar& chi = params.chi;
    const MultChar chi_bar = chi.conj();
    const u64 p = chi.p();
    const unsigned n = chi.n(), r = params.r;
    const u64 q = chi.modulus().value();
    const u64 pr = checked_pow(p, r);
    const u64 pnr = checked_pow(p, n - r);
    const u64 den = checked_mul(q, p - 1);
    const u64 c_bar = inv_mod(static_cast<i64>(params.c % q), q);
    const u64 mc = mul_mod(reduce(params.m, q), c_bar, q);
    const u64 lc = mul_mod(reduce(params.l, pr), c_bar % pr, pr);

    PhaseAccumulator acc(den);
    for (u64 b = 1; b < q; ++b) {
        if (b % p == 0) continue;
        const u64 chi_idx = mul_mod(chi_bar.phase_index(static_cast<i64>(b)), p, den);
        for (u64 a = 1; a < pr; ++a) {
            if (a % p == 0) continue;
            const u64 h = (mul_mod(a, pnr, q) + mul_mod(b, params.c % q, q)) % q;
            if (h % p == 0) continue;
            const u64 top = mul_mod(mc, inv_mod(static_cast<i64>(h), q), q);
            const u64 low = mul_mod(lc, inv_mod(static_cast<i64>(a), pr), pr);
            u64 idx = (chi_idx + mul_mod(top, p - 1, den)) % den;
            idx = (idx + den - mul_mod(mul_mod(low, pnr, den), p - 1, den)) % den;
            acc.add_index(idx);
        }
    }
    return acc.total() / gauss_sum(chi_bar);
}

GEvaluator::GEvaluator(const MultChar& chi, unsigned r, u64 c) : chi_(chi), r_(r), c_(c)
{
    const u64 p = chi.p();
    const unsigned n = chi.n();
    if (r < 1 || r > n) throw InvalidArgument("need 1 <= r <= n");
    if (c == 0 || c % p == 0) throw InvalidArgument("c must be positive and prime to p");
    const u64 q = chi.modulus().value();
    const u64 pr = checked_pow(p, r);
    const u64 c_bar = inv_mod(static_cast<i64>(c % q), q);
    c2_inv_ = mul_mod(c_bar, c_bar, q);
    const SqrtBranch branch = SqrtBranch::canonical(p);
    const PrimePowerModulus qn(p, n), qr(p, r);
    kl_n_.resize(q);
    for (u64 x = 0; x < q; ++x) kl_n_[x] = kloosterman_prime_power(1, static_cast<i64>(x), qn, branch);
    kl_r_.resize(pr);
    for (u64 x = 0; x < pr; ++x) kl_r_[x] = kloosterman_prime_power(1, static_cast<i64>(x), qr, branch);
}

std::vector<cplx> GEvaluator::weights(i64 l) const
{
    // chi(v) S(v c^-1, l c^-1; p^r) = chi(v) S(1, v l c^-2; p^r) for units v
    const u64 p = chi_.p();
    const u64 q = chi_.modulus().value();
    const u64 pr = kl_r_.size();
    const u64 lc = mul_mod(reduce(l, pr), c2_inv_ % pr, pr);
    std::vector<cplx> w(q, cplx{0.0, 0.0});
    for (u64 v = 1; v < q; ++v) {
        if (v % p == 0) continue;
        w[v] = chi_.value(static_cast<i64>(v)) * kl_r_[mul_mod(v % pr, lc, pr)];
    }
    return w;
}

cplx GEvaluator::value(i64 m, i64 l) const
{
    const u64 q = chi_.modulus().value();
    const auto w = weights(l);
    const u64 mc = mul_mod(reduce(m, q), c2_inv_, q);
    cplx total{0.0, 0.0};
    for (u64 v = 1; v < q; ++v)
        if (w[v] != cplx{0.0, 0.0}) total += w[v] * kl_n_[mul_mod(v, mc, q)];
    return total / static_cast<double>(q);
}

std::vector<cplx> GEvaluator::row(i64 l) const
{
    const u64 q = chi_.modulus().value();
    const auto w = weights(l);
    std::vector<std::pair<u64, cplx>> live;
    for (u64 v = 1; v < q; ++v)
        if (w[v] != cplx{0.0, 0.0}) live.emplace_back(v, w[v]);
    std::vector<cplx> out(q);
    for (u64 u = 0; u < q; ++u) {
        const u64 uc = mul_mod(u, c2_inv_, q);
        cplx total{0.0, 0.0};
        for (const auto& [v, wv] : live) total += wv * kl_n_[mul_mod(v, uc, q)];
        out[u] = total / static_cast<double>(q);
    }
    return out;
}

cplx G_kloosterman(const GSumParams& params)
{
    check_g_params(params);
    return GEvaluator(params.chi, params.r, params.c).value(params.m, params.l);
}

bool g_vanishes_predicted(const GSumParams& params)
{
    check_g_params(params);
    const u64 p = params.chi.p();
    const i64 mr = static_cast<i64>(reduce(params.m, p));
    const i64 lr = static_cast<i64>(reduce(params.l, p));
    // S(unit, non-unit; p^k) = 0 once k >= 2
    if (mr == 0) return true;
    if (params.r < 2) return false;
    if (lr == 0) return true;
    return legendre(mr * lr, p) == -1;
}

const char* to_string(GClosedForm form) { return form == GClosedForm::AsPrinted ? "as-printed" : "corrected"; }

bool g_closed_valid(u64 p, unsigned n)
{
    if (n < 2) return false;
    const unsigned kappa = (n + static_cast<unsigned>(iota(p)) + 2) / 3;
    return 2 * kappa <= n;
}

cplx G_closed(const GSumParams& params, GClosedForm form, const SqrtBranch& branch, u64 alpha_lift)
{
    check_g_params(params);
    const MultChar& chi = params.chi;
    const u64 p = chi.p();
    const unsigned n = chi.n(), r = params.r;
    if (r < 2) throw InvalidArgument("the closed form needs r >= 2");
    if (branch.p() != p) throw InvalidArgument("branch belongs to a different prime");
    const u64 q = chi.modulus().value();
    const u64 pnr = checked_pow(p, n - r);
    const u64 mr = reduce(params.m, q), lr = reduce(params.l, q);
    if (mr % p == 0 || lr % p == 0) throw NotASquare("m and l must be units");
    const unsigned rho1 = n % 2, rho2 = r % 2;
    const u64 alpha = chi.alpha_lift(alpha_lift).value();
    const u64 ap = alpha % p;
    const MultChar chi_bar = chi.conj();

    const u64 cq = params.c % q;
    const u64 ac = mul_mod(alpha, cq, q);
    UnitPhase pre = char_phase(chi, mul_mod(ac, ac, q));
    pre *= UnitPhase(-2 * static_cast<i64>(alpha), q);
    auto eps = [p](i64 a, unsigned s) { return UnitPhase::from_epsilon(epsilon(a, p, s)); };
    auto chi_bar_sq = [&](u64 x) -> std::optional<UnitPhase> {
        if (x % p == 0) return std::nullopt;
        return char_phase(chi_bar, mul_mod(x, x, q));
    };

    cplx sum{0.0, 0.0};
    if (form == GClosedForm::Corrected) {
        const u64 ratio = mul_mod(lr, inv_mod(static_cast<i64>(mr), q), q);
        if (legendre(static_cast<i64>(ratio % p), p) != 1) throw NotASquare("l/m is not a square mod p");
        const u64 t = psqrt(static_cast<i64>(ratio), p, n, branch);
        pre *= eps(-static_cast<i64>(ap), rho1).pow(2);
        pre *= char_phase(chi_bar, mr);
        for (int s : {1, -1}) {
            const u64 st = s > 0 ? t : q - t;
            auto chi_part = chi_bar_sq((1 + mul_mod(st, pnr, q)) % q);
            if (!chi_part) continue;
            const i64 arg = static_cast<i64>(mul_mod(st % p, ap, p));
            sum += (eps(-arg, rho2) * *chi_part).to_complex();
        }
    } else {
        if (legendre(static_cast<i64>(mr % p), p) != 1 || legendre(static_cast<i64>(lr % p), p) != 1)
            throw NotASquare("m and l must both be squares mod p");
        const u64 mh = psqrt(static_cast<i64>(mr), p, n, branch);
        const u64 lh = psqrt(static_cast<i64>(lr), p, n, branch);
        const u64 w = psqrt(static_cast<i64>(mul_mod(lr, inv_mod(static_cast<i64>(mr), q), q)), p, n, branch);
        pre *= eps(-static_cast<i64>(mul_mod(inv_mod(2, p), ap, p)), rho1);
        for (int s1 : {1, -1}) {
            for (int s2 : {1, -1}) {
                const u64 a = s1 > 0 ? mh : q - mh;
                const u64 b = mul_mod(s2 > 0 ? lh : q - lh, pnr, q);
                auto chi_part = chi_bar_sq((a + b) % q);
                if (!chi_part) continue;
                UnitPhase term = eps(s1 * static_cast<i64>(ap), rho1);
                term *= eps(s2 * static_cast<i64>(mul_mod(ap, w % p, p)), rho2);
                sum += (term * *chi_part).to_complex();
            }
        }
    }
    return std::pow(static_cast<double>(p), r / 2.0) * pre.to_complex() * sum;
}

Calibration calibrate(double tolerance)
{
    const u64 p = 3;
    const unsigned n = 2, r = 2;
    const u64 q = 9;
    struct Point {
        MultChar chi;
        u64 c;
        i64 m, l;
        cplx reference;
    };
    std::vector<Point> points;
    for (u64 k : primitive_indices(p, n)) {
        MultChar chi(p, n, k);
        for (u64 c : {1ull, 2ull}) {
            GEvaluator ev(chi, r, c);
            for (i64 m = 1; m < static_cast<i64>(q); ++m) {
                if (m % 3 == 0) continue;
                for (i64 l = 1; l < static_cast<i64>(q); ++l) {
                    if (l % 3 == 0) continue;
                    points.push_back({chi, c, m, l, ev.value(m, l)});
                }
            }
        }
    }

    Calibration out;
    const auto branches = SqrtBranch::all(p);
    for (GClosedForm form : {GClosedForm::AsPrinted, GClosedForm::Corrected}) {
        for (u64 lift = 0; lift < p; ++lift) {
            for (u64 mask = 0; mask < branches.size(); ++mask) {
                CalibrationCandidate cand;
                cand.form = form;
                cand.alpha_lift = lift;
                cand.branch_mask = mask;
                for (const auto& pt : points) {
                    GSumParams gp{pt.chi, r, pt.c, pt.m, pt.l};
                    cplx v;
                    try {
                        v = G_closed(gp, form, branches[mask], lift);
                    } catch (const NotASquare&) {
                        continue;
                    }
                    cand.max_error = std::max(cand.max_error, std::abs(v - pt.reference));
                    ++cand.points;
                }
                cand.matched = cand.points > 0 && cand.max_error <= tolerance;
                if (cand.matched && !out.selected) out.selected = cand;
                out.candidates.push_back(cand);
            }
        }
    }
    return out;
}

cplx C_from_rows(const std::vector<cplx>& row1, const std::vector<cplx>& row2, i64 mt, u64 d,
                 const PrimePowerModulus& q)
{
    const u64 qv = q.value();
    if (row1.size() != qv || row2.size() != qv) throw InvalidArgument("rows must have p^n entries");
    const u64 step = mul_mod(reduce(mt, qv), inv_mod(static_cast<i64>(d % qv), qv), qv);
    RootsOfUnity roots(qv);
    cplx total{0.0, 0.0};
    u64 phase = 0;
    for (u64 u = 0; u < qv; ++u) {
        total += row1[u] * std::conj(row2[u]) * roots[phase];
        phase = (phase + step) % qv;
    }
    return total;
}

cplx C_def(const CSumParams& params)
{
    check_c_params(params);
    GEvaluator ev(params.chi, params.r, params.c);
    const auto row1 = ev.row(params.l1);
    const auto row2 = params.l2 == params.l1 ? row1 : ev.row(params.l2);
    return C_from_rows(row1, row2, params.mt, params.d, params.chi.modulus());
}

i64 C_zero_closed(u64 p, unsigned n, unsigned r, i64 l1, i64 l2)
{
    if (r < 1 || r > n) throw InvalidArgument("need 1 <= r <= n");
    return static_cast<i64>(checked_pow(p, n)) * ramanujan_closed(l1 - l2, checked_pow(p, r));
}

CSupport C_support_bound(const CSumParams& params)
{
    check_c_params(params);
    const MultChar& chi = params.chi;
    const u64 p = chi.p();
    const unsigned n = chi.n(), r = params.r;
    if (2 * r < n || r >= n)
        throw RegimeViolation("the support law needs n/2 <= r < n, got n = " + std::to_string(n) +
                              ", r = " + std::to_string(r));
    const u64 pnr = checked_pow(p, n - r);
    CSupport out;
    const i64 diff = params.l1 - params.l2;
    out.omega = diff == 0 ? static_cast<int>(r) : std::min(ord_p(diff, p), static_cast<int>(r));
    out.bound = std::pow(static_cast<double>(p), n + (r + out.omega) / 2.0);

    const i64 l1p = static_cast<i64>(reduce(params.l1, p)), l2p = static_cast<i64>(reduce(params.l2, p));
    const bool l_units = l1p != 0 && l2p != 0;
    const bool mt_divisible = reduce(params.mt, pnr) == 0;
    out.vanishes_predicted = !mt_divisible;
    if (r >= 2 && (!l_units || legendre(l1p * l2p, p) == -1)) out.vanishes_predicted = true;

    unsigned kappa = (n + 1) / 2;
    while (3 * kappa < n + static_cast<unsigned>(iota(p))) ++kappa;
    out.kappa = kappa;
    if (!l_units || legendre(l1p, p) != 1 || legendre(l2p, p) != 1) return out;
    const SqrtBranch branch = SqrtBranch::canonical(p);
    const unsigned depth = n - kappa;
    const u64 mod = checked_pow(p, depth);
    const u64 h1 = psqrt(params.l1, p, n, branch), h2 = psqrt(params.l2, p, n, branch);
    const u64 alpha = chi.alpha().value() % mod;
    const u64 shift = mul_mod(mul_mod(alpha, params.d % mod, mod), pnr % mod, mod);
    const u64 rest = mul_mod(shift, (h1 % mod + mod - h2 % mod) % mod, mod);
    const u64 mt = reduce(params.mt, mod);
    const u64 pk = checked_pow(p, kappa);
    for (u64 u = 1; u < pk && !out.stationary_exists; ++u) {
        if (legendre(static_cast<i64>(u % p), p) != 1) continue;
        const u64 us = psqrt(static_cast<i64>(u), p, n, branch) % mod;
        const u64 lead = mul_mod(mt, pow_mod(us, 5, mod), mod);
        for (int s : {1, -1}) {
            const u64 term = s > 0 ? rest : (mod - rest) % mod;
            if ((lead + term) % mod == 0) out.stationary_exists = true;
        }
    }
    return out;
}

KFull K_full(const MultChar& chi, i64 mt, i64 l1, i64 l2, u64 c, u64 d, unsigned r, int sign)
{
    const u64 p = chi.p();
    const unsigned n = chi.n();
    if (c == 0 || c % p == 0) throw InvalidArgument("c must be positive and prime to p");
    if (d == 0 || c % d != 0) throw InvalidArgument("d must divide c");
    const int s = sign >= 0 ? 1 : -1;
    const u64 q = chi.modulus().value();
    const u64 big = checked_mul(d, q);
    GEvaluator ev(chi, r, c);
    const auto row1 = ev.row(s * l1);
    const auto row2 = ev.row(s * l2);

    // the class of u mod d
    const u64 pr_bar = d == 1 ? 0 : inv_mod(static_cast<i64>(checked_pow(p, r) % d), d);
    const u64 u2 = d == 1 ? 0
                          : mul_mod(mul_mod(reduce(l1, d), pow_mod(p % d, 2 * n - r, d), d), pr_bar, d);
    RootsOfUnity roots(big);
    const u64 mtb = reduce(mt, big);
    cplx defining{0.0, 0.0};
    for (u64 j = 0; j < q; ++j) {
        const u64 u = (u2 + d * j) % big;
        const u64 su = s > 0 ? u % q : (q - u % q) % q;
        defining += row1[su] * std::conj(row2[su]) * roots[mul_mod(mtb, u, big)];
    }

    KFull out;
    out.defining = defining;
    const u64 pref_num =
        d == 1 ? 0 : mul_mod(mul_mod(reduce(mt, d), reduce(l1, d), d), mul_mod(checked_pow(p, n - r) % d, pr_bar, d), d);
    const cplx pref = UnitPhase(static_cast<i64>(pref_num), d).to_complex();
    out.factored = pref * C_from_rows(row1, row2, s * mt, d, chi.modulus());
    out.factored_flipped = pref * C_from_rows(row1, row2, -s * mt, d, chi.modulus());
    return out;
}

std::vector<std::pair<i64, i64>> cancellation_pairs(u64 p, unsigned r, u64 max_pairs, u64 seed)
{
    const u64 pr = checked_pow(p, r);
    std::vector<i64> units;
    for (u64 l = 1; l < pr; ++l)
        if (l % p) units.push_back(static_cast<i64>(l));
    std::vector<std::pair<i64, i64>> all;
    for (i64 a : units)
        for (i64 b : units) all.emplace_back(a, b);
    if (all.size() <= max_pairs) return all;
    // diagonal pairs always; the rest by smallest hash keyed on (seed, index)
    std::vector<std::pair<u64, std::size_t>> keyed;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].first == all[i].second) chosen.push_back(i);
        else keyed.emplace_back(mix(seed ^ mix(i + (static_cast<u64>(r) << 40) + (p << 48))), i);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t j = 0; j < keyed.size() && chosen.size() < max_pairs; ++j) chosen.push_back(keyed[j].second);
    std::sort(chosen.begin(), chosen.end());
    std::vector<std::pair<i64, i64>> out;
    for (std::size_t i : chosen) out.push_back(all[i]);
    return out;
}

namespace {

struct SweepBlock {
    u64 p;
    unsigned n;
    unsigned r;
};

std::vector<SweepBlock> sweep_blocks(const CancellationGrid& grid)
{
    std::vector<SweepBlock> out;
    for (u64 p : grid.primes)
        for (unsigned n = std::max(2u, grid.n_min); n <= grid.n_max; ++n)
            for (unsigned r = (n + 1) / 2; r < n; ++r) out.push_back({p, n, r});
    return out;
}

}  // namespace

double cancellation_cost(const CancellationGrid& grid)
{
    double total = 0.0;
    for (const auto& b : sweep_blocks(grid)) {
        const double q = std::pow(static_cast<double>(b.p), b.n);
        const double pr = std::pow(static_cast<double>(b.p), b.r);
        const double units = pr - pr / static_cast<double>(b.p);
        const double pairs = std::min(units * units, static_cast<double>(std::max<u64>(grid.max_pairs, 1)));
        // tables, one G row per l, one C per (pair, mt)
        total += q + pr + units * q * q + pairs * q * q;
    }
    return total;
}

std::vector<CancellationRow> cancellation_sweep(const CancellationGrid& grid, double vanish_tolerance)
{
    for (u64 p : grid.primes)
        if (p < 3 || !is_prime(p)) throw InvalidArgument("sweep primes must be odd primes");
    const double cost = cancellation_cost(grid);
    if (cost > grid.budget)
        throw BudgetExceeded("cancellation sweep needs about " + std::to_string(static_cast<long long>(cost)) +
                             " summand evaluations, budget is " +
                             std::to_string(static_cast<long long>(grid.budget)));
    std::vector<CancellationRow> out;
    for (const auto& b : sweep_blocks(grid)) {
        MultChar chi(b.p, b.n, 1);
        GEvaluator ev(chi, b.r, grid.c);
        const u64 q = chi.modulus().value();
        const u64 pr = checked_pow(b.p, b.r);
        const auto rows = parallel_map(pr, grid.workers, [&](std::size_t l) {
            return l % b.p ? ev.row(static_cast<i64>(l)) : std::vector<cplx>{};
        });
        const auto pairs = cancellation_pairs(b.p, b.r, grid.max_pairs, grid.seed);
        auto blocks = parallel_map(pairs.size(), grid.workers, [&](std::size_t i) {
            const auto [l1, l2] = pairs[i];
            std::vector<CancellationRow> part;
            part.reserve(q);
            for (u64 mt = 0; mt < q; ++mt) {
                CancellationRow row;
                row.p = b.p;
                row.n = b.n;
                row.r = b.r;
                row.c = grid.c;
                row.d = grid.d;
                row.l1 = l1;
                row.l2 = l2;
                row.mt = static_cast<i64>(mt);
                row.value = C_from_rows(rows[static_cast<std::size_t>(l1)], rows[static_cast<std::size_t>(l2)],
                                        row.mt, grid.d, chi.modulus());
                CSupport sup = C_support_bound({chi, b.r, grid.c, grid.d, row.mt, l1, l2});
                row.bound = sup.bound;
                row.omega = sup.omega;
                row.ratio = std::abs(row.value) / sup.bound;
                row.vanishes_predicted = sup.vanishes_predicted;
                row.vanished = std::abs(row.value) <= vanish_tolerance;
                part.push_back(row);
            }
            return part;
        });
        for (auto& part : blocks)
            for (auto& row : part) out.push_back(row);
    }
    return out;
}

}  // namespace padic
