#include "padic_expsums/statphase.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace padic {

namespace {

u64 mix(u64 x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

unsigned ceil_div(unsigned a, unsigned b) { return (a + b - 1) / b; }

// Working relative precision for derivative evaluators.
int working_precision(u64 p, unsigned n) { return std::min(static_cast<int>(n) + 8, max_relprec(p) - 1); }

cplx weighted_total(const std::vector<StationaryPoint>& points)
{
    PhaseHistogram hist;
    for (const auto& pt : points) hist.add(pt.weight);
    return hist.total();
}

std::string sign_char(int s) { return s > 0 ? "+" : "-"; }

}  // namespace

cplx direct_sum(const PhaseData& data)
{
    const u64 qv = data.q.value();
    PhaseHistogram hist;
    for (u64 u = 0; u < qv; ++u)
        if (data.domain(u)) hist.add(data.psi(u));
    return hist.total();
}

void check_contract(const PhaseData& data, bool quadratic, unsigned samples, u64 seed)
{
    const u64 p = data.q.p();
    const unsigned n = data.q.n();
    const u64 qv = data.q.value();
    if (data.kappa > n) throw InvalidArgument("step exponent kappa exceeds n");
    if (quadratic && !data.phi2) throw InvalidArgument("quadratic contract needs phi2");
    const int prec = working_precision(p, n);
    const u64 pk = checked_pow(p, data.kappa);
    const u64 t_range = data.kappa < n ? checked_pow(p, n - data.kappa) : p * p;
    const QpNumber half = QpNumber::ratio(1, 2, p, prec);

    u64 state = mix(seed ^ (qv * 0x100000001b3ull) ^ data.kappa);
    for (unsigned s = 0; s < samples; ++s) {
        u64 u = 0;
        bool found = false;
        for (int tries = 0; tries < 256 && !found; ++tries) {
            state = mix(state);
            u = state % qv;
            found = data.domain(u);
        }
        if (!found) return;  // T is empty or too thin to sample
        state = mix(state);
        const u64 t = state % t_range;
        const u64 moved = static_cast<u64>((static_cast<u128>(pk) * t + u) % qv);
        QpNumber tq = QpNumber::from_int(static_cast<i64>(t), p, prec);
        QpNumber arg = data.phi1(u).shift(static_cast<int>(data.kappa)) * tq;
        if (quadratic) arg = arg + half * data.phi2(u).shift(2 * static_cast<int>(data.kappa)) * tq * tq;
        UnitPhase expected = data.psi(u) * arg.theta();
        UnitPhase actual = data.psi(moved);
        if (!(actual == expected))
            throw ContractViolation(data.family + " [" + data.instance + "]: psi(u + p^k t) = " +
                                    actual.to_string() + " but the expansion predicts " + expected.to_string() +
                                    " at u = " + std::to_string(u) + ", t = " + std::to_string(t));
    }
}

ReducedSum reduce_linear(const PhaseData& data)
{
    check_contract(data, false);
    const u64 p = data.q.p();
    const unsigned n = data.q.n();
    const unsigned k = data.kappa;
    ReducedSum out;
    out.prefactor = std::pow(static_cast<double>(p), static_cast<double>(n - k));
    const u64 pk = checked_pow(p, k);
    for (u64 u = 0; u < pk; ++u) {
        if (!data.domain(u)) continue;
        if (!data.phi1(u).in_ideal(-static_cast<int>(k))) continue;
        out.stationary_points.push_back({u, data.psi(u)});
    }
    out.value = out.prefactor * weighted_total(out.stationary_points);
    return out;
}

ReducedSum reduce_quadratic(const PhaseData& data)
{
    if (!data.phi2 || !data.mu) throw InvalidArgument("quadratic reduction needs phi2 and a declared mu");
    const u64 p = data.q.p();
    const int n = static_cast<int>(data.q.n());
    const int mu = *data.mu;
    if (mu < -2 * n) throw InvalidArgument("mu must satisfy mu >= -2n");
    if (mu > -2 * static_cast<int>(data.kappa))
        throw RegimeViolation(data.family + " [" + data.instance + "]: mu = " + std::to_string(mu) +
                              " exceeds -2 kappa = " + std::to_string(-2 * static_cast<int>(data.kappa)));
    check_contract(data, true);

    const int rho = (-mu) % 2;
    const int r = (-mu - rho) / 2;
    const int prec = working_precision(p, data.q.n());
    const QpNumber two = QpNumber::from_int(2, p, prec);
    const u64 inv2 = inv_mod(2, p);

    ReducedSum out;
    out.prefactor = std::pow(static_cast<double>(p), static_cast<double>(n - r)) /
                    (rho ? std::sqrt(static_cast<double>(p)) : 1.0);
    const u64 pr = checked_pow(p, static_cast<unsigned>(r));
    for (u64 u = 0; u < pr; ++u) {
        if (!data.domain(u)) continue;
        QpNumber f2 = data.phi2(u);
        if (f2.is_zero() || f2.valuation() != mu)
            throw ContractViolation(data.family + " [" + data.instance + "]: ord phi2 = " +
                                    std::to_string(f2.valuation()) + " at u = " + std::to_string(u) +
                                    ", declared " + std::to_string(mu));
        QpNumber f1 = data.phi1(u);
        if (!f1.in_ideal(-r - rho)) continue;
        EpsilonFactor eps = epsilon(static_cast<i64>(mul_mod(f2.unit_mod_p(), inv2, p)), p, static_cast<unsigned>(rho));
        UnitPhase th = (-(f1 * f1) / (two * f2)).theta();
        out.stationary_points.push_back({u, data.psi(u) * UnitPhase::from_epsilon(eps) * th});
    }
    out.value = out.prefactor * weighted_total(out.stationary_points);
    return out;
}

double second_derivative_bound(const PrimePowerModulus& q, int upsilon, int lambda, int kappa0, double psi0)
{
    if (upsilon < 0 || lambda < 0 || kappa0 < 0 || !(psi0 >= 0))
        throw InvalidArgument("second derivative test needs nonnegative upsilon, lambda, kappa0, psi0");
    const double p = static_cast<double>(q.p());
    const double kappa1 = std::max(lambda / 2.0, static_cast<double>(kappa0));
    const double exponent = std::min(kappa1 - lambda + kappa0, 0.0);
    return psi0 * (std::pow(p, q.n()) + std::pow(p, upsilon) + std::pow(p, lambda)) * std::pow(p, exponent);
}

double second_derivative_bound(const PhaseData& data)
{
    return second_derivative_bound(data.q, data.sdt.upsilon, data.sdt.lambda, data.sdt.kappa0, data.sdt.psi0);
}

SdtContractReport sdt_contract(const PhaseData& data)
{
    if (!data.phi2) throw InvalidArgument("second derivative test needs phi2");
    const u64 qv = data.q.value();
    SdtContractReport rep;
    rep.min_ord = kOrdInfinity;
    rep.max_ord = -kOrdInfinity;
    bool any = false;
    bool zero_seen = false;
    auto visit = [&](u64 u) {
        if (!data.domain(u)) return;
        QpNumber f2 = data.phi2(u);
        any = true;
        if (f2.is_zero()) zero_seen = true;
        rep.min_ord = std::min(rep.min_ord, f2.valuation());
        rep.max_ord = std::max(rep.max_ord, f2.valuation());
    };
    if (qv <= 20000) {
        for (u64 u = 0; u < qv; ++u) visit(u);
    } else {
        for (u64 s = 0; s < 4096; ++s) visit(mix(s ^ qv) % qv);
    }
    if (!any) {
        rep.min_ord = rep.max_ord = -data.sdt.lambda;
        rep.holds = true;
        return rep;
    }
    rep.holds = !zero_seen && rep.min_ord == -data.sdt.lambda && rep.max_ord == -data.sdt.lambda;
    return rep;
}

namespace {

std::vector<i64> frequency_list(u64 p, unsigned n)
{
    std::vector<i64> out{0, 1, static_cast<i64>(p - 1)};
    for (unsigned j = 1; j < n; ++j) out.push_back(static_cast<i64>(checked_pow(p, j)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<PhaseData> additive_battery(u64 p, unsigned n, bool units_only)
{
    PrimePowerModulus q(p, n);
    const u64 qv = q.value();
    const int prec = working_precision(p, n);
    std::vector<PhaseData> out;
    for (i64 a : frequency_list(p, n)) {
        PhaseData d;
        d.family = units_only ? "ramanujan" : "geometric";
        d.instance = "a=" + std::to_string(a);
        d.q = q;
        d.kind = ReductionKind::Linear;
        d.kappa = 1;
        if (units_only) d.domain = [p](u64 u) { return u % p != 0; };
        else d.domain = [](u64) { return true; };
        const u64 ar = reduce(a, qv);
        d.psi = [ar, qv](u64 u) { return UnitPhase(static_cast<i64>(mul_mod(ar, u, qv)), qv); };
        d.phi1 = [a, p, prec, n](u64) { return QpNumber::from_int(a, p, prec).shift(-static_cast<int>(n)); };
        // any unit works as phi2 here: the quadratic term it adds is integral
        d.phi2 = [p, prec](u64) { return QpNumber::from_int(1, p, prec); };
        d.sdt.upsilon = a == 0 ? 0 : static_cast<int>(n) - ord_p(a, p);
        d.sdt.lambda = 0;
        d.sdt.kappa0 = 0;
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<i64> unit_samples(u64 p)
{
    std::vector<i64> out;
    for (i64 a : {1, 2, 3, static_cast<int>(p - 1)})
        if (a % static_cast<i64>(p) != 0 && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
}

}  // namespace

std::vector<PhaseData> geometric_battery(u64 p, unsigned n) { return additive_battery(p, n, false); }

std::vector<PhaseData> ramanujan_battery(u64 p, unsigned n) { return additive_battery(p, n, true); }

std::vector<PhaseData> chi_twisted_battery(const MultChar& chi)
{
    const PrimePowerModulus q = chi.modulus();
    const u64 p = q.p();
    const unsigned n = q.n();
    const u64 qv = q.value();
    const int prec = working_precision(p, n);
    const i64 alpha = static_cast<i64>(chi.alpha().value());
    const unsigned kappa = std::max(ceil_div(n, 2), ceil_div(n + iota(p), 3));
    std::vector<PhaseData> out;
    for (i64 a : frequency_list(p, n)) {
        PhaseData d;
        d.family = "chi-twisted";
        d.instance = "k=" + std::to_string(chi.k()) + " a=" + std::to_string(a);
        d.q = q;
        d.kind = ReductionKind::Linear;
        d.kappa = kappa;
        d.domain = [p](u64 u) { return u % p != 0; };
        const u64 ar = reduce(a, qv);
        d.psi = [chi, ar, qv](u64 u) {
            return *chi(static_cast<i64>(u)) * UnitPhase(static_cast<i64>(mul_mod(ar, u, qv)), qv);
        };
        d.phi1 = [alpha, a, p, prec, n](u64 u) {
            QpNumber uq = QpNumber::from_int(static_cast<i64>(u), p, prec);
            return (QpNumber::from_int(alpha, p, prec) / uq + QpNumber::from_int(a, p, prec))
                .shift(-static_cast<int>(n));
        };
        d.phi2 = [alpha, p, prec, n](u64 u) {
            QpNumber uq = QpNumber::from_int(static_cast<i64>(u), p, prec);
            return (-QpNumber::from_int(alpha, p, prec) / (uq * uq)).shift(-static_cast<int>(n));
        };
        d.sdt.upsilon = static_cast<int>(n);
        d.sdt.lambda = static_cast<int>(n);
        d.sdt.kappa0 = 1 + iota(p);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<PhaseData> gauss_battery(u64 p, unsigned n)
{
    PrimePowerModulus q(p, n);
    const u64 qv = q.value();
    const int prec = working_precision(p, n);
    std::vector<PhaseData> out;
    for (i64 a : unit_samples(p)) {
        PhaseData d;
        d.family = "gauss";
        d.instance = "a=" + std::to_string(a);
        d.q = q;
        d.kind = ReductionKind::Quadratic;
        d.kappa = 1;
        d.mu = -static_cast<int>(n);
        d.domain = [](u64) { return true; };
        d.psi = [a, qv](u64 u) {
            return UnitPhase(static_cast<i64>(mul_mod(static_cast<u64>(a), mul_mod(u, u, qv), qv)), qv);
        };
        d.phi1 = [a, p, prec, n](u64 u) {
            return QpNumber::from_int(2 * a * static_cast<i64>(u), p, prec).shift(-static_cast<int>(n));
        };
        d.phi2 = [a, p, prec, n](u64) { return QpNumber::from_int(2 * a, p, prec).shift(-static_cast<int>(n)); };
        d.sdt.upsilon = static_cast<int>(n);
        d.sdt.lambda = static_cast<int>(n);
        d.sdt.kappa0 = 0;
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<PhaseData> kloosterman_battery(u64 p, unsigned n)
{
    PrimePowerModulus q(p, n);
    const u64 qv = q.value();
    const int prec = working_precision(p, n);
    std::vector<PhaseData> out;
    std::vector<i64> bs;
    for (i64 b = 1; bs.size() < 24 && b < static_cast<i64>(qv); ++b)
        if (b % static_cast<i64>(p)) bs.push_back(b);
    for (i64 a : {i64{1}, i64{2}}) {
        for (i64 b : bs) {
            PhaseData d;
            d.family = "kloosterman";
            d.instance = "a=" + std::to_string(a) + " b=" + std::to_string(b);
            d.q = q;
            d.kind = ReductionKind::Quadratic;
            // the cubic term of 1/(u + p^k t) is integral once 3k >= n
            d.kappa = ceil_div(n, 3);
            d.mu = -static_cast<int>(n);
            d.domain = [p](u64 u) { return u % p != 0; };
            d.psi = [a, b, qv](u64 u) {
                u64 ui = inv_mod(static_cast<i64>(u), qv);
                return UnitPhase(static_cast<i64>((mul_mod(static_cast<u64>(a), u, qv) +
                                                   mul_mod(static_cast<u64>(b), ui, qv)) % qv),
                                 qv);
            };
            d.phi1 = [a, b, p, prec, n](u64 u) {
                QpNumber uq = QpNumber::from_int(static_cast<i64>(u), p, prec);
                return (QpNumber::from_int(a, p, prec) - QpNumber::from_int(b, p, prec) / (uq * uq))
                    .shift(-static_cast<int>(n));
            };
            d.phi2 = [b, p, prec, n](u64 u) {
                QpNumber uq = QpNumber::from_int(static_cast<i64>(u), p, prec);
                return (QpNumber::from_int(2 * b, p, prec) / (uq * uq * uq)).shift(-static_cast<int>(n));
            };
            d.sdt.upsilon = static_cast<int>(n);
            d.sdt.lambda = static_cast<int>(n);
            d.sdt.kappa0 = 1;
            out.push_back(std::move(d));
        }
    }
    return out;
}

PhaseData gsum_summand(const MultChar& chi, unsigned r, u64 c, i64 m, i64 l, int sigma1, int sigma2,
                       const SqrtBranch& branch, bool nondegenerate)
{
    const PrimePowerModulus q = chi.modulus();
    const u64 p = q.p();
    const unsigned n = q.n();
    if (r < 1 || r > n) throw InvalidArgument("need 1 <= r <= n");
    if (c == 0 || c % p == 0) throw InvalidArgument("c must be positive and prime to p");
    // when 2 kappa > n the quadratic reduction refuses the instance; the sum is
    // still a valid input for the second derivative test
    const unsigned kappa = ceil_div(n + iota(p), 3);
    const u64 qv = q.value();
    const u64 pr = checked_pow(p, r);
    const int prec = working_precision(p, n);
    const unsigned wide = static_cast<unsigned>(prec);
    const u64 wq = checked_pow(p, wide);
    const u64 c_bar = inv_mod(static_cast<i64>(c % qv), qv);
    const i64 alpha = static_cast<i64>(chi.alpha().value());
    const unsigned rho1 = n % 2, rho2 = r % 2;
    const i64 shift = static_cast<i64>(checked_pow(p, n - r));
    const u64 mr = reduce(m, wq), lr = reduce(l, wq);
    const int s1 = sigma1 >= 0 ? 1 : -1, s2 = sigma2 >= 0 ? 1 : -1;

    auto root = [p, wide, wq, branch](u64 u, u64 x) {
        return psqrt(static_cast<i64>(mul_mod(u % wq, x, wq)), p, wide, branch);
    };
    auto Q = [p, prec](i64 x) { return QpNumber::from_int(x, p, prec); };
    auto cq = Q(static_cast<i64>(c));

    // alpha/(2u^2) + s1 m^2/(4 (mu)^{3/2} c) + s2 l^2 p^{n-r}/(4 (lu)^{3/2} c)
    auto quad_bracket = [=](u64 u) {
        QpNumber uq = Q(static_cast<i64>(u));
        QpNumber rm = Q(static_cast<i64>(root(u, mr)));
        QpNumber rl = Q(static_cast<i64>(root(u, lr)));
        QpNumber mq = Q(m), lq = Q(l);
        QpNumber t0 = Q(alpha) / (Q(2) * uq * uq);
        QpNumber t1 = Q(s1) * mq * mq / (Q(4) * rm * rm * rm * cq);
        QpNumber t2 = Q(s2) * lq * lq * Q(shift) / (Q(4) * rl * rl * rl * cq);
        return t0 + t1 + t2;
    };

    PhaseData d;
    d.family = "gsum-psi";
    d.instance = "k=" + std::to_string(chi.k()) + " r=" + std::to_string(r) + " c=" + std::to_string(c) +
                 " m=" + std::to_string(m) + " l=" + std::to_string(l) + " s=" + sign_char(s1) + sign_char(s2);
    d.q = q;
    d.kind = ReductionKind::Quadratic;
    d.kappa = kappa;
    d.mu = -static_cast<int>(n);
    d.domain = [=](u64 u) {
        if (u % p == 0) return false;
        if (legendre(static_cast<i64>(mul_mod(u % p, mr % p, p)), p) != 1) return false;
        if (legendre(static_cast<i64>(mul_mod(u % p, lr % p, p)), p) != 1) return false;
        if (!nondegenerate) return true;
        return quad_bracket(u % p).valuation() == 0;
    };
    d.psi = [=](u64 u) {
        const u64 rm = root(u, mr) % qv;
        const u64 rl = root(u, lr) % qv;
        const u64 a1 = mul_mod(rm, c_bar, qv);
        const u64 a2 = mul_mod(rl, c_bar, qv);
        UnitPhase out = *chi(static_cast<i64>(u));
        out *= UnitPhase::from_epsilon(epsilon(static_cast<i64>(s1 > 0 ? a1 % p : p - a1 % p), p, rho1));
        out *= UnitPhase::from_epsilon(epsilon(static_cast<i64>(s2 > 0 ? a2 % p : p - a2 % p), p, rho2));
        const u64 x1 = mul_mod(2, a1, qv);
        const u64 x2 = mul_mod(2, a2 % pr, pr);
        out *= UnitPhase(s1 > 0 ? static_cast<i64>(x1) : -static_cast<i64>(x1), qv);
        out *= UnitPhase(s2 > 0 ? static_cast<i64>(x2) : -static_cast<i64>(x2), pr);
        return out;
    };
    d.phi1 = [=](u64 u) {
        QpNumber uq = Q(static_cast<i64>(u));
        QpNumber rm = Q(static_cast<i64>(root(u, mr)));
        QpNumber rl = Q(static_cast<i64>(root(u, lr)));
        QpNumber b = Q(alpha) / uq + Q(s1) * Q(m) / (rm * cq) + Q(s2) * Q(l) * Q(shift) / (rl * cq);
        return b.shift(-static_cast<int>(n));
    };
    d.phi2 = [=](u64 u) { return (Q(-2) * quad_bracket(u)).shift(-static_cast<int>(n)); };
    d.sdt.upsilon = static_cast<int>(n);
    d.sdt.lambda = static_cast<int>(n);
    d.sdt.kappa0 = 1 + iota(p);
    return d;
}

std::vector<PhaseData> gsum_battery(const MultChar& chi, const SqrtBranch& branch)
{
    const u64 p = chi.p();
    const unsigned n = chi.n();
    i64 nonresidue = 2;
    while (legendre(nonresidue, p) != -1) ++nonresidue;
    i64 residue = 4 % static_cast<i64>(p) == 1 ? 1 + static_cast<i64>(p) : 4;
    std::vector<PhaseData> out;
    for (unsigned r = 2; r <= n; ++r) {
        for (u64 c : {1ull, 2ull}) {
            for (auto [m, l] : {std::pair<i64, i64>{1, 1}, {1, residue}, {nonresidue, nonresidue},
                                {nonresidue, nonresidue * residue}}) {
                for (int s1 : {1, -1})
                    for (int s2 : {1, -1})
                        out.push_back(gsum_summand(chi, r, c, m, l, s1, s2, branch, true));
            }
        }
    }
    return out;
}

PhaseData phi_summand(const MultChar& chi, unsigned r, u64 d_cof, i64 mt, i64 l1, i64 l2, int sigma1, int sigma2,
                      const SqrtBranch& branch)
{
    const PrimePowerModulus q = chi.modulus();
    const u64 p = q.p();
    const unsigned n = q.n();
    if (r < 1 || r >= n) throw RegimeViolation("the Phi sums need 1 <= r < n");
    if (d_cof == 0 || d_cof % p == 0) throw InvalidArgument("d must be positive and prime to p");
    if (legendre(l1, p) != 1 || legendre(l2, p) != 1) throw NotASquare("l1 and l2 must be unit squares");
    unsigned kappa = ceil_div(n, 2);
    while (3 * kappa < n + iota(p)) ++kappa;
    const u64 qv = q.value();
    const int prec = working_precision(p, n);
    const unsigned wide = static_cast<unsigned>(prec);
    const u64 wq = checked_pow(p, wide);
    const i64 alpha = static_cast<i64>(chi.alpha().value());
    const u64 shift = checked_pow(p, n - r);
    const int s1 = sigma1 >= 0 ? 1 : -1, s2 = sigma2 >= 0 ? 1 : -1;
    const u64 r1 = psqrt(l1, p, wide, branch), r2 = psqrt(l2, p, wide, branch);
    const u64 twist = mul_mod(reduce(mt, qv), inv_mod(static_cast<i64>(d_cof % qv), qv), qv);
    const MultChar chi_bar = chi.conj();

    auto eta = [=](u64 us, u64 lroot) {
        u64 a = s1 > 0 ? us : (wq - us) % wq;
        u64 b = mul_mod(lroot, shift % wq, wq);
        if (s2 < 0) b = (wq - b) % wq;
        return (a + b) % wq;
    };
    auto Q = [p, prec](i64 x) { return QpNumber::from_int(x, p, prec); };

    PhaseData d;
    d.family = "phi";
    d.instance = "k=" + std::to_string(chi.k()) + " r=" + std::to_string(r) + " d=" + std::to_string(d_cof) +
                 " mt=" + std::to_string(mt) + " l1=" + std::to_string(l1) + " l2=" + std::to_string(l2) +
                 " s=" + sign_char(s1) + sign_char(s2);
    d.q = q;
    d.kind = ReductionKind::Linear;
    d.kappa = kappa;
    d.domain = [p](u64 u) { return u % p != 0 && legendre(static_cast<i64>(u % p), p) == 1; };
    d.psi = [=](u64 u) {
        const u64 us = psqrt(static_cast<i64>(u % wq), p, wide, branch);
        const u64 e1 = eta(us, r1) % qv, e2 = eta(us, r2) % qv;
        UnitPhase out = *chi_bar(static_cast<i64>(mul_mod(e1, e1, qv)));
        out *= *chi(static_cast<i64>(mul_mod(e2, e2, qv)));
        out *= UnitPhase(static_cast<i64>(mul_mod(twist, u, qv)), qv);
        return out;
    };
    d.phi1 = [=](u64 u) {
        const u64 us = psqrt(static_cast<i64>(u % wq), p, wide, branch);
        QpNumber uq = Q(static_cast<i64>(us));
        QpNumber e1 = Q(static_cast<i64>(eta(us, r1))), e2 = Q(static_cast<i64>(eta(us, r2)));
        QpNumber a = Q(s1) * Q(alpha);
        QpNumber b = QpNumber::ratio(mt, static_cast<i64>(d_cof), p, prec) + a / (uq * e2) - a / (uq * e1);
        return b.shift(-static_cast<int>(n));
    };
    d.phi2 = [=](u64 u) {
        const u64 us = psqrt(static_cast<i64>(u % wq), p, wide, branch);
        QpNumber uq = Q(static_cast<i64>(us));
        QpNumber e1 = Q(static_cast<i64>(eta(us, r1))), e2 = Q(static_cast<i64>(eta(us, r2)));
        QpNumber u3 = uq * uq * uq;
        QpNumber a = Q(alpha);
        QpNumber t1 = a * (Q(s1) * e1 + uq) / (Q(4) * e1 * e1 * u3);
        QpNumber t2 = a * (Q(s1) * e2 + uq) / (Q(4) * e2 * e2 * u3);
        return (Q(2) * (t1 - t2)).shift(-static_cast<int>(n));
    };
    const int omega = std::min(ord_p(l1 - l2, p), static_cast<int>(r));
    d.sdt.upsilon = static_cast<int>(r) - omega;
    d.sdt.lambda = static_cast<int>(r) - omega;
    d.sdt.kappa0 = 1;
    return d;
}

std::vector<PhaseData> phi_battery(const MultChar& chi, const SqrtBranch& branch)
{
    const u64 p = chi.p();
    const unsigned n = chi.n();
    std::vector<PhaseData> out;
    i64 other_square = 4 % static_cast<i64>(p) == 1 ? 1 + static_cast<i64>(p) : 4;
    for (unsigned r = std::max(2u, ceil_div(n, 2)); r < n; ++r) {
        const i64 pnr = static_cast<i64>(checked_pow(p, n - r));
        std::vector<i64> l2s{other_square};
        for (unsigned j = 1; j <= r; ++j) l2s.push_back(1 + static_cast<i64>(checked_pow(p, j)));
        std::sort(l2s.begin(), l2s.end());
        l2s.erase(std::unique(l2s.begin(), l2s.end()), l2s.end());
        for (u64 dc : {1ull, 2ull}) {
            for (i64 l2 : l2s) {
                for (i64 mt : {i64{0}, i64{1}, pnr, 2 * pnr}) {
                    for (int s1 : {1, -1})
                        for (int s2 : {1, -1}) out.push_back(phi_summand(chi, r, dc, mt, 1, l2, s1, s2, branch));
                }
            }
        }
    }
    return out;
}

std::vector<PhaseData> builtin_battery(u64 p, unsigned n)
{
    std::vector<PhaseData> out;
    auto append = [&out](std::vector<PhaseData> more) {
        for (auto& d : more) out.push_back(std::move(d));
    };
    append(geometric_battery(p, n));
    append(ramanujan_battery(p, n));
    append(gauss_battery(p, n));
    append(kloosterman_battery(p, n));
    if (n >= 2) {
        MultChar chi(p, n, 1);
        SqrtBranch branch = SqrtBranch::canonical(p);
        append(chi_twisted_battery(chi));
        append(gsum_battery(chi, branch));
        if (n >= 3) append(phi_battery(chi, branch));
    }
    return out;
}

}  // namespace padic
