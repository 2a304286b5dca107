#include "padic_expsums/characters.hpp"

#include <string>

#include "padic_expsums/padic.hpp"

namespace padic {

namespace {

constexpr u64 kTableCeiling = 1000000;
constexpr u64 kPrimeTableCeiling = 10000000;
// Postnikov verification runs over every m = 1 mod p below this many classes.
constexpr u64 kExhaustiveAlphaCheck = 200000;
constexpr u64 kSampledAlphaChecks = 4096;

u64 splitmix(u64 x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

u64 least_primitive_root(u64 p)
{
    const u64 p2 = checked_mul(p, p);
    const u64 order = p * (p - 1);
    const auto factors = distinct_prime_factors(order);
    for (u64 g = 2; g < p2; ++g) {
        if (g % p == 0) continue;
        bool generates = true;
        for (u64 f : factors) {
            if (pow_mod(g, order / f, p2) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    throw InternalInconsistency("no primitive root modulo p^2 for p = " + std::to_string(p));
}

MultChar::MultChar(u64 p, unsigned n, u64 k) : q_(p, n), k_(k), alpha_(0, 1)
{
    if (n < 2) throw InvalidArgument("characters are built for n >= 2");
    if (k >= q_.phi()) throw InvalidArgument("character index must lie in [0, phi(p^n))");
    if (k % p == 0) throw NotPrimitive("index " + std::to_string(k) + " is divisible by p; character is not primitive");
    if (p > kPrimeTableCeiling) throw InvalidArgument("prime too large for discrete-log tables");

    g_ = least_primitive_root(p);
    const u64 qv = q_.value();
    const u64 phi = q_.phi();

    auto by_p = std::make_shared<std::vector<std::uint32_t>>(p, 0);
    u64 x = 1;
    for (u64 j = 0; j + 1 < p; ++j) {
        (*by_p)[x] = static_cast<std::uint32_t>(j);
        x = mul_mod(x, g_ % p, p);
    }
    table_p_ = by_p;

    const u64 gp = pow_mod(g_, p - 1, qv);
    const u64 lg = plog(gp, p, n);
    const u64 pn1 = qv / p;
    log_unit_inverse_ = inv_mod(static_cast<i64>((lg / p) % pn1), pn1);

    if (qv <= kTableCeiling) {
        auto full = std::make_shared<std::vector<std::uint32_t>>(qv, 0);
        x = 1;
        for (u64 j = 0; j < phi; ++j) {
            (*full)[x] = static_cast<std::uint32_t>(j);
            x = mul_mod(x, g_, qv);
        }
        table_ = full;
        roots_ = std::make_shared<RootsOfUnity>(phi);
    }
    compute_alpha();
}

u64 MultChar::dlog_analytic(u64 u) const
{
    const u64 p = q_.p();
    const u64 qv = q_.value();
    const u64 pn1 = qv / p;
    u64 mod_p_minus_1 = (*table_p_)[u % p];
    u64 lu = plog(pow_mod(u, p - 1, qv), p, q_.n());
    u64 mod_pn1 = mul_mod((lu / p) % pn1, log_unit_inverse_, pn1);
    // combine ind = a mod (p-1), ind = b mod p^{n-1}
    const u64 phi = q_.phi();
    u64 step = mul_mod((mod_p_minus_1 + (p - 1) - mod_pn1 % (p - 1)) % (p - 1),
                       inv_mod(static_cast<i64>(pn1 % (p - 1)), p - 1), p - 1);
    return (mod_pn1 + mul_mod(step, pn1, phi)) % phi;
}

u64 MultChar::dlog(i64 u) const
{
    const u64 r = reduce(u, q_.value());
    if (r % q_.p() == 0) throw NonInvertible("discrete log of a non-unit");
    if (table_) return (*table_)[r];
    return dlog_analytic(r);
}

u64 MultChar::phase_index(i64 u) const { return mul_mod(k_, dlog(u), q_.phi()); }

std::optional<UnitPhase> MultChar::operator()(i64 u) const
{
    if (reduce(u, q_.p()) == 0) return std::nullopt;
    return UnitPhase(static_cast<i64>(phase_index(u)), q_.phi());
}

cplx MultChar::value(i64 u) const
{
    if (reduce(u, q_.p()) == 0) return {0.0, 0.0};
    u64 j = phase_index(u);
    if (roots_) return (*roots_)[j];
    return UnitPhase(static_cast<i64>(j), q_.phi()).to_complex();
}

MultChar MultChar::conj() const
{
    MultChar c = *this;
    c.k_ = (q_.phi() - k_) % q_.phi();
    c.alpha_ = -alpha_;
    return c;
}

Residue MultChar::alpha_lift(u64 lift) const
{
    const u64 qv = q_.value();
    const u64 pn1 = qv / q_.p();
    return Residue::from_unsigned((alpha_.value() + (lift % q_.p()) * pn1) % qv, qv);
}

bool MultChar::postnikov_holds(u64 m) const
{
    const u64 qv = q_.value();
    auto lhs = (*this)(static_cast<i64>(m % qv));
    if (!lhs) return false;
    u64 arg = mul_mod(alpha_.value(), plog(m % qv, q_.p(), q_.n()), qv);
    return *lhs == theta(static_cast<i64>(arg), q_.p(), q_.n());
}

void MultChar::compute_alpha()
{
    const u64 p = q_.p();
    const u64 qv = q_.value();
    const u64 pn1 = qv / p;
    u64 j1 = dlog(static_cast<i64>(1 + p));
    if (j1 % (p - 1) != 0) throw InternalInconsistency("ind(1+p) is not a multiple of p-1");
    u64 j = j1 / (p - 1);
    u64 l = plog(1 + p, p, q_.n()) / p;  // log_p(1+p)/p mod p^{n-1}
    u64 a = mul_mod(mul_mod(k_ % pn1, j % pn1, pn1), inv_mod(static_cast<i64>(l % pn1), pn1), pn1);
    alpha_ = Residue::from_unsigned(a, pn1);

    auto check = [&](u64 i) {
        u64 m = (1 + mul_mod(p, i % pn1, qv)) % qv;
        if (!postnikov_holds(m))
            throw InternalInconsistency("Postnikov identity fails at m = " + std::to_string(m) + " mod " +
                                        std::to_string(qv));
    };
    if (pn1 <= kExhaustiveAlphaCheck) {
        for (u64 i = 0; i < pn1; ++i) check(i);
    } else {
        for (u64 s = 0; s < kSampledAlphaChecks; ++s) check(splitmix(s ^ (qv << 8) ^ k_) % pn1);
    }
}

UnitPhase theta(i64 num, u64 p, unsigned j) { return UnitPhase(num, checked_pow(p, j)); }

cplx gauss_sum(const MultChar& chi)
{
    const u64 p = chi.p();
    const u64 qv = chi.modulus().value();
    const u64 den = checked_mul(qv, p - 1);
    PhaseAccumulator acc(den);
    for (u64 b = 1; b < qv; ++b) {
        if (b % p == 0) continue;
        // chi(b) = e(j / (p^{n-1}(p-1))) = e(j p / den); e(b / p^n) = e(b (p-1) / den)
        u64 idx = (mul_mod(chi.phase_index(static_cast<i64>(b)), p, den) + mul_mod(b, p - 1, den)) % den;
        acc.add_index(idx);
    }
    return acc.total();
}

UnitPhase expansion_defect(const MultChar& chi, u64 u, unsigned kappa, u64 t)
{
    const u64 p = chi.p();
    const u64 qv = chi.modulus().value();
    u %= qv;
    if (u % p == 0) throw InvalidArgument("expansion point must be a unit");
    const u64 pk = pow_mod(p, kappa, qv);
    const u64 shift = mul_mod(pk, t % qv, qv);
    const u64 moved = (u + shift) % qv;
    UnitPhase lhs = *chi(static_cast<i64>(moved)) * chi(static_cast<i64>(u))->conj();
    const u64 u_inv = inv_mod(static_cast<i64>(u), qv);
    const u64 lin = mul_mod(shift, u_inv, qv);
    const u64 quad = mul_mod(mul_mod(shift, shift, qv),
                             inv_mod(static_cast<i64>(mul_mod(2, mul_mod(u, u, qv), qv)), qv), qv);
    const u64 arg = mul_mod(chi.alpha().value(), (lin + qv - quad) % qv, qv);
    return lhs * theta(static_cast<i64>(arg), p, chi.n()).conj();
}

std::vector<u64> primitive_indices(u64 p, unsigned n)
{
    PrimePowerModulus q(p, n);
    std::vector<u64> out;
    for (u64 k = 0; k < q.phi(); ++k)
        if (k % p) out.push_back(k);
    return out;
}

}  // namespace padic
