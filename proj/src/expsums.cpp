#include "padic_expsums/expsums.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace padic {

std::vector<u64> divisors(u64 n)
{
    std::vector<u64> small, large;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

int mobius(u64 n)
{
    if (n == 0) throw InvalidArgument("mobius(0) is undefined");
    int sign = 1;
    for (u64 f = 2; f * f <= n; ++f) {
        if (n % f) continue;
        n /= f;
        if (n % f == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

u64 euler_phi(u64 n)
{
    u64 result = n;
    for (u64 f : distinct_prime_factors(n)) result = result / f * (f - 1);
    return result;
}

ExpSumValue ramanujan_brute(i64 u, u64 c)
{
    if (c == 0) throw InvalidArgument("Ramanujan sum needs c >= 1");
    PhaseAccumulator acc(c);
    const u64 ur = reduce(u, c);
    for (u64 a = 0; a < c; ++a) {
        if (std::gcd(a, c) != 1) continue;
        acc.add_index(mul_mod(a, ur, c));
    }
    return {acc.total(), acc.terms(), 1e-12 * static_cast<double>(acc.terms())};
}

i64 ramanujan_closed(i64 u, u64 c)
{
    if (c == 0) throw InvalidArgument("Ramanujan sum needs c >= 1");
    u64 g = std::gcd(reduce(u, c), c);
    if (g == 0) g = c;
    i64 total = 0;
    for (u64 d : divisors(g)) total += static_cast<i64>(d) * mobius(c / d);
    return total;
}

ExpSumValue kloosterman_brute(i64 a, i64 b, u64 m)
{
    if (m == 0) throw InvalidArgument("Kloosterman sum needs a positive modulus");
    PhaseAccumulator acc(m);
    const u64 ar = reduce(a, m), br = reduce(b, m);
    for (u64 u = 0; u < m; ++u) {
        if (std::gcd(u, m) != 1) continue;
        u64 ui = inv_mod(static_cast<i64>(u), m);
        acc.add_index((mul_mod(ar, u, m) + mul_mod(br, ui, m)) % m);
    }
    return {acc.total(), acc.terms(), 1e-12 * static_cast<double>(acc.terms())};
}

std::vector<u64> inverse_table(u64 m)
{
    std::vector<u64> out(m, 0);
    for (u64 u = 1; u < m; ++u)
        if (std::gcd(u, m) == 1) out[u] = inv_mod(static_cast<i64>(u), m);
    return out;
}

ExpSumValue kloosterman_brute(i64 a, i64 b, u64 m, const std::vector<u64>& inverses)
{
    if (m == 0) throw InvalidArgument("Kloosterman sum needs a positive modulus");
    if (inverses.size() != m) throw InvalidArgument("inverse table has the wrong size");
    PhaseAccumulator acc(m);
    const u64 ar = reduce(a, m), br = reduce(b, m);
    for (u64 u = 0; u < m; ++u) {
        if (inverses[u] == 0 && m > 1) continue;
        acc.add_index((mul_mod(ar, u, m) + mul_mod(br, inverses[u], m)) % m);
    }
    return {acc.total(), acc.terms(), 1e-12 * static_cast<double>(acc.terms())};
}

KloostermanClosedForm kloosterman_closed_terms(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch)
{
    const u64 p = q.p();
    const u64 m = q.value();
    if (q.n() < 2) throw InvalidArgument("the Kloosterman closed form needs n >= 2");
    if (reduce(a, p) == 0 || reduce(b, p) == 0)
        throw InvalidArgument("the Kloosterman closed form needs a and b prime to p");
    KloostermanClosedForm out;
    out.scale = std::pow(static_cast<double>(p), q.n() / 2.0);
    out.rho = q.n() % 2;
    const u64 ab = mul_mod(reduce(a, m), reduce(b, m), m);
    if (legendre(static_cast<i64>(ab % p), p) != 1) {
        out.vanishes = true;
        out.value = {0.0, 0.0};
        return out;
    }
    out.root = psqrt(static_cast<i64>(ab), p, q.n(), branch);
    const u64 neg_root = m - out.root;
    out.eps[0] = epsilon(static_cast<i64>(out.root % p), p, out.rho);
    out.eps[1] = epsilon(static_cast<i64>(neg_root % p), p, out.rho);
    out.phases[0] = UnitPhase(static_cast<i64>(mul_mod(2, out.root, m)), m);
    out.phases[1] = UnitPhase(static_cast<i64>(mul_mod(2, neg_root, m)), m);
    cplx s{0.0, 0.0};
    for (int j = 0; j < 2; ++j) s += (UnitPhase::from_epsilon(out.eps[j]) * out.phases[j]).to_complex();
    out.value = out.scale * s;
    return out;
}

cplx kloosterman_closed(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch)
{
    return kloosterman_closed_terms(a, b, q, branch).value;
}

cplx kloosterman_prime_power(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch)
{
    const u64 p = q.p();
    const u64 m = q.value();
    const u64 ar = reduce(a, m), br = reduce(b, m);
    const bool a_unit = ar % p != 0, b_unit = br % p != 0;
    if (q.n() == 1) return kloosterman_brute(static_cast<i64>(ar), static_cast<i64>(br), m).value;
    if (a_unit && b_unit) return kloosterman_closed(static_cast<i64>(ar), static_cast<i64>(br), q, branch);
    if (a_unit != b_unit) return {0.0, 0.0};
    // both divisible by p: every unit class mod p^{n-1} has p lifts
    PrimePowerModulus lower(p, q.n() - 1);
    return static_cast<double>(p) *
           kloosterman_prime_power(static_cast<i64>(ar / p), static_cast<i64>(br / p), lower, branch);
}

cplx kloosterman_crt(i64 a, i64 b, u64 c, const PrimePowerModulus& q, const SqrtBranch& branch)
{
    if (c == 0 || std::gcd(c, q.p()) != 1) throw InvalidArgument("cofactor must be positive and prime to p");
    const u64 m = q.value();
    const u64 c_bar = inv_mod(static_cast<i64>(c % m), m);
    const u64 q_bar = inv_mod(static_cast<i64>(m % c), c);
    const u64 ap = mul_mod(reduce(a, m), c_bar, m), bp = mul_mod(reduce(b, m), c_bar, m);
    const u64 ac = mul_mod(reduce(a, c), q_bar, c), bc = mul_mod(reduce(b, c), q_bar, c);
    return kloosterman_prime_power(static_cast<i64>(ap), static_cast<i64>(bp), q, branch) *
           kloosterman_brute(static_cast<i64>(ac), static_cast<i64>(bc), c).value;
}

bool reciprocity_identity(i64 m, i64 x, u64 c, u64 big_q)
{
    if (c == 0 || big_q == 0 || std::gcd(c, big_q) != 1)
        throw InvalidArgument("reciprocity needs coprime positive moduli");
    const u64 total = checked_mul(c, big_q);
    if (std::gcd(reduce(x, total), total) != 1) throw InvalidArgument("x must be prime to c*Q");
    const u64 x_full = inv_mod(x, total);
    UnitPhase lhs(static_cast<i64>(mul_mod(reduce(m, total), x_full, total)), total);
    const u64 x_q = inv_mod(x, big_q);
    const u64 c_bar = inv_mod(static_cast<i64>(c % big_q), big_q);
    UnitPhase right_q(static_cast<i64>(mul_mod(mul_mod(reduce(m, big_q), c_bar, big_q), x_q, big_q)), big_q);
    const u64 x_c = inv_mod(x, c);
    const u64 q_bar = inv_mod(static_cast<i64>(big_q % c), c);
    UnitPhase right_c(static_cast<i64>(mul_mod(mul_mod(reduce(m, c), q_bar, c), x_c, c)), c);
    return lhs == right_q * right_c;
}

bool verify_reciprocity(i64 m, i64 a, u64 c, const PrimePowerModulus& q)
{
    return reciprocity_identity(m, a, c, q.value());
}

bool verify_reciprocity_instances(i64 m, i64 l, i64 a, i64 b, u64 c, const PrimePowerModulus& q, unsigned r)
{
    const u64 p = q.p();
    const unsigned n = q.n();
    if (r > n) throw InvalidArgument("need r <= n");
    if (c == 0 || std::gcd(c, p) != 1) throw InvalidArgument("c must be positive and prime to p");
    if (reduce(a, p) == 0 || std::gcd(reduce(a, c), c) != 1) throw InvalidArgument("a must be prime to c*p");
    const u64 pn = q.value();
    const u64 pr = checked_pow(p, r);

    // first splitting, with the c-side written through a p^{2n-r}
    const u64 big = checked_mul(c, pn);
    const i128 x = static_cast<i128>(a) * checked_pow(p, n - r) + static_cast<i128>(b) * c;
    const u64 xr = reduce(x, big);
    if (std::gcd(xr, big) != 1) throw InvalidArgument("a p^{n-r} + b c must be prime to c p^n");
    UnitPhase lhs1(static_cast<i64>(mul_mod(reduce(m, big), inv_mod(static_cast<i64>(xr), big), big)), big);
    const u64 c_bar = inv_mod(static_cast<i64>(c % pn), pn);
    UnitPhase q_side(static_cast<i64>(mul_mod(mul_mod(reduce(m, pn), c_bar, pn),
                                             inv_mod(static_cast<i64>(xr % pn), pn), pn)),
                     pn);
    u64 apow = reduce(a, c);
    apow = mul_mod(apow, pow_mod(p % c, 2 * n - r, c), c);
    UnitPhase c_side(static_cast<i64>(mul_mod(reduce(m, c), c == 1 ? 0 : inv_mod(static_cast<i64>(apow), c), c)), c);
    bool first = lhs1 == q_side * c_side;

    // second splitting: e(l a^-1 / (c p^r))
    bool second = reciprocity_identity(l, a, c, pr);
    return first && second;
}

}  // namespace padic
