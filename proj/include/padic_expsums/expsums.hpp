#pragma once

// Ramanujan and Kloosterman sums, brute force and closed form, and the
// reciprocity splitting of additive characters across coprime moduli.

#include <array>
#include <vector>

#include "padic_expsums/characters.hpp"
#include "padic_expsums/padic.hpp"
#include "padic_expsums/phase.hpp"

namespace padic {

struct ExpSumValue {
    cplx value;
    u64 term_count = 0;
    /// 1e-12 per summand.
    double tolerance = 0.0;
};

std::vector<u64> divisors(u64 n);
int mobius(u64 n);
u64 euler_phi(u64 n);

ExpSumValue ramanujan_brute(i64 u, u64 c);
/// Sum over d | (u, c) of d mu(c/d).
i64 ramanujan_closed(i64 u, u64 c);

ExpSumValue kloosterman_brute(i64 a, i64 b, u64 m);
/// Same, with inverses[u] = u^-1 mod m precomputed for every unit u.
ExpSumValue kloosterman_brute(i64 a, i64 b, u64 m, const std::vector<u64>& inverses);
std::vector<u64> inverse_table(u64 m);

/// The closed form as exact pieces: value = scale * sum_j eps_j * phase_j.
struct KloostermanClosedForm {
    bool vanishes = false;
    /// p^{n/2}
    double scale = 0.0;
    u64 root = 0;  // (ab)_{1/2} mod p^n
    unsigned rho = 0;
    std::array<EpsilonFactor, 2> eps{};
    std::array<UnitPhase, 2> phases{};
    cplx value;
};

/// Valid for p not dividing ab and n >= 2.
KloostermanClosedForm kloosterman_closed_terms(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch);
cplx kloosterman_closed(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch);

/// S(a, b; p^n) for any a, b: the closed form on units, exact vanishing when p
/// divides exactly one argument (n >= 2), descent when p divides both.
cplx kloosterman_prime_power(i64 a, i64 b, const PrimePowerModulus& q, const SqrtBranch& branch);

/// S(a, b; c p^n) as S(c^-1 a, c^-1 b; p^n) S(p^-n a, p^-n b; c).
cplx kloosterman_crt(i64 a, i64 b, u64 c, const PrimePowerModulus& q, const SqrtBranch& branch);

/// e(m x^-1 / (cQ)) = e(m c^-1 x^-1 / Q) e(m Q^-1 x^-1 / c), exactly.
bool reciprocity_identity(i64 m, i64 x, u64 c, u64 big_q);

/// The identity at x = a, Q = p^n.
bool verify_reciprocity(i64 m, i64 a, u64 c, const PrimePowerModulus& q);

/// The two splittings used for K(m, l, c): the one for x = a p^{n-r} + b c modulo
/// c p^n, and the one for l a^-1 modulo c p^r.
bool verify_reciprocity_instances(i64 m, i64 l, i64 a, i64 b, u64 c, const PrimePowerModulus& q, unsigned r);

}  // namespace padic
