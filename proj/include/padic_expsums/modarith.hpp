#pragma once

// Exact residue arithmetic modulo prime powers and small composite moduli.
//
// Every modulus handled here stays below 2^62, so products of two residues
// fit an unsigned 128-bit intermediate. Anything that would leave that range
// throws OverflowError instead of wrapping.

#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "padic_expsums/errors.hpp"

namespace padic {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr u64 kExactLimit = u64{1} << 62;
inline constexpr int kOrdInfinity = std::numeric_limits<int>::max();

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

/// Canonical representative of x in [0, m).
u64 reduce(i64 x, u64 m);
u64 reduce(i128 x, u64 m);
inline u64 reduce(int x, u64 m) { return reduce(static_cast<i64>(x), m); }

/// base^exp, throwing OverflowError once the result reaches kExactLimit.
u64 checked_pow(u64 base, unsigned exp);
u64 checked_mul(u64 a, u64 b);

bool is_prime(u64 n);
std::vector<u64> distinct_prime_factors(u64 n);

class PrimePowerModulus {
public:
    PrimePowerModulus(u64 p, unsigned n);

    u64 p() const { return p_; }
    unsigned n() const { return n_; }
    u64 value() const { return value_; }
    u64 phi() const { return value_ / p_ * (p_ - 1); }
    /// p^k for 0 <= k; checked against the exact-integer range.
    u64 power(unsigned k) const { return checked_pow(p_, k); }

    bool operator==(const PrimePowerModulus&) const = default;

private:
    u64 p_;
    unsigned n_;
    u64 value_;
};

class Residue {
public:
    Residue(i64 value, u64 modulus);

    static Residue from_unsigned(u64 value, u64 modulus);

    u64 value() const { return value_; }
    u64 modulus() const { return modulus_; }
    bool is_unit() const;

    Residue operator+(const Residue& rhs) const;
    Residue operator-(const Residue& rhs) const;
    Residue operator*(const Residue& rhs) const;
    Residue operator-() const;
    Residue pow(u64 exp) const;
    Residue inverse() const;

    bool operator==(const Residue&) const = default;

private:
    Residue(u64 value, u64 modulus, bool /*already_reduced*/);
    void require_same_modulus(const Residue& rhs) const;

    u64 value_;
    u64 modulus_;
};

/// Multiplicative inverse; NonInvertible when gcd(x, m) > 1.
Residue inv(const Residue& x);
u64 inv_mod(i64 x, u64 m);

/// Largest k with p^k | x, or kOrdInfinity for x = 0.
int ord_p(i64 x, u64 p);
int ord_p(i128 x, u64 p);
inline int ord_p(int x, u64 p) { return ord_p(static_cast<i64>(x), p); }

/// ord_p of a residue known only modulo p^n. A zero residue is reported as
/// saturated at n, meaning "at least n".
struct TruncatedOrd {
    int value;
    bool saturated;

    bool operator==(const TruncatedOrd&) const = default;
};
TruncatedOrd ord_p_truncated(u64 residue, const PrimePowerModulus& q);

/// Legendre symbol via Euler's criterion.
int legendre(i64 a, u64 p);

/// A fourth root of unity i^quarter.
class EpsilonFactor {
public:
    constexpr EpsilonFactor() = default;
    static constexpr EpsilonFactor from_quarter(int quarter)
    {
        EpsilonFactor e;
        e.quarter_ = ((quarter % 4) + 4) % 4;
        return e;
    }

    constexpr int quarter() const { return quarter_; }
    std::complex<double> to_complex() const;
    constexpr EpsilonFactor operator*(EpsilonFactor rhs) const { return from_quarter(quarter_ + rhs.quarter_); }
    constexpr EpsilonFactor conj() const { return from_quarter(-quarter_); }
    constexpr bool operator==(const EpsilonFactor&) const = default;

private:
    int quarter_ = 0;
};

/// 1 for s = 0; (A/p) for s = 1, p = 1 mod 4; (A/p) i for s = 1, p = 3 mod 4.
EpsilonFactor epsilon(i64 a, u64 p, unsigned s);

struct CrtParts {
    Residue mod_prime_power;
    Residue mod_cofactor;
};

/// Splits u mod d p^n into (u mod p^n, u mod d).
CrtParts crt_split(const Residue& u, u64 d, const PrimePowerModulus& q);
/// u = d (d^-1 mod p^n) u1 + p^n (p^-n mod d) u2 reduced mod d p^n.
Residue crt_recombine(const CrtParts& parts, u64 d, const PrimePowerModulus& q);

}  // namespace padic
