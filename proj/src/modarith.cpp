#include "padic_expsums/modarith.hpp"

#include <numeric>
#include <string>

namespace padic {

u64 mul_mod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m)
{
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 reduce(i64 x, u64 m)
{
    if (m == 0) throw InvalidArgument("modulus must be positive");
    if (x >= 0) return static_cast<u64>(x) % m;
    // careful with INT64_MIN: work in unsigned
    u64 mag = static_cast<u64>(-(x + 1)) + 1;
    u64 r = mag % m;
    return r == 0 ? 0 : m - r;
}

u64 reduce(i128 x, u64 m)
{
    if (m == 0) throw InvalidArgument("modulus must be positive");
    i128 r = x % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

u64 checked_mul(u64 a, u64 b)
{
    u128 prod = static_cast<u128>(a) * b;
    if (prod >= kExactLimit)
        throw OverflowError("product " + std::to_string(a) + "*" + std::to_string(b) +
                            " leaves the exact-integer range");
    return static_cast<u64>(prod);
}

u64 checked_pow(u64 base, unsigned exp)
{
    u64 result = 1;
    for (unsigned i = 0; i < exp; ++i) result = checked_mul(result, base);
    return result;
}

bool is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 small : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % small == 0) return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // these witnesses are deterministic for every 64-bit n
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<u64> distinct_prime_factors(u64 n)
{
    std::vector<u64> out;
    for (u64 f = 2; f * f <= n; ++f) {
        if (n % f) continue;
        out.push_back(f);
        while (n % f == 0) n /= f;
    }
    if (n > 1) out.push_back(n);
    return out;
}

PrimePowerModulus::PrimePowerModulus(u64 p, unsigned n) : p_(p), n_(n), value_(0)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw InvalidArgument("modulus base must be an odd prime, got " + std::to_string(p));
    if (n < 1) throw InvalidArgument("prime-power exponent must be at least 1");
    value_ = checked_pow(p, n);
}

Residue::Residue(i64 value, u64 modulus) : value_(reduce(value, modulus)), modulus_(modulus) {}

Residue::Residue(u64 value, u64 modulus, bool) : value_(value), modulus_(modulus) {}

Residue Residue::from_unsigned(u64 value, u64 modulus)
{
    if (modulus == 0) throw InvalidArgument("modulus must be positive");
    return Residue(value % modulus, modulus, true);
}

bool Residue::is_unit() const { return std::gcd(value_, modulus_) == 1; }

void Residue::require_same_modulus(const Residue& rhs) const
{
    if (modulus_ != rhs.modulus_)
        throw InvalidArgument("residue moduli differ: " + std::to_string(modulus_) + " vs " +
                              std::to_string(rhs.modulus_));
}

Residue Residue::operator+(const Residue& rhs) const
{
    require_same_modulus(rhs);
    u64 s = value_ + rhs.value_;  // both < 2^62, no wrap
    if (s >= modulus_) s -= modulus_;
    return Residue(s, modulus_, true);
}

Residue Residue::operator-(const Residue& rhs) const
{
    require_same_modulus(rhs);
    u64 s = value_ >= rhs.value_ ? value_ - rhs.value_ : value_ + modulus_ - rhs.value_;
    return Residue(s, modulus_, true);
}

Residue Residue::operator*(const Residue& rhs) const
{
    require_same_modulus(rhs);
    return Residue(mul_mod(value_, rhs.value_, modulus_), modulus_, true);
}

Residue Residue::operator-() const
{
    return Residue(value_ == 0 ? 0 : modulus_ - value_, modulus_, true);
}

Residue Residue::pow(u64 exp) const { return Residue(pow_mod(value_, exp, modulus_), modulus_, true); }

Residue Residue::inverse() const { return Residue(inv_mod(static_cast<i64>(value_), modulus_), modulus_, true); }

Residue inv(const Residue& x) { return x.inverse(); }

u64 inv_mod(i64 x, u64 m)
{
    if (m == 1) return 0;
    i128 a = reduce(x, m), b = m;
    i128 s0 = 1, s1 = 0;
    while (b) {
        i128 t = a / b;
        i128 tmp = a - t * b;
        a = b;
        b = tmp;
        tmp = s0 - t * s1;
        s0 = s1;
        s1 = tmp;
    }
    if (a != 1)
        throw NonInvertible(std::to_string(reduce(x, m)) + " is not invertible modulo " + std::to_string(m));
    return reduce(s0, m);
}

int ord_p(i64 x, u64 p)
{
    return ord_p(static_cast<i128>(x), p);
}

int ord_p(i128 x, u64 p)
{
    if (x == 0) return kOrdInfinity;
    if (x < 0) x = -x;
    int k = 0;
    while (x % static_cast<i128>(p) == 0) {
        x /= static_cast<i128>(p);
        ++k;
    }
    return k;
}

TruncatedOrd ord_p_truncated(u64 residue, const PrimePowerModulus& q)
{
    residue %= q.value();
    if (residue == 0) return {static_cast<int>(q.n()), true};
    return {ord_p(static_cast<i64>(residue), q.p()), false};
}

int legendre(i64 a, u64 p)
{
    u64 r = reduce(a, p);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::complex<double> EpsilonFactor::to_complex() const
{
    switch (quarter_) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

EpsilonFactor epsilon(i64 a, u64 p, unsigned s)
{
    int sym = legendre(a, p);
    if (sym == 0) throw InvalidArgument("epsilon factor needs an argument coprime to p");
    if (s == 0) return EpsilonFactor{};
    if (s != 1) throw InvalidArgument("epsilon factor is defined for s in {0, 1}");
    int quarter = sym == 1 ? 0 : 2;
    if (p % 4 == 3) quarter += 1;
    return EpsilonFactor::from_quarter(quarter);
}

CrtParts crt_split(const Residue& u, u64 d, const PrimePowerModulus& q)
{
    if (d == 0 || std::gcd(d, q.p()) != 1)
        throw InvalidArgument("cofactor " + std::to_string(d) + " must be positive and coprime to p");
    u64 total = checked_mul(d, q.value());
    if (u.modulus() != total) throw InvalidArgument("residue modulus must equal d*p^n");
    return {Residue::from_unsigned(u.value(), q.value()), Residue::from_unsigned(u.value(), d)};
}

Residue crt_recombine(const CrtParts& parts, u64 d, const PrimePowerModulus& q)
{
    if (d == 0 || std::gcd(d, q.p()) != 1)
        throw InvalidArgument("cofactor " + std::to_string(d) + " must be positive and coprime to p");
    u64 total = checked_mul(d, q.value());
    u64 d_bar = inv_mod(static_cast<i64>(d % q.value()), q.value());
    u64 q_bar = inv_mod(static_cast<i64>(q.value() % d), d);
    u64 left = mul_mod(mul_mod(d, d_bar, total), parts.mod_prime_power.value(), total);
    u64 right = mul_mod(mul_mod(q.value(), q_bar, total), parts.mod_cofactor.value(), total);
    return Residue::from_unsigned((left + right) % total, total);
}

}  // namespace padic
