#include "padic_expsums/padic.hpp"

#include <string>

namespace padic {

namespace {

unsigned floor_log(u64 base, u64 x)
{
    unsigned k = 0;
    u64 acc = base;
    while (acc <= x) {
        acc *= base;
        ++k;
    }
    return k;
}

unsigned exponent_of(u64 modulus, u64 p)
{
    unsigned n = 0;
    u64 m = modulus;
    while (m > 1 && m % p == 0) {
        m /= p;
        ++n;
    }
    if (m != 1 || n == 0)
        throw InvalidArgument("modulus " + std::to_string(modulus) + " is not a power of " + std::to_string(p));
    return n;
}

}  // namespace

SqrtBranch SqrtBranch::canonical(u64 p) { return from_mask(p, 0); }

SqrtBranch SqrtBranch::from_mask(u64 p, u64 mask)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw InvalidArgument("square-root branches need an odd prime");
    SqrtBranch b(p);
    for (u64 y = 1; y < p; ++y) {
        if (b.roots_[mul_mod(y, y, p)] == 0) b.roots_[mul_mod(y, y, p)] = y;
    }
    u64 index = 0;
    for (u64 cls = 1; cls < p; ++cls) {
        if (b.roots_[cls] == 0) continue;
        if (index < 64 && ((mask >> index) & 1)) b.roots_[cls] = p - b.roots_[cls];
        ++index;
    }
    return b;
}

std::vector<SqrtBranch> SqrtBranch::all(u64 p)
{
    u64 classes = (p - 1) / 2;
    if (classes > 16) throw InvalidArgument("too many branches to enumerate for p = " + std::to_string(p));
    std::vector<SqrtBranch> out;
    for (u64 mask = 0; mask < (u64{1} << classes); ++mask) out.push_back(from_mask(p, mask));
    return out;
}

u64 SqrtBranch::root_of(u64 y) const
{
    y %= p_;
    if (y == 0) throw InvalidArgument("square root of a non-unit");
    if (roots_[y] == 0) throw NotASquare(std::to_string(y) + " is not a square modulo " + std::to_string(p_));
    return roots_[y];
}

SqrtBranch SqrtBranch::negated() const
{
    SqrtBranch b = *this;
    for (auto& r : b.roots_)
        if (r) r = p_ - r;
    return b;
}

u64 plog(u64 x, u64 p, unsigned n)
{
    if (x % p != 1 % p) throw InvalidArgument("log_p needs an argument congruent to 1 mod p");
    const u64 target = checked_pow(p, n);
    const u64 terms = n + floor_log(p, n) + 2;
    const unsigned delta = floor_log(p, terms) + 1;
    const u64 work = checked_pow(p, n + delta);
    const u64 t = (x + work - 1) % work;

    u64 sum = 0;
    u64 power = 1;
    for (u64 j = 1; j <= terms; ++j) {
        power = mul_mod(power, t, work);
        u64 cofactor = j;
        u64 pv = 1;
        while (cofactor % p == 0) {
            cofactor /= p;
            pv *= p;
        }
        // t^j is divisible by p^j, hence by pv, and the quotient is still known mod p^n
        u64 term = (power / pv) % target;
        term = mul_mod(term, inv_mod(static_cast<i64>(cofactor % target), target), target);
        sum = (j % 2 == 1) ? (sum + term) % target : (sum + target - term) % target;
    }
    return sum;
}

Residue plog(const Residue& x, const PrimePowerModulus& q)
{
    if (x.modulus() != q.value()) throw InvalidArgument("residue is not taken modulo p^n");
    return Residue::from_unsigned(plog(x.value(), q.p(), q.n()), q.value());
}

u64 psqrt(i64 x, u64 p, unsigned n, const SqrtBranch& branch)
{
    if (branch.p() != p) throw InvalidArgument("branch built for a different prime");
    const u64 modulus = checked_pow(p, n);
    const u64 target = reduce(x, modulus);
    if (target % p == 0) throw InvalidArgument("square root of a non-unit");
    u64 r = branch.root_of(target % p);
    for (int iter = 0; iter < 70 && mul_mod(r, r, modulus) != target; ++iter) {
        u64 f = (mul_mod(r, r, modulus) + modulus - target) % modulus;
        u64 step = mul_mod(f, inv_mod(static_cast<i64>(mul_mod(2, r, modulus)), modulus), modulus);
        r = (r + modulus - step) % modulus;
    }
    if (mul_mod(r, r, modulus) != target) throw InternalInconsistency("Hensel lifting failed to converge");
    return r;
}

Residue psqrt(const Residue& x, const SqrtBranch& branch)
{
    unsigned n = exponent_of(x.modulus(), branch.p());
    return Residue::from_unsigned(psqrt(static_cast<i64>(x.value()), branch.p(), n, branch), x.modulus());
}

Residue psqrt_shift(const Residue& u, unsigned kappa, const Residue& t, const PrimePowerModulus& q,
                    const SqrtBranch& branch)
{
    if (kappa < 1) throw InvalidArgument("shift exponent must be at least 1");
    const u64 m = q.value();
    const u64 s = psqrt(static_cast<i64>(u.value() % m), q.p(), q.n(), branch);
    const u64 pk = pow_mod(q.p(), kappa, m);
    const u64 shift = mul_mod(pk, t.value() % m, m);  // p^k t
    const u64 linear = mul_mod(shift, inv_mod(static_cast<i64>(mul_mod(2, s, m)), m), m);
    const u64 s3 = mul_mod(mul_mod(s, s, m), s, m);
    const u64 quad = mul_mod(mul_mod(shift, shift, m), inv_mod(static_cast<i64>(mul_mod(8, s3, m)), m), m);
    return Residue::from_unsigned((s + linear + m - quad) % m, m);
}

TruncatedOrd ord_sqrt_diff(const Residue& u1, const Residue& u2, const SqrtBranch& branch,
                           const PrimePowerModulus& q)
{
    const u64 m = q.value();
    u64 r1 = psqrt(static_cast<i64>(u1.value() % m), q.p(), q.n(), branch);
    u64 r2 = psqrt(static_cast<i64>(u2.value() % m), q.p(), q.n(), branch);
    return ord_p_truncated((r1 + m - r2) % m, q);
}

}  // namespace padic
