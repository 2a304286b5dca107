#include "padic_expsums/qp.hpp"

#include <algorithm>

namespace padic {

namespace {

// Absolute precision carried by an exact zero; large enough to never bind.
constexpr int kExactZeroPrec = 1 << 24;

int clamp_abs(int a) { return std::min(a, kExactZeroPrec); }

}  // namespace

int max_relprec(u64 p)
{
    int k = 0;
    u128 acc = 1;
    while (acc * p < kExactLimit) {
        acc *= p;
        ++k;
    }
    return k;
}

QpNumber QpNumber::zero(u64 p, int abs_prec) { return QpNumber(p, true, clamp_abs(abs_prec), 0, 0); }

QpNumber QpNumber::normalized(u64 p, int val, u128 raw, int relprec)
{
    if (relprec <= 0) return zero(p, val + std::max(relprec, 0));
    u64 modulus = checked_pow(p, static_cast<unsigned>(relprec));
    u64 r = static_cast<u64>(raw % modulus);
    if (r == 0) return zero(p, val + relprec);
    while (r % p == 0) {
        r /= p;
        ++val;
        --relprec;
    }
    return QpNumber(p, false, val, r % checked_pow(p, static_cast<unsigned>(relprec)), relprec);
}

QpNumber QpNumber::from_int(i64 x, u64 p, int relprec)
{
    if (x == 0) return zero(p, kExactZeroPrec);
    relprec = std::min(relprec, max_relprec(p));
    if (relprec < 1) throw InvalidArgument("relative precision must be positive");
    int v = ord_p(x, p);
    i64 unit = x;
    for (int i = 0; i < v; ++i) unit /= static_cast<i64>(p);
    u64 modulus = checked_pow(p, static_cast<unsigned>(relprec));
    return QpNumber(p, false, v, reduce(unit, modulus), relprec);
}

QpNumber QpNumber::ratio(i64 num, i64 den, u64 p, int relprec, int pexp)
{
    if (den == 0) throw InvalidArgument("zero denominator");
    return (from_int(num, p, relprec) / from_int(den, p, relprec)).shift(-pexp);
}

QpNumber QpNumber::from_residue(u64 x, u64 p, int abs_prec)
{
    if (abs_prec < 1) throw InvalidArgument("absolute precision must be positive");
    abs_prec = std::min(abs_prec, max_relprec(p));
    u64 modulus = checked_pow(p, static_cast<unsigned>(abs_prec));
    return normalized(p, 0, x % modulus, abs_prec);
}

u64 QpNumber::unit_mod_p() const
{
    if (zero_) throw PrecisionLoss("unit part of a zero is undefined");
    return unit_ % p_;
}

void QpNumber::require_same_prime(const QpNumber& rhs) const
{
    if (p_ != rhs.p_) throw InvalidArgument("p-adic numbers over different primes");
}

QpNumber QpNumber::operator-() const
{
    if (zero_) return *this;
    u64 modulus = checked_pow(p_, static_cast<unsigned>(relprec_));
    return QpNumber(p_, false, val_, unit_ == 0 ? 0 : modulus - unit_, relprec_);
}

QpNumber QpNumber::operator+(const QpNumber& rhs) const
{
    require_same_prime(rhs);
    int abs = std::min(abs_precision(), rhs.abs_precision());
    if (zero_ && rhs.zero_) return zero(p_, abs);
    if (zero_ || rhs.zero_) {
        const QpNumber& x = zero_ ? rhs : *this;
        if (x.val_ >= abs) return zero(p_, abs);
        return normalized(p_, x.val_, x.unit_, abs - x.val_);
    }
    int a = std::min(val_, rhs.val_);
    if (abs <= a) return zero(p_, abs);
    int k = abs - a;
    u64 modulus = checked_pow(p_, static_cast<unsigned>(k));
    auto lift = [&](const QpNumber& x) -> u64 {
        int diff = x.val_ - a;
        if (diff >= k) return 0;
        return mul_mod(x.unit_ % modulus, checked_pow(p_, static_cast<unsigned>(diff)), modulus);
    };
    u128 raw = static_cast<u128>(lift(*this)) + lift(rhs);
    return normalized(p_, a, raw, k);
}

QpNumber QpNumber::operator-(const QpNumber& rhs) const { return *this + (-rhs); }

QpNumber QpNumber::operator*(const QpNumber& rhs) const
{
    require_same_prime(rhs);
    // for a zero, val_ already holds its absolute precision
    if (zero_ || rhs.zero_) return zero(p_, clamp_abs(val_ + rhs.val_));
    int k = std::min(relprec_, rhs.relprec_);
    u64 modulus = checked_pow(p_, static_cast<unsigned>(k));
    return QpNumber(p_, false, val_ + rhs.val_, mul_mod(unit_ % modulus, rhs.unit_ % modulus, modulus), k);
}

QpNumber QpNumber::operator/(const QpNumber& rhs) const
{
    require_same_prime(rhs);
    if (rhs.zero_) throw NonInvertible("division by a p-adic zero");
    if (zero_) return zero(p_, val_ >= kExactZeroPrec ? kExactZeroPrec : val_ - rhs.val_);
    int k = std::min(relprec_, rhs.relprec_);
    u64 modulus = checked_pow(p_, static_cast<unsigned>(k));
    u64 inverse = inv_mod(static_cast<i64>(rhs.unit_ % modulus), modulus);
    return QpNumber(p_, false, val_ - rhs.val_, mul_mod(unit_ % modulus, inverse, modulus), k);
}

QpNumber QpNumber::shift(int k) const
{
    if (zero_) return zero(p_, val_ >= kExactZeroPrec ? kExactZeroPrec : val_ + k);
    return QpNumber(p_, false, val_ + k, unit_, relprec_);
}

bool QpNumber::in_ideal(int k) const
{
    if (!zero_) return val_ >= k;
    if (val_ >= k) return true;
    throw PrecisionLoss("zero known only modulo p^" + std::to_string(val_) + ", cannot test p^" +
                        std::to_string(k));
}

UnitPhase QpNumber::theta() const
{
    if (zero_) {
        if (val_ < 0) throw PrecisionLoss("theta of a number known only modulo p^" + std::to_string(val_));
        return {};
    }
    if (val_ >= 0) return {};
    int d = -val_;
    if (relprec_ < d)
        throw PrecisionLoss("theta needs " + std::to_string(d) + " digits, have " + std::to_string(relprec_));
    u64 modulus = checked_pow(p_, static_cast<unsigned>(d));
    return UnitPhase(static_cast<i64>(unit_ % modulus), modulus);
}

std::string QpNumber::to_string() const
{
    if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(val_) + ")";
    return std::to_string(unit_) + "*" + std::to_string(p_) + "^" + std::to_string(val_) + " + O(" +
           std::to_string(p_) + "^" + std::to_string(val_ + relprec_) + ")";
}

}  // namespace padic
