#pragma once

// Elements of Q_p known to finite precision: p^val * unit, with the unit
// known modulo p^relprec. Used wherever a phase derivative leaves Z_p.

#include <string>

#include "padic_expsums/modarith.hpp"
#include "padic_expsums/phase.hpp"

namespace padic {

/// Largest relative precision k with p^k comfortably inside the exact range.
int max_relprec(u64 p);

class QpNumber {
public:
    /// Zero known modulo p^abs_prec.
    static QpNumber zero(u64 p, int abs_prec);
    static QpNumber from_int(i64 x, u64 p, int relprec);
    /// x / (den * p^pexp) with den a p-adic unit or an integer carrying its own p-part.
    static QpNumber ratio(i64 num, i64 den, u64 p, int relprec, int pexp = 0);
    /// A residue mod p^abs_prec, read as an element of Z_p.
    static QpNumber from_residue(u64 x, u64 p, int abs_prec);

    u64 p() const { return p_; }
    bool is_zero() const { return zero_; }
    /// ord_p; for a zero this is the absolute precision (a lower bound).
    int valuation() const { return val_; }
    int relprec() const { return zero_ ? 0 : relprec_; }
    int abs_precision() const { return zero_ ? val_ : val_ + relprec_; }
    u64 unit() const { return unit_; }
    u64 unit_mod_p() const;

    QpNumber operator+(const QpNumber& rhs) const;
    QpNumber operator-(const QpNumber& rhs) const;
    QpNumber operator*(const QpNumber& rhs) const;
    QpNumber operator/(const QpNumber& rhs) const;
    QpNumber operator-() const;
    /// Multiply by p^k.
    QpNumber shift(int k) const;

    /// True when the number is known to lie in p^k Z_p, false when known not to.
    /// Throws PrecisionLoss when the precision does not decide it.
    bool in_ideal(int k) const;

    /// The additive character trivial on Z_p.
    UnitPhase theta() const;

    std::string to_string() const;

private:
    QpNumber(u64 p, bool zero, int val, u64 unit, int relprec)
        : p_(p), zero_(zero), val_(val), unit_(unit), relprec_(relprec) {}
    static QpNumber normalized(u64 p, int val, u128 raw, int relprec);
    void require_same_prime(const QpNumber& rhs) const;

    u64 p_;
    bool zero_;
    int val_;
    u64 unit_;
    int relprec_;
};

}  // namespace padic
