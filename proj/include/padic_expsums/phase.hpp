#pragma once

// Exact roots of unity e(num/den) and reproducible summation of them.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "padic_expsums/modarith.hpp"

namespace padic {

using cplx = std::complex<double>;

/// e(num/den) with gcd(num, den) = 1 and 0 <= num < den.
class UnitPhase {
public:
    UnitPhase() = default;
    UnitPhase(i64 num, u64 den);
    static UnitPhase from_wide(i128 num, u64 den);
    static UnitPhase from_epsilon(EpsilonFactor eps) { return UnitPhase(eps.quarter(), 4); }

    u64 num() const { return num_; }
    u64 den() const { return den_; }
    bool is_one() const { return num_ == 0; }

    UnitPhase operator*(const UnitPhase& rhs) const;
    UnitPhase& operator*=(const UnitPhase& rhs) { return *this = *this * rhs; }
    UnitPhase conj() const { return UnitPhase(num_ == 0 ? 0 : static_cast<i64>(den_ - num_), den_); }
    UnitPhase pow(i64 exp) const;

    cplx to_complex() const;
    std::string to_string() const;

    bool operator==(const UnitPhase&) const = default;
    /// Orders by angle num/den in [0, 1).
    bool operator<(const UnitPhase& rhs) const;

private:
    u64 num_ = 0;
    u64 den_ = 1;
};

/// Counts of e(j/den) for j mod den; the conversion to floating point walks
/// angles in increasing order so the result does not depend on insertion order.
class PhaseAccumulator {
public:
    explicit PhaseAccumulator(u64 den);

    void add(const UnitPhase& phase, i64 weight = 1);
    void add_index(u64 j, i64 weight = 1) { counts_[j % den_] += weight; ++terms_; }
    u64 den() const { return den_; }
    u64 terms() const { return terms_; }
    cplx total() const;

private:
    u64 den_;
    std::vector<i64> counts_;
    u64 terms_ = 0;
};

/// Same idea for phases whose denominators are not known in advance.
class PhaseHistogram {
public:
    void add(const UnitPhase& phase, i64 weight = 1);
    u64 terms() const { return terms_; }
    cplx total() const;
    const std::map<UnitPhase, i64>& buckets() const { return buckets_; }

private:
    std::map<UnitPhase, i64> buckets_;
    u64 terms_ = 0;
};

/// Table of e(j/den), j = 0..den-1.
class RootsOfUnity {
public:
    explicit RootsOfUnity(u64 den);
    const cplx& operator[](u64 j) const { return table_[j % table_.size()]; }
    u64 den() const { return table_.size(); }

private:
    std::vector<cplx> table_;
};

/// e(x) for a real x, used only for already-rounded inputs.
cplx e_real(double x);

}  // namespace padic
