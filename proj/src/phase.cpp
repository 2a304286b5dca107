#include "padic_expsums/phase.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace padic {

namespace {

// e(j/den) with the angle folded into [-1/2, 1/2] first, and the axis points
// returned exactly.
cplx exact_root(u64 j, u64 den)
{
    j %= den;
    if (j == 0) return {1.0, 0.0};
    if (2 * j == den) return {-1.0, 0.0};
    if (4 * j == den) return {0.0, 1.0};
    if (4 * j == 3 * den) return {0.0, -1.0};
    double angle = 2 * j < den ? static_cast<double>(j) / static_cast<double>(den)
                               : -static_cast<double>(den - j) / static_cast<double>(den);
    angle *= 2 * std::numbers::pi;
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

UnitPhase::UnitPhase(i64 num, u64 den)
{
    if (den == 0) throw InvalidArgument("phase denominator must be positive");
    u64 r = reduce(num, den);
    u64 g = std::gcd(r, den);
    num_ = r / g;
    den_ = den / g;
}

UnitPhase UnitPhase::from_wide(i128 num, u64 den)
{
    if (den == 0) throw InvalidArgument("phase denominator must be positive");
    return UnitPhase(static_cast<i64>(reduce(num, den)), den);
}

UnitPhase UnitPhase::operator*(const UnitPhase& rhs) const
{
    u64 g = std::gcd(den_, rhs.den_);
    u64 l = checked_mul(den_ / g, rhs.den_);
    u128 a = static_cast<u128>(num_) * (l / den_);
    u128 b = static_cast<u128>(rhs.num_) * (l / rhs.den_);
    return UnitPhase(static_cast<i64>((a + b) % l), l);
}

UnitPhase UnitPhase::pow(i64 exp) const
{
    i128 n = static_cast<i128>(num_) * exp;
    return from_wide(n, den_);
}

cplx UnitPhase::to_complex() const { return exact_root(num_, den_); }

std::string UnitPhase::to_string() const
{
    return "e(" + std::to_string(num_) + "/" + std::to_string(den_) + ")";
}

bool UnitPhase::operator<(const UnitPhase& rhs) const
{
    u128 lhs_cross = static_cast<u128>(num_) * rhs.den_;
    u128 rhs_cross = static_cast<u128>(rhs.num_) * den_;
    if (lhs_cross != rhs_cross) return lhs_cross < rhs_cross;
    return den_ < rhs.den_;
}

PhaseAccumulator::PhaseAccumulator(u64 den) : den_(den), counts_(den, 0)
{
    if (den == 0) throw InvalidArgument("accumulator denominator must be positive");
}

void PhaseAccumulator::add(const UnitPhase& phase, i64 weight)
{
    if (den_ % phase.den() != 0)
        throw InvalidArgument("phase " + phase.to_string() + " does not fit accumulator denominator " +
                              std::to_string(den_));
    counts_[phase.num() * (den_ / phase.den())] += weight;
    ++terms_;
}

cplx PhaseAccumulator::total() const
{
    cplx sum{0.0, 0.0};
    for (u64 j = 0; j < den_; ++j) {
        if (counts_[j] == 0) continue;
        sum += static_cast<double>(counts_[j]) * exact_root(j, den_);
    }
    return sum;
}

void PhaseHistogram::add(const UnitPhase& phase, i64 weight)
{
    buckets_[phase] += weight;
    ++terms_;
}

cplx PhaseHistogram::total() const
{
    cplx sum{0.0, 0.0};
    for (const auto& [phase, count] : buckets_) {
        if (count == 0) continue;
        sum += static_cast<double>(count) * phase.to_complex();
    }
    return sum;
}

RootsOfUnity::RootsOfUnity(u64 den)
{
    if (den == 0) throw InvalidArgument("roots-of-unity table needs a positive order");
    table_.reserve(den);
    for (u64 j = 0; j < den; ++j) table_.push_back(exact_root(j, den));
}

cplx e_real(double x)
{
    double frac = x - std::floor(x);
    double angle = 2 * std::numbers::pi * frac;
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace padic
