#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "padic_expsums/errors.hpp"
#include "padic_expsums/padic.hpp"
#include "padic_expsums/qp.hpp"

using namespace padic;

TEST_CASE("p-adic logarithm")
{
    CHECK(plog(1, 3, 4) == 0);
    CHECK(plog(4, 3, 2) == 3);
    const PrimePowerModulus q(3, 4);
    const u64 l4 = plog(4, 3, 4);
    CHECK(plog(16, 3, 4) == (2 * l4) % 81);
    // homomorphism on every pair of 1-units mod 5^3
    for (u64 x = 1; x < 125; x += 5)
        for (u64 y = 1; y < 125; y += 5) CHECK(plog(x * y % 125, 5, 3) == (plog(x, 5, 3) + plog(y, 5, 3)) % 125);
    CHECK_THROWS(plog(2, 3, 2));
}

TEST_CASE("p-adic square roots")
{
    CHECK(psqrt(4, 5, 3, SqrtBranch::canonical(5)) == 2);
    const SqrtBranch b7 = SqrtBranch::canonical(7);
    CHECK(b7.root_of(2) == 3);
    CHECK(psqrt(2, 7, 3, b7) == 108);
    CHECK(108 * 108 % 343 == 2);
    CHECK(psqrt(2, 7, 3, b7.negated()) == 343 - 108);
    CHECK_THROWS_AS(psqrt(3, 7, 2, b7), NotASquare);
    for (const auto& branch : SqrtBranch::all(7)) CHECK_THROWS_AS(psqrt(3, 7, 2, branch), NotASquare);
}

TEST_CASE("branch masks")
{
    const SqrtBranch c = SqrtBranch::canonical(5);
    CHECK(SqrtBranch::from_mask(5, 0) == c);
    CHECK(SqrtBranch::from_mask(5, 3) == c.negated());
    CHECK(SqrtBranch::all(5).size() == 4);
}

TEST_CASE("shifted square root")
{
    const PrimePowerModulus q(3, 4);
    const SqrtBranch b = SqrtBranch::canonical(3);
    const Residue u(4, 81);
    CHECK(psqrt_shift(u, 1, Residue(0, 81), q, b) == psqrt(u, b));
    const Residue shifted = psqrt_shift(u, 1, Residue(1, 81), q, b);
    CHECK(shifted.value() % 27 == psqrt(7, 3, 4, b) % 27);
}

TEST_CASE("order of a square-root difference")
{
    const PrimePowerModulus q(3, 5);
    const SqrtBranch b = SqrtBranch::canonical(3);
    const auto same = ord_sqrt_diff(Residue(7, 243), Residue(7, 243), b, q);
    CHECK(same.saturated);
    CHECK(same.value >= 5);
    CHECK(ord_sqrt_diff(Residue(4, 243), Residue(16, 243), b, q) == TruncatedOrd{1, false});
    for (i64 s : {1, 2, 4, 5, 7})
        CHECK(ord_sqrt_diff(Residue(1, 243), Residue(1 + 3 * s, 243), b, q) == TruncatedOrd{1, false});
}

TEST_CASE("Qp numbers")
{
    const QpNumber a = QpNumber::ratio(1, 2, 3, 6);
    const QpNumber two = QpNumber::from_int(2, 3, 6);
    CHECK((a * two - QpNumber::from_int(1, 3, 6)).is_zero());
    const QpNumber ninth = QpNumber::ratio(1, 1, 3, 6, 2);
    CHECK(ninth.valuation() == -2);
    CHECK(ninth.theta() == UnitPhase(1, 9));
    CHECK(QpNumber::ratio(10, 1, 3, 6, 2).theta() == UnitPhase(1, 9));
}
