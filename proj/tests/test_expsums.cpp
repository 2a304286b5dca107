#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "padic_expsums/expsums.hpp"

using namespace padic;

TEST_CASE("arithmetic helpers")
{
    CHECK(divisors(12) == std::vector<u64>{1, 2, 3, 4, 6, 12});
    CHECK(mobius(6) == 1);
    CHECK(mobius(9) == 0);
    CHECK(mobius(30) == -1);
    CHECK(euler_phi(9) == 6);
}

TEST_CASE("ramanujan sums")
{
    CHECK(ramanujan_brute(1, 6).value.real() == doctest::Approx(1.0));
    CHECK(ramanujan_brute(9, 9).value.real() == doctest::Approx(6.0));
    CHECK(ramanujan_brute(3, 9).value.real() == doctest::Approx(-3.0));
    CHECK(ramanujan_closed(3, 9) == -3);
    CHECK(ramanujan_closed(0, 9) == 6);
    for (u64 c = 1; c < 40; ++c) {
        CHECK(ramanujan_closed(1, c) == mobius(c));
        for (i64 u = -5; u < 30; ++u) CHECK(std::abs(ramanujan_brute(u, c).value - cplx(ramanujan_closed(u, c))) < 1e-9);
    }
}

TEST_CASE("kloosterman sums")
{
    CHECK(kloosterman_brute(0, 0, 9).value.real() == doctest::Approx(6.0));
    const double expect = 6 * std::cos(4 * std::numbers::pi / 9);
    CHECK(kloosterman_brute(1, 1, 9).value.real() == doctest::Approx(expect));
    CHECK(expect == doctest::Approx(1.04189).epsilon(1e-5));
    CHECK(std::abs(kloosterman_brute(1, 2, 25).value) < 1e-9);

    const SqrtBranch b3 = SqrtBranch::canonical(3);
    CHECK(std::abs(kloosterman_closed(1, 1, PrimePowerModulus(3, 2), b3) - cplx(expect)) < 1e-12);
    CHECK(std::abs(kloosterman_closed(1, 2, PrimePowerModulus(5, 2), SqrtBranch::canonical(5))) == 0.0);
    const auto t = kloosterman_closed_terms(1, 1, PrimePowerModulus(3, 3), b3);
    CHECK(t.rho == 1);
    CHECK(t.scale == doctest::Approx(std::pow(3.0, 1.5)));
    CHECK(std::abs(t.value - kloosterman_brute(1, 1, 27).value) < 1e-9);
}

TEST_CASE("closed form is branch independent and matches brute force")
{
    for (auto [p, n] : {std::pair<u64, unsigned>{3, 4}, {5, 3}, {7, 2}, {11, 2}}) {
        const PrimePowerModulus q(p, n);
        const auto inverses = inverse_table(q.value());
        for (i64 a = 1; a < 30; ++a)
            for (i64 b = 1; b < 30; ++b) {
                if (a % static_cast<i64>(p) == 0 || b % static_cast<i64>(p) == 0) continue;
                const cplx brute = kloosterman_brute(a, b, q.value(), inverses).value;
                for (const auto& branch : SqrtBranch::all(p))
                    CHECK(std::abs(kloosterman_closed(a, b, q, branch) - brute) < 1e-9);
            }
    }
}

TEST_CASE("kloosterman at composite and degenerate moduli")
{
    const PrimePowerModulus q(3, 3);
    const SqrtBranch b = SqrtBranch::canonical(3);
    for (i64 a : {0, 3, 9, 1})
        for (i64 bb : {0, 6, 2}) CHECK(std::abs(kloosterman_prime_power(a, bb, q, b) - kloosterman_brute(a, bb, 27).value) < 1e-9);
    for (u64 c : {1, 2, 4, 5, 10})
        CHECK(std::abs(kloosterman_crt(1, 2, c, q, b) - kloosterman_brute(1, 2, 27 * c).value) < 1e-9);
}

TEST_CASE("reciprocity")
{
    CHECK(reciprocity_identity(1, 1, 2, 9));
    CHECK(verify_reciprocity(1, 1, 2, PrimePowerModulus(3, 2)));
    CHECK(verify_reciprocity(4, 7, 1, PrimePowerModulus(5, 2)));
    CHECK(verify_reciprocity_instances(5, 7, 4, 2, 7, PrimePowerModulus(3, 3), 2));
}
