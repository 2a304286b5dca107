#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "padic_expsums/errors.hpp"
#include "padic_expsums/modarith.hpp"

using namespace padic;

TEST_CASE("inverses")
{
    CHECK(inv_mod(1, 9) == 1);
    CHECK(inv_mod(2, 9) == 5);
    CHECK(inv(Residue(2, 9)).value() == 5);
    CHECK(inv_mod(-2, 9) == 4);
    CHECK_THROWS_AS(inv_mod(3, 9), NonInvertible);
    CHECK_THROWS_AS(inv(Residue(0, 7)), NonInvertible);
}

TEST_CASE("residues reduce into range")
{
    Residue a(-1, 9);
    CHECK(a.value() == 8);
    CHECK((a * a).value() == 1);
    CHECK((a + Residue(2, 9)).value() == 1);
    CHECK(Residue(2, 9).pow(6).value() == 1);
    CHECK_THROWS_AS(Residue(1, 9) + Residue(1, 27), InvalidArgument);
}

TEST_CASE("valuations")
{
    CHECK(ord_p(9, 3) == 2);
    CHECK(ord_p(10, 5) == 1);
    CHECK(ord_p(-12, 3) == 1);
    CHECK(ord_p(i64{0}, 7) == kOrdInfinity);
    const PrimePowerModulus q(3, 4);
    CHECK(ord_p_truncated(0, q) == TruncatedOrd{4, true});
    CHECK(ord_p_truncated(18, q) == TruncatedOrd{2, false});
}

TEST_CASE("legendre symbol")
{
    CHECK(legendre(1, 7) == 1);
    CHECK(legendre(2, 7) == 1);
    CHECK(legendre(3, 7) == -1);
    CHECK(legendre(14, 7) == 0);
    CHECK(legendre(-1, 5) == 1);
    CHECK(legendre(-1, 7) == -1);
}

TEST_CASE("epsilon factor")
{
    CHECK(epsilon(5, 7, 0).quarter() == 0);
    CHECK(epsilon(2, 5, 1).quarter() == 2);
    CHECK(epsilon(2, 7, 1).quarter() == 1);
    CHECK(epsilon(3, 7, 1).quarter() == 3);
    const auto z = epsilon(2, 7, 1).to_complex();
    CHECK(z.real() == doctest::Approx(0.0));
    CHECK(z.imag() == doctest::Approx(1.0));
}

TEST_CASE("crt split and recombine")
{
    const PrimePowerModulus q9(3, 2);
    const auto parts = crt_split(Residue(10, 18), 2, q9);
    CHECK(parts.mod_prime_power.value() == 1);
    CHECK(parts.mod_prime_power.modulus() == 9);
    CHECK(parts.mod_cofactor.value() == 0);
    CHECK(parts.mod_cofactor.modulus() == 2);

    const auto trivial = crt_split(Residue(7, 9), 1, q9);
    CHECK(trivial.mod_prime_power.value() == 7);
    CHECK(trivial.mod_cofactor.value() == 0);

    for (i64 u = 0; u < 45; ++u) CHECK(crt_recombine(crt_split(Residue(u, 45), 5, q9), 5, q9).value() == u);
}

TEST_CASE("checked arithmetic")
{
    CHECK(checked_pow(3, 4) == 81);
    CHECK_THROWS_AS(checked_pow(3, 60), OverflowError);
    CHECK(mul_mod(u64{1} << 62, 4, 1000000007) == ((u64{1} << 62) % 1000000007 * 4) % 1000000007);
    CHECK(is_prime(101));
    CHECK_FALSE(is_prime(91));
    CHECK_THROWS_AS(PrimePowerModulus(4, 2), InvalidArgument);
}
