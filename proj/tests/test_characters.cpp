#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "padic_expsums/characters.hpp"
#include "padic_expsums/errors.hpp"
#include "padic_expsums/modarith.hpp"

using namespace padic;

TEST_CASE("characters mod 9")
{
    const MultChar chi = make_char(3, 2, 1);
    CHECK(chi.generator() == 2);
    CHECK(eval_char(chi, 2) == UnitPhase(1, 6));
    CHECK(eval_char(chi, 4) == UnitPhase(1, 3));
    CHECK(eval_char(chi, 1) == UnitPhase(0, 1));
    CHECK_FALSE(eval_char(chi, 3).has_value());
    CHECK(chi.value(6) == cplx{0.0, 0.0});
    CHECK(postnikov_alpha(chi).value() == 1);
    CHECK_THROWS_AS(make_char(3, 2, 3), NotPrimitive);
}

TEST_CASE("character order and multiplicativity")
{
    const MultChar chi = make_char(5, 3, 1);
    const auto g = *eval_char(chi, static_cast<i64>(chi.generator()));
    CHECK(g.pow(100).is_one());
    CHECK_FALSE(g.pow(20).is_one());
    for (i64 u : {2, 3, 7, 44, 124}) {
        CHECK((*eval_char(chi, u) * *eval_char(chi, static_cast<i64>(inv_mod(u, 125)))).is_one());
        CHECK(*eval_char(chi, u) * *eval_char(chi, 3) == *eval_char(chi, u * 3 % 125));
    }
}

TEST_CASE("theta")
{
    CHECK(theta(5, 3, 0).is_one());
    CHECK(theta(1, 3, 2) == UnitPhase(1, 9));
    CHECK(theta(10, 3, 2) == UnitPhase(1, 9));
    CHECK(theta(-1, 3, 2) == UnitPhase(8, 9));
}

TEST_CASE("postnikov formula")
{
    for (auto [p, n] : {std::pair<u64, unsigned>{3, 2}, {3, 5}, {5, 3}, {7, 3}}) {
        for (u64 k : primitive_indices(p, n)) {
            if (k > 40) break;
            const MultChar chi(p, n, k);
            const u64 q = chi.modulus().value();
            for (u64 m = 1; m < q; m += p) CHECK(chi.postnikov_holds(m));
            const u64 pn1 = q / p;
            CHECK(chi.conj().alpha().value() == (pn1 - chi.alpha().value()) % pn1);
        }
    }
}

TEST_CASE("gauss sums")
{
    CHECK(std::abs(gauss_sum(make_char(3, 2, 1))) == doctest::Approx(3.0));
    for (auto [p, n, k] : {std::tuple<u64, unsigned, u64>{3, 3, 2}, {5, 2, 3}, {7, 2, 5}}) {
        const MultChar chi(p, n, k);
        const cplx tau = gauss_sum(chi);
        const double q = std::pow(static_cast<double>(p), n);
        CHECK(std::norm(tau) == doctest::Approx(q).epsilon(1e-6));
        const cplx lhs = gauss_sum(chi.conj());
        const cplx rhs = chi.value(-1) * std::conj(tau);
        CHECK(std::abs(lhs - rhs) < 1e-9 * q);
    }
}

TEST_CASE("expansion defect has the predicted order")
{
    // p = 5, n = 3, kappa = 1: order divides p^{max(0, 3 - 3)} = 1
    const MultChar chi(5, 3, 2);
    for (u64 u : {1, 2, 3, 7, 11})
        for (u64 t = 0; t < 5; ++t) CHECK(expansion_defect(chi, u, 1, t).is_one());
}
