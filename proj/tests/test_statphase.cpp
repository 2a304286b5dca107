#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "padic_expsums/errors.hpp"
#include "padic_expsums/expsums.hpp"
#include "padic_expsums/statphase.hpp"

using namespace padic;

namespace {

// e(a u / p^n) over units (or every residue), linear in u.
PhaseData additive(u64 p, unsigned n, i64 a, bool units_only)
{
    PhaseData d;
    d.family = "test";
    d.q = PrimePowerModulus(p, n);
    d.kind = ReductionKind::Linear;
    d.kappa = 1;
    const u64 q = d.q.value();
    d.domain = [p, units_only](u64 u) { return !units_only || u % p != 0; };
    const u64 ar = reduce(a, q);
    d.psi = [ar, q](u64 u) { return UnitPhase(static_cast<i64>(mul_mod(ar, u, q)), q); };
    d.phi1 = [a, p, n](u64) { return QpNumber::ratio(a, 1, p, 12, static_cast<int>(n)); };
    d.phi2 = [p](u64) { return QpNumber::zero(p, 12); };
    return d;
}

}  // namespace

TEST_CASE("direct sums of trivial phases")
{
    CHECK(direct_sum(additive(3, 3, 0, false)).real() == doctest::Approx(27.0));
    CHECK(std::abs(direct_sum(additive(3, 3, 1, false))) < 1e-9);
    CHECK(std::abs(reduce_linear(additive(3, 3, 1, false)).value) < 1e-9);
    CHECK(reduce_linear(additive(3, 3, 0, false)).value.real() == doctest::Approx(27.0));
}

TEST_CASE("ramanujan-type phases match the divisor sum")
{
    for (auto [p, n] : {std::pair<u64, unsigned>{3, 3}, {5, 2}})
        for (i64 a : {1, 2, 3, 9, 10, 25}) {
            const PhaseData d = additive(p, n, a, true);
            const double expect = static_cast<double>(ramanujan_closed(a, d.q.value()));
            CHECK(direct_sum(d).real() == doctest::Approx(expect));
            CHECK(std::abs(reduce_linear(d).value - cplx(expect)) < 1e-9);
        }
}

TEST_CASE("second derivative bound")
{
    const PrimePowerModulus q(3, 4);
    CHECK(second_derivative_bound(q, 0, 0, 0, 1.0) == doctest::Approx(81.0 + 2.0));
    CHECK(second_derivative_bound(q, 4, 4, 0, 1.0) == doctest::Approx(3 * 81.0 * std::pow(3.0, -2.0)));
}

TEST_CASE("battery reductions agree with direct summation")
{
    for (auto [p, n] : {std::pair<u64, unsigned>{3, 2}, {3, 4}, {5, 2}, {7, 2}}) {
        const auto battery = builtin_battery(p, n);
        REQUIRE_FALSE(battery.empty());
        for (const auto& d : battery) {
            CAPTURE(d.family);
            CAPTURE(d.instance);
            const cplx direct = direct_sum(d);
            const cplx reduced = d.kind == ReductionKind::Linear ? reduce_linear(d).value : reduce_quadratic(d).value;
            CHECK(std::abs(direct - reduced) <= 1e-6 * static_cast<double>(d.q.value()));
            CHECK(std::abs(direct) <= second_derivative_bound(d));
        }
    }
}

TEST_CASE("battery members satisfy their expansion contract")
{
    for (const auto& d : builtin_battery(5, 3)) {
        CAPTURE(d.instance);
        CHECK_NOTHROW(check_contract(d, d.kind == ReductionKind::Quadratic));
    }
}

TEST_CASE("quadratic reduction outside its regime is refused")
{
    bool saw_refusal = false;
    for (const auto& d : gsum_battery(MultChar(3, 3, 1), SqrtBranch::canonical(3))) {
        if (d.kind != ReductionKind::Quadratic) continue;
        try {
            reduce_quadratic(d);
        } catch (const RegimeViolation&) {
            saw_refusal = true;
        }
    }
    CHECK(saw_refusal);
}

TEST_CASE("kloosterman battery sums are Kloosterman sums")
{
    for (const auto& d : kloosterman_battery(5, 2)) {
        CAPTURE(d.instance);
        const cplx direct = direct_sum(d);
        const cplx reduced = d.kind == ReductionKind::Linear ? reduce_linear(d).value : reduce_quadratic(d).value;
        CHECK(std::abs(direct - reduced) < 1e-9 * 25);
    }
}
