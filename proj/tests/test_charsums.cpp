#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "padic_expsums/errors.hpp"
#include "padic_expsums/charsums.hpp"

using namespace padic;

TEST_CASE("diagonal evaluation")
{
    CHECK(C_zero_closed(3, 3, 2, 1, 1) == 162);
    CHECK(C_zero_closed(3, 3, 2, 1, 2) == 0);
    CHECK(C_zero_closed(3, 3, 2, 1, 4) == -81);
    CHECK(C_zero_closed(5, 3, 2, 2, 2) == 5 * 5 * 5 * 25 - 5 * 5 * 5 * 5);
    const MultChar chi(3, 3, 1);
    for (i64 l1 : {1, 2, 4})
        for (i64 l2 : {1, 4, 7, 8}) {
            const cplx v = C_def({chi, 2, 1, 1, 0, l1, l2});
            CHECK(std::llround(v.real()) == C_zero_closed(3, 3, 2, l1, l2));
            CHECK(std::abs(v - cplx(static_cast<double>(C_zero_closed(3, 3, 2, l1, l2)))) < 1e-3);
        }
}

TEST_CASE("G in three forms")
{
    for (u64 k : primitive_indices(3, 2))
        for (u64 c : {1, 2})
            for (i64 m : {1, 2, 4, 5})
                for (i64 l : {1, 7, 8}) {
                    GSumParams g{MultChar(3, 2, k), 2, c, m, l};
                    const cplx kl = G_kloosterman(g);
                    CHECK(std::abs(G_def(g) - kl) < 1e-9);
                    CHECK(std::abs(G_tau(g) - g.chi.value(-1) * kl) < 1e-9);
                    CHECK(std::abs(kl) <= 4 * 3.0 + 1e-9);
                }
}

TEST_CASE("G vanishing and periodicity")
{
    const MultChar chi(5, 3, 2);
    GEvaluator ev(chi, 2, 1);
    for (i64 m = 0; m < 125; ++m)
        for (i64 l : {1, 2, 3, 5, 11}) {
            GSumParams g{chi, 2, 1, m, l};
            if (g_vanishes_predicted(g)) CHECK(std::abs(ev.value(m, l)) < 1e-9);
            CHECK(std::abs(ev.value(m, l) - ev.value(m, l + 25)) < 1e-9);
        }
    // m c^-2 a non-residue
    CHECK(std::abs(G_kloosterman({chi, 2, 1, 2, 1})) < 1e-9);
    CHECK(std::abs(G_kloosterman({chi, 2, 1, 1, 1}) - ev.value(1, 1)) < 1e-9);
}

TEST_CASE("calibration selects the corrected closed form")
{
    const Calibration cal = calibrate();
    REQUIRE(cal.selected.has_value());
    CHECK(cal.selected->form == GClosedForm::Corrected);
    CHECK(cal.selected->max_error < 1e-9);
    bool printed_matched = false;
    for (const auto& c : cal.candidates)
        if (c.form == GClosedForm::AsPrinted && c.matched) printed_matched = true;
    CHECK_FALSE(printed_matched);
}

TEST_CASE("closed form against the Kloosterman product")
{
    CHECK_FALSE(g_closed_valid(3, 3));
    CHECK(g_closed_valid(3, 4));
    CHECK(g_closed_valid(5, 3));
    for (auto [p, n, r] : {std::tuple<u64, unsigned, unsigned>{3, 4, 2}, {3, 4, 3}, {5, 3, 2}, {7, 2, 2}}) {
        const MultChar chi(p, n, 1);
        for (const auto& branch : SqrtBranch::all(p))
            for (u64 lift = 0; lift < 2; ++lift)
                for (i64 m = 1; m < 40; ++m)
                    for (i64 l : {1, 2, 4}) {
                        GSumParams g{chi, r, 2, m, l};
                        if (g_vanishes_predicted(g)) continue;
                        CHECK(std::abs(G_closed(g, GClosedForm::Corrected, branch, lift) - G_kloosterman(g)) < 1e-6);
                    }
    }
}

TEST_CASE("C symmetries and support")
{
    const MultChar chi(3, 4, 1);
    for (i64 mt : {0, 1, 3, 9, 10}) {
        const cplx a = C_def({chi, 2, 1, 1, mt, 1, 4});
        const cplx b = std::conj(C_def({chi, 2, 1, 1, -mt, 4, 1}));
        CHECK(std::abs(a - b) < 1e-6);
    }
    const CSupport s = C_support_bound({chi, 2, 1, 1, 1, 1, 1});
    CHECK(s.vanishes_predicted);
    CHECK(std::abs(C_def({chi, 2, 1, 1, 1, 1, 1})) < 1e-3);
    const CSupport diag = C_support_bound({chi, 2, 1, 1, 9, 1, 1});
    CHECK(diag.omega == 2);
    CHECK(diag.bound == doctest::Approx(std::pow(3.0, 4 + 2)));
    CHECK_THROWS_AS(C_support_bound({chi, 1, 1, 1, 0, 1, 1}), RegimeViolation);
    CHECK_THROWS_AS(C_support_bound({chi, 4, 1, 1, 0, 1, 1}), RegimeViolation);
}

TEST_CASE("full K sum factorization")
{
    const MultChar chi(3, 2, 1);
    for (i64 mt : {0, 1, 2, 3})
        for (int sign : {1, -1}) {
            const KFull trivial = K_full(chi, mt, 1, 4, 1, 1, 2, sign);
            CHECK(std::abs(trivial.defining - trivial.factored) < 1e-9);
            const KFull kf = K_full(chi, mt, 1, 4, 2, 2, 2, sign);
            CHECK(std::abs(kf.defining - kf.factored) < 1e-9);
        }
    const KFull d1 = K_full(chi, 1, 1, 4, 1, 1, 2, 1);
    CHECK(std::abs(d1.defining - C_def({chi, 2, 1, 1, 1, 1, 4})) < 1e-9);
}

TEST_CASE("cancellation sweep")
{
    CancellationGrid empty;
    CHECK(cancellation_sweep(empty).empty());

    CancellationGrid grid;
    grid.primes = {3};
    grid.n_min = 2;
    grid.n_max = 4;
    grid.max_pairs = 12;
    const auto rows = cancellation_sweep(grid);
    REQUIRE_FALSE(rows.empty());
    for (const auto& r : rows) {
        CHECK(r.r >= (r.n + 1) / 2);
        CHECK(r.r < r.n);
        if (r.vanishes_predicted) CHECK(r.vanished);
        CHECK(std::isfinite(r.ratio));
    }
    grid.budget = 10;
    CHECK_THROWS_AS(cancellation_sweep(grid), BudgetExceeded);
    CHECK(cancellation_pairs(3, 2, 5, 0) == cancellation_pairs(3, 2, 5, 0));
}
