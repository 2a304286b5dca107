#pragma once

// The twisted Kloosterman-product sums G(m, l, c), the correlation sums
// C(mt, l1, l2) built from them, and the full K(mt) over u mod d p^n.

#include <optional>
#include <vector>

#include "padic_expsums/characters.hpp"
#include "padic_expsums/expsums.hpp"
#include "padic_expsums/padic.hpp"

namespace padic {

struct GSumParams {
    MultChar chi;
    unsigned r = 2;
    u64 c = 1;
    i64 m = 1;
    i64 l = 1;
};

/// (1/q) sum_u sum*_b sum*_a chi(u) e(bu/p^n + m c^-1 h^-1/p^n) e(-c^-1 l a^-1/p^r),
/// h = a p^{n-r} + b c; terms with p | h are dropped. O(p^{2n+r}).
cplx G_def(const GSumParams& params);

/// The same sum before the Fourier expansion of chi, normalized by the
/// Gauss sum of conj(chi). Equals chi(-1) G.
cplx G_tau(const GSumParams& params);

/// (1/q) sum_u chi(u) S(u c^-1, m c^-1; p^n) S(u c^-1, l c^-1; p^r).
cplx G_kloosterman(const GSumParams& params);

/// Precomputed Kloosterman tables for one (chi, r, c), shared by many G values.
class GEvaluator {
public:
    GEvaluator(const MultChar& chi, unsigned r, u64 c);
    const MultChar& chi() const { return chi_; }
    unsigned r() const { return r_; }
    u64 c() const { return c_; }
    cplx value(i64 m, i64 l) const;
    /// G(u, l, c) for u = 0 .. p^n - 1.
    std::vector<cplx> row(i64 l) const;

private:
    std::vector<cplx> weights(i64 l) const;
    MultChar chi_;
    unsigned r_;
    u64 c_;
    u64 c2_inv_;                 // c^-2 mod p^n
    std::vector<cplx> kl_n_;     // S(1, x; p^n)
    std::vector<cplx> kl_r_;     // S(1, x; p^r)
};

/// G vanishes when p | m, and for r >= 2 also when p | l or m l is a non-residue mod p.
bool g_vanishes_predicted(const GSumParams& params);

enum class GClosedForm {
    /// The evaluation as it is usually displayed: a double sigma sum with
    /// eps(s1 alpha) eps(s2 alpha (m^-1 l)_{1/2}) and prefactor eps(-alpha/2).
    AsPrinted,
    /// chi(m)^-1 eps(-alpha)^2 sum_s eps(-s t alpha) conj(chi)((1 + s t p^{n-r})^2), t = (l/m)_{1/2}.
    Corrected,
};

const char* to_string(GClosedForm form);

/// p^{r/2} chi(alpha^2 c^2) theta(-2 alpha/p^n) times the form's sigma sum, with
/// alpha = chi.alpha_lift(alpha_lift).
cplx G_closed(const GSumParams& params, GClosedForm form, const SqrtBranch& branch, u64 alpha_lift = 0);

/// The stationary phase evaluation needs a step kappa with 2 kappa <= n and
/// 3 kappa >= n + iota; false only at p = 3, n = 3 among n >= 2.
bool g_closed_valid(u64 p, unsigned n);

struct CalibrationCandidate {
    GClosedForm form = GClosedForm::Corrected;
    u64 alpha_lift = 0;
    u64 branch_mask = 0;
    double max_error = 0.0;
    unsigned points = 0;
    bool matched = false;
};

struct Calibration {
    std::vector<CalibrationCandidate> candidates;
    /// First matching candidate, printed form tried first.
    std::optional<CalibrationCandidate> selected;
};

/// Every form, alpha lift and global branch against G_kloosterman on the full
/// unit grid at p = 3, n = r = 2, c in {1, 2}, all primitive characters.
Calibration calibrate(double tolerance = 1e-9);

struct CSumParams {
    MultChar chi;
    unsigned r = 2;
    u64 c = 1;
    u64 d = 1;
    i64 mt = 0;
    i64 l1 = 1;
    i64 l2 = 1;
};

/// sum_u G(u, l1, c) conj(G(u, l2, c)) e(mt d^-1 u / p^n).
cplx C_def(const CSumParams& params);
cplx C_from_rows(const std::vector<cplx>& row1, const std::vector<cplx>& row2, i64 mt, u64 d,
                 const PrimePowerModulus& q);

/// p^n S(0, l1 - l2; p^r).
i64 C_zero_closed(u64 p, unsigned n, unsigned r, i64 l1, i64 l2);

struct CSupport {
    bool vanishes_predicted = false;
    double bound = 0.0;
    /// min(ord_p(l1 - l2), r)
    int omega = 0;
    /// A unit square u mod p^kappa and signs solving the stationary congruence exist.
    bool stationary_exists = false;
    unsigned kappa = 0;
};

/// Needs n/2 <= r < n (RegimeViolation otherwise).
CSupport C_support_bound(const CSumParams& params);

struct KFull {
    cplx defining;
    /// e(mt l1 p^{n-r} (p^r)^-1 / d) C(s mt, s l1, s l2)
    cplx factored;
    /// the same with C(-s mt, s l1, s l2)
    cplx factored_flipped;
};

/// sum over u mod d p^n, u = l1 p^{2n-r} (p^r)^-1 mod d, of
/// G(s u, s l1, c) conj(G(s u, s l2, c)) e(mt u / (d p^n)), with s = sign.
KFull K_full(const MultChar& chi, i64 mt, i64 l1, i64 l2, u64 c, u64 d, unsigned r, int sign);

struct CancellationGrid {
    std::vector<u64> primes;
    unsigned n_min = 2;
    unsigned n_max = 3;
    u64 c = 1;
    u64 d = 1;
    /// Cap on (l1, l2) pairs per (p, n, r); beyond it pairs are sampled with the seed.
    u64 max_pairs = 400;
    u64 seed = 0;
    double budget = 1e8;
    unsigned workers = 1;
};

struct CancellationRow {
    u64 p = 0;
    unsigned n = 0;
    unsigned r = 0;
    u64 c = 1;
    u64 d = 1;
    i64 l1 = 0;
    i64 l2 = 0;
    i64 mt = 0;
    cplx value;
    double bound = 0.0;
    double ratio = 0.0;
    int omega = 0;
    bool vanishes_predicted = false;
    bool vanished = false;
};

/// Summand evaluations a grid will cost.
double cancellation_cost(const CancellationGrid& grid);

/// Rows in grid order (p, n, r, l1, l2, mt); r runs over ceil(n/2) .. n-1 and
/// mt over every residue mod p^n. BudgetExceeded when the cost is over budget.
std::vector<CancellationRow> cancellation_sweep(const CancellationGrid& grid, double vanish_tolerance = 1e-3);

/// The (l1, l2) unit pairs the sweep visits at (p, r).
std::vector<std::pair<i64, i64>> cancellation_pairs(u64 p, unsigned r, u64 max_pairs, u64 seed);

}  // namespace padic
