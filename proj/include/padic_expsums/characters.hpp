#pragma once

// Primitive Dirichlet characters modulo p^n, evaluated as exact phases.

#include <memory>
#include <optional>
#include <vector>

#include "padic_expsums/modarith.hpp"
#include "padic_expsums/phase.hpp"

namespace padic {

/// 1 for p = 3, else 0: the loss in the quadratic expansion of chi at p = 3.
inline int iota(u64 p) { return p == 3 ? 1 : 0; }

/// Least g that generates (Z/p^2)^x, hence (Z/p^n)^x for every n.
u64 least_primitive_root(u64 p);

class MultChar {
public:
    /// chi(g) = e(k / phi(p^n)). Requires n >= 2 and p not dividing k.
    MultChar(u64 p, unsigned n, u64 k);

    const PrimePowerModulus& modulus() const { return q_; }
    u64 p() const { return q_.p(); }
    unsigned n() const { return q_.n(); }
    u64 generator() const { return g_; }
    u64 k() const { return k_; }
    /// Denominator of every character value.
    u64 order() const { return q_.phi(); }

    /// ind_g(u) for a unit u.
    u64 dlog(i64 u) const;
    /// j with chi(u) = e(j / phi(p^n)); u must be a unit.
    u64 phase_index(i64 u) const;
    /// Exact value, or nullopt when p | u.
    std::optional<UnitPhase> operator()(i64 u) const;
    /// Complex value, 0 when p | u.
    cplx value(i64 u) const;

    MultChar conj() const;

    /// The Postnikov unit, canonically reduced mod p^{n-1}.
    const Residue& alpha() const { return alpha_; }
    /// alpha + lift * p^{n-1}, as a residue mod p^n.
    Residue alpha_lift(u64 lift) const;

    /// chi(m) = theta(alpha log_p(m) / p^n) for the given m = 1 mod p.
    bool postnikov_holds(u64 m) const;

private:
    MultChar() : q_(3, 1), alpha_(0, 1) {}
    u64 dlog_analytic(u64 u) const;
    void compute_alpha();

    PrimePowerModulus q_;
    u64 g_ = 0;
    u64 k_ = 0;
    std::shared_ptr<const std::vector<std::uint32_t>> table_;   // u mod p^n -> ind, when small
    std::shared_ptr<const std::vector<std::uint32_t>> table_p_;  // u mod p -> ind mod p-1
    std::shared_ptr<const RootsOfUnity> roots_;
    u64 log_unit_inverse_ = 0;  // (log_p(g^{p-1})/p)^{-1} mod p^{n-1}
    Residue alpha_;
};

inline MultChar make_char(u64 p, unsigned n, u64 k) { return MultChar(p, n, k); }
inline std::optional<UnitPhase> eval_char(const MultChar& chi, i64 u) { return chi(u); }
inline Residue postnikov_alpha(const MultChar& chi) { return chi.alpha(); }

/// e(num / p^j).
UnitPhase theta(i64 num, u64 p, unsigned j);

/// Sum over b mod p^n of chi(b) e(b / p^n).
cplx gauss_sum(const MultChar& chi);

/// chi(u + p^k t) conj(chi(u)) conj(theta(alpha (p^k t/u - p^{2k} t^2/(2u^2)) / p^n)).
/// Its order divides p^{max(0, n + iota - 3k)}.
UnitPhase expansion_defect(const MultChar& chi, u64 u, unsigned kappa, u64 t);

/// Indices k in [0, phi(p^n)) prime to p: the primitive characters.
std::vector<u64> primitive_indices(u64 p, unsigned n);

}  // namespace padic
