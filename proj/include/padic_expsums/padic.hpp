#pragma once

// Truncated p-adic logarithm and branch-consistent square roots.

#include <vector>

#include "padic_expsums/modarith.hpp"

namespace padic {

/// A choice of square root for each quadratic-residue class mod p. Hensel
/// lifting carries the choice to every p^n.
class SqrtBranch {
public:
    /// Least root in {1, ..., p-1} for every class.
    static SqrtBranch canonical(u64 p);
    /// Bit i of mask flips the root of the i-th residue class (increasing order).
    static SqrtBranch from_mask(u64 p, u64 mask);
    /// Every one of the 2^{(p-1)/2} branches; only sensible for small p.
    static std::vector<SqrtBranch> all(u64 p);

    u64 p() const { return p_; }
    /// Root assigned to the class y mod p; NotASquare when there is none.
    u64 root_of(u64 y) const;
    /// The branch with every root negated.
    SqrtBranch negated() const;
    u64 class_count() const { return (p_ - 1) / 2; }

    bool operator==(const SqrtBranch&) const = default;

private:
    explicit SqrtBranch(u64 p) : p_(p), roots_(p, 0) {}

    u64 p_;
    std::vector<u64> roots_;  // indexed by y mod p, 0 for non-residues
};

/// log_p(x) mod p^n for x = 1 mod p; the value lies in p Z / p^n Z.
Residue plog(const Residue& x, const PrimePowerModulus& q);
u64 plog(u64 x, u64 p, unsigned n);

/// The root of x mod p^n that reduces to branch.root_of(x mod p).
Residue psqrt(const Residue& x, const SqrtBranch& branch);
u64 psqrt(i64 x, u64 p, unsigned n, const SqrtBranch& branch);

/// u_{1/2} + p^k t / (2 u_{1/2}) - p^{2k} t^2 / (8 u_{1/2}^3) mod p^n.
Residue psqrt_shift(const Residue& u, unsigned kappa, const Residue& t, const PrimePowerModulus& q,
                    const SqrtBranch& branch);

/// ord_p(u1_{1/2} - u2_{1/2}) with both roots from the same branch.
TruncatedOrd ord_sqrt_diff(const Residue& u1, const Residue& u2, const SqrtBranch& branch,
                           const PrimePowerModulus& q);

}  // namespace padic
