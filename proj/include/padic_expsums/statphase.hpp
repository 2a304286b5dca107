#pragma once

// p-adic stationary phase: the linear and quadratic reductions of a complete
// sum to its stationary classes, and the second derivative test bound.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padic_expsums/characters.hpp"
#include "padic_expsums/padic.hpp"
#include "padic_expsums/qp.hpp"

namespace padic {

/// Inputs of the second derivative test. They describe psi without any
/// linear twist e(omega u), which the test allows for free.
struct SdtParams {
    int upsilon = 0;
    int lambda = 0;
    int kappa0 = 0;
    double psi0 = 1.0;
};

enum class ReductionKind { Linear, Quadratic };

struct PhaseData {
    std::string family;    // battery the instance belongs to
    std::string instance;  // human-readable parameters
    PrimePowerModulus q{3, 1};
    ReductionKind kind = ReductionKind::Linear;
    unsigned kappa = 1;
    /// The set T, as a predicate on residues mod p^n; closed under +p^kappa.
    std::function<bool(u64)> domain;
    std::function<UnitPhase(u64)> psi;
    std::function<QpNumber(u64)> phi1;
    /// Required for the quadratic reduction and for the second derivative test.
    std::function<QpNumber(u64)> phi2;
    /// Declared constant ord_p(phi2) on T, for the quadratic reduction.
    std::optional<int> mu;
    SdtParams sdt;
};

struct StationaryPoint {
    u64 residue;
    UnitPhase weight;
};

struct ReducedSum {
    double prefactor = 0.0;
    std::vector<StationaryPoint> stationary_points;
    cplx value;
};

/// Sum of psi over u mod p^n in T.
cplx direct_sum(const PhaseData& data);

/// Spot-checks psi(u + p^k t) = psi(u) theta(phi1 p^k t [+ phi2 p^{2k} t^2 / 2])
/// at `samples` pseudo-random (u, t). Throws ContractViolation on the first miss.
void check_contract(const PhaseData& data, bool quadratic, unsigned samples = 48, u64 seed = 0);

/// p^{n-k} times the sum of psi over u mod p^k in T with phi1(u) in p^{-k} Z_p.
ReducedSum reduce_linear(const PhaseData& data);

/// p^{n + mu/2} times the sum over stationary u mod p^r of
/// psi(u) eps(unitpart(phi2)/2, p^rho) theta(-phi1^2 / (2 phi2)), mu = -2r - rho.
ReducedSum reduce_quadratic(const PhaseData& data);

/// psi0 (p^n + p^upsilon + p^lambda) p^{min(kappa1 - lambda + kappa0, 0)},
/// kappa1 = max(lambda / 2, kappa0).
double second_derivative_bound(const PrimePowerModulus& q, int upsilon, int lambda, int kappa0, double psi0);
double second_derivative_bound(const PhaseData& data);

/// Range of ord_p(phi2) over T, and whether phi2 lands in p^{-lambda} Z_p^x
/// everywhere as the test requires.
struct SdtContractReport {
    int min_ord = 0;
    int max_ord = 0;
    bool holds = false;
};
SdtContractReport sdt_contract(const PhaseData& data);

/// Battery members, all built for the modulus p^n.
std::vector<PhaseData> geometric_battery(u64 p, unsigned n);
std::vector<PhaseData> ramanujan_battery(u64 p, unsigned n);
std::vector<PhaseData> chi_twisted_battery(const MultChar& chi);
std::vector<PhaseData> gauss_battery(u64 p, unsigned n);
std::vector<PhaseData> kloosterman_battery(u64 p, unsigned n);

/// The twisted summand chi(u) eps eps theta(2 s1 (um)_{1/2}/(c p^n) + 2 s2 (ul)_{1/2}/(c p^r))
/// on the classes where m u and l u are squares. When `nondegenerate`, T is cut
/// further to the classes where the quadratic coefficient is a unit.
PhaseData gsum_summand(const MultChar& chi, unsigned r, u64 c, i64 m, i64 l, int sigma1, int sigma2,
                       const SqrtBranch& branch, bool nondegenerate);
std::vector<PhaseData> gsum_battery(const MultChar& chi, const SqrtBranch& branch);

/// conj(chi)(eta1^2) chi(eta2^2) e(mt d^-1 u / p^n) on unit squares, with
/// eta_i = s1 u_{1/2} + s2 (l_i)_{1/2} p^{n-r}.
PhaseData phi_summand(const MultChar& chi, unsigned r, u64 d, i64 mt, i64 l1, i64 l2, int sigma1, int sigma2,
                      const SqrtBranch& branch);
std::vector<PhaseData> phi_battery(const MultChar& chi, const SqrtBranch& branch);

/// Every battery above for one modulus; members needing a quadratic
/// expansion that does not exist at this (p, n) are left out.
std::vector<PhaseData> builtin_battery(u64 p, unsigned n);

}  // namespace padic
