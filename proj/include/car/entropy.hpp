#pragma once

#include <optional>
#include <string>

#include "car/car_operator.hpp"
#include "car/mode_set.hpp"
#include "car/state_density.hpp"

namespace car {

struct EntropyOptions {
    double support_cutoff = 1e-12;
    /// tau-weight allowed outside the second argument's support before a
    /// relative entropy is declared infinite.
    double support_leak_tol = 1e-10;
    /// Smallest compressed proper-density eigenvalue still treated as faithful.
    double faithfulness_floor = 1e-10;
};

/// S(psi_K) = |K| log 2 - tau(D log D), in nats, with 0 log 0 = 0.
double von_neumann_entropy(const StateDensity& state, const EntropyOptions& opts = {});

/// tau(D1 (log D1 - log D2)) when supp(D1) is contained in supp(D2), else +infinity.
double relative_entropy(const StateDensity& d1, const StateDensity& d2, const EntropyOptions& opts = {});

/// tau(A (log A - log B)) - tau(A - B) for positive A, B; nonnegative, zero iff A = B.
double klein_gap(const CarOperator& a, const CarOperator& b, const EntropyOptions& opts = {});

/// T_A(K) = integral of (t+A)^{-1} K (t+A)^{-1} dt over t >= 0, via the closed form
/// K_ij * (log l_i - log l_j)/(l_i - l_j) in the eigenbasis of A (1/l on the diagonal).
Matrix t_map(const Matrix& a, const Matrix& k);
CarOperator t_map(const CarOperator& a, const CarOperator& k);

/// Tr e^C T_{exp(-A)}(e^B) - Tr e^{A+B+C} for Hermitian A, B, C; nonnegative.
double lieb_inequality_gap(const CarOperator& a, const CarOperator& b, const CarOperator& c);

struct SsaReport {
    double gap = 0.0;
    double s_union = 0.0;
    double s_i = 0.0;
    double s_j = 0.0;
    double s_intersection = 0.0;
    /// HS norm of log D + log D_{int} - log D_I - log D_J; only for faithful states.
    std::optional<double> equality_residual;
    bool faithful = false;
    /// Smallest compressed proper-density eigenvalue of D.
    double min_eigenvalue = 0.0;

    std::string str() const;
};

/// Entropies of the four restrictions, the SSA gap, and (for faithful states)
/// the saturation residual with all logs embedded in A(I u J).
SsaReport ssa_report(const StateDensity& state, const RegionPair& regions, const EntropyOptions& opts = {});

struct EqualityDiagnostics {
    bool saturated = false;
    double gap = 0.0;
    double residual = 0.0;
};

/// True iff the saturation residual is below tol. Requires a faithful state.
EqualityDiagnostics equality_check(const StateDensity& state, const RegionPair& regions, double tol,
                                   const EntropyOptions& opts = {});

/// (1 - eps) D + eps 1; never applied implicitly.
StateDensity regularized(const StateDensity& state, double eps);

} // namespace car
