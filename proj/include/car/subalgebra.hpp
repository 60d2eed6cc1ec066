#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "car/car_operator.hpp"
#include "car/mode_set.hpp"
#include "car/monomial.hpp"
#include "car/state_density.hpp"

namespace car {

struct SparseEntry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
};

/// One tau-orthonormal basis element of A(region): a normal-form monomial in the
/// per-mode alphabet {1, sqrt(2) a, sqrt(2) a*, 2 a*a - 1}, stored sparse.
struct BasisElement {
    std::vector<SparseEntry> entries;
    /// Per region mode (ascending): 0 identity, 1 a, 2 a*, 3 centered occupation.
    std::vector<std::uint8_t> kinds;

    Parity parity() const;
    /// Generator parity of the factors sitting inside `sub` (a subset of the region).
    Parity parity_in(const ModeSet& region, const ModeSet& sub) const;
    /// Human-readable factor list, e.g. "a1 a3*" ("d<k>" is the centered occupation).
    std::string label(const ModeSet& region) const;
    Matrix dense(Eigen::Index dim) const;
};

/// The 4^|region| orthonormal monomial basis of A(region) inside the ambient algebra.
/// Cached per (ambient, region); large bases are generated on the fly instead of stored.
class MonomialBasis {
public:
    static std::shared_ptr<const MonomialBasis> get(const ModeSet& region);

    const ModeSet& region() const { return region_; }
    int ambient() const { return region_.ambient(); }
    std::size_t size() const { return std::size_t(1) << (2 * region_.size()); }

    void for_each(const std::function<void(std::size_t, const BasisElement&)>& fn) const;

    Eigen::VectorXcd coefficients(const CarOperator& x) const;
    CarOperator assemble(const Eigen::VectorXcd& coeffs) const;

private:
    explicit MonomialBasis(ModeSet region);
    BasisElement build_element(std::size_t index) const;

    ModeSet region_;
    bool materialized_;
    std::vector<BasisElement> elements_;
};

/// tau-orthogonal projection onto A(region). No membership validation.
CarOperator project_onto(const CarOperator& x, const ModeSet& region);

/// Hilbert-Schmidt distance of x from A(region).
double membership_residual(const CarOperator& x, const ModeSet& region);

/// Trace-preserving conditional expectation E^M_N, computed as the tau-orthogonal
/// projection onto the span of A(N)'s normal-form monomials.
CarOperator conditional_expectation(const CarOperator& x, const ModeSet& outer, const ModeSet& inner,
                                    double membership_tol = 1e-9);

/// F_1(X) = (X + Theta_{I \ J}(X)) / 2, mapping A(I) onto the algebra
/// generated by A(J) and the even part of A(I \ J).
CarOperator f1(const ModeSet& outer, const ModeSet& inner, const CarOperator& x);

/// The slice-trace map F_2 composed with F_1, following the two-step construction;
/// agrees with conditional_expectation and is kept as an independent route for tests.
CarOperator f2_after_f1(const ModeSet& outer, const ModeSet& inner, const CarOperator& x);

/// Faithful representation of A(region) on 2^|region| dimensions (1x1 for the empty
/// region), obtained by transferring monomial coefficients; preserves tau, products
/// and adjoints. Components outside A(region) are projected away.
Matrix compress(const CarOperator& x, const ModeSet& region);

/// Inverse of compress: rebuilds the ambient representation of an element of A(region).
CarOperator embed(const Matrix& compressed, const ModeSet& region, int ambient);

/// Restriction of a state by the trace-preserving conditional expectation.
StateDensity restrict_state(const StateDensity& state, const ModeSet& target);

} // namespace car
