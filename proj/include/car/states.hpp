#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "car/car_operator.hpp"
#include "car/mode_set.hpp"
#include "car/monomial.hpp"
#include "car/state_density.hpp"

namespace car {

/// -sum p log p, in nats, with 0 log 0 = 0. Weights must be nonnegative and sum to 1.
double shannon_entropy(const std::vector<double>& weights);

/// HS distance of the density from its even part; zero for even states.
double evenness_delta(const StateDensity& state);

/// Density of the product state extension of marginals on pairwise disjoint regions.
/// At most one marginal may be non-even; otherwise no extension exists and the
/// call is refused.
StateDensity product_extension(const std::vector<StateDensity>& marginals, double evenness_tol = 1e-10);

/// One mixture component of the separable saturating family: marginal states on
/// I\J, I intersect J, and J\I.
struct MarginalTriple {
    MarginalTriple(StateDensity on_i_minus_j, StateDensity on_intersection, StateDensity on_j_minus_i);

    StateDensity w1;
    StateDensity w2;
    StateDensity w3;
    bool even1 = false;
    bool even2 = false;
    bool even3 = false;
};

struct MixtureSpec {
    std::vector<double> weights;
    std::vector<MarginalTriple> triples;
    RegionPair regions;

    MixtureSpec(std::vector<double> w, std::vector<MarginalTriple> t, RegionPair r);
};

/// Mixture of product extensions with per-region orthogonal supports across the
/// mixture index; saturates SSA.
StateDensity build_prop4_state(const MixtureSpec& spec);

struct OddSplit {
    ModeSet l1;
    ModeSet l2;
    Monomial a1;
    Monomial a2;
};

/// One monomial term alpha A B C+ of the non-separable saturating family.
struct MonomialTermSpec {
    double alpha = 0.0;
    Monomial a_op;   // on I\J
    Monomial b_op;   // on its partition block of I intersect J
    ModeSet k_set;   // the block
    std::optional<OddSplit> split;  // filled when B odd and A even

    MonomialTermSpec(double alpha_, Monomial a, Monomial b, ModeSet k);
};

struct Prop5Spec {
    std::vector<MonomialTermSpec> terms;
    Monomial c_plus;  // shared even monomial on J\I
    RegionPair regions;

    Prop5Spec(std::vector<MonomialTermSpec> t, Monomial c, RegionPair r);
};

struct Prop5Diagnostics {
    bool constraints_ok = false;
    std::string constraint_error;
    double tau_raw = 0.0;               // tau of the symmetrized sum before rescaling
    double hermiticity_delta = 0.0;     // of the raw assembled sum
    double min_eigenvalue = 0.0;        // compressed proper density after normalization
    bool normalizable = false;
    bool positive = false;
    std::vector<double> effective_alphas;
    bool valid() const { return constraints_ok && normalizable && positive; }
    std::string str() const;
};

struct Prop5Result {
    std::optional<StateDensity> state;
    Prop5Diagnostics diagnostics;
};

/// Assembles sum_i alpha_i A_i B_i C+, symmetrizes, rescales to tau = 1, and
/// validates. Positivity is checked, never enforced.
Prop5Result build_prop5_state(const Prop5Spec& spec);

struct WitnessResult {
    bool found = false;
    /// Labels of basis terms that are odd in two disjoint regions.
    std::vector<std::string> offenders;
};

/// Separability witness: expands the density over the orthonormal monomial basis
/// and looks for coefficients on terms odd in two of I\J, I^J, J\I.
WitnessResult odd_cross_witness(const StateDensity& state, const RegionPair& regions,
                                double coefficient_tol = 1e-10);

/// Seeded faithful state: Gaussian G G* in the compressed representation, mixed
/// with the tracial state so the proper density stays above the floor.
StateDensity random_faithful_state(const ModeSet& region, std::uint64_t seed, double floor);

/// Same construction followed by the even-part expectation; stays faithful.
StateDensity random_even_faithful_state(const ModeSet& region, std::uint64_t seed, double floor);

/// Random mixture specification with per-region orthogonal supports, built from
/// parity-sector blocks of the computational basis. term_count is capped by the
/// sector capacity of the smallest region.
MixtureSpec sample_prop4_spec(const RegionPair& regions, int term_count, std::uint64_t seed);

/// Random valid monomial-family specification. Faithful variants keep C+ = 1,
/// include the identity term, and use small coefficients.
Prop5Spec sample_prop5_spec(const RegionPair& regions, std::uint64_t seed, bool faithful);

} // namespace car
