#include "car/states.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "car/car_algebra.hpp"
#include "car/rng.hpp"
#include "car/spectral.hpp"
#include "car/subalgebra.hpp"

namespace car {

namespace {

constexpr double kSupportCutoff = 1e-9;

// Support projector of a PSD matrix in its own space.
Matrix support_projector(const Matrix& psd) {
    SpectralDecomposition eig = hermitian_eig(psd);
    Matrix p = Matrix::Zero(psd.rows(), psd.cols());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues(i) > kSupportCutoff) {
            p += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
        }
    }
    return p;
}

} // namespace

double shannon_entropy(const std::vector<double>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("shannon_entropy: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("shannon_entropy: weights sum to " + std::to_string(sum));
    }
    double h = 0.0;
    for (double w : weights) {
        if (w > 0.0) h -= w * std::log(w);
    }
    return h;
}

double evenness_delta(const StateDensity& state) {
    return (state.op() - even_part(state.op())).hs_norm();
}

StateDensity product_extension(const std::vector<StateDensity>& marginals, double evenness_tol) {
    if (marginals.empty()) throw std::invalid_argument("product_extension: no marginals");
    const int ambient = marginals.front().ambient();
    ModeSet region(ambient);
    int non_even = 0;
    for (const auto& marginal : marginals) {
        if (marginal.ambient() != ambient) throw std::invalid_argument("product_extension: ambient mismatch");
        if (!region.intersect(marginal.region()).empty()) {
            throw std::invalid_argument("product_extension: regions are not pairwise disjoint");
        }
        region = region.unite(marginal.region());
        if (evenness_delta(marginal) > evenness_tol) ++non_even;
    }
    if (non_even > 1) {
        throw std::invalid_argument("product_extension: " + std::to_string(non_even) +
                                    " non-even marginals; no product state extension exists");
    }
    CarOperator product = CarOperator::identity(ambient);
    for (const auto& marginal : marginals) product = product * marginal.op();
    return StateDensity(std::move(product), std::move(region));
}

MarginalTriple::MarginalTriple(StateDensity on_i_minus_j, StateDensity on_intersection,
                               StateDensity on_j_minus_i)
    : w1(std::move(on_i_minus_j)), w2(std::move(on_intersection)), w3(std::move(on_j_minus_i)) {
    even1 = evenness_delta(w1) <= 1e-10;
    even2 = evenness_delta(w2) <= 1e-10;
    even3 = evenness_delta(w3) <= 1e-10;
}

MixtureSpec::MixtureSpec(std::vector<double> w, std::vector<MarginalTriple> t, RegionPair r)
    : weights(std::move(w)), triples(std::move(t)), regions(std::move(r)) {
    if (weights.empty() || weights.size() != triples.size()) {
        throw std::invalid_argument("MixtureSpec: weights and triples must be nonempty and matched");
    }
    double sum = 0.0;
    for (double weight : weights) {
        if (weight <= 0.0) throw std::invalid_argument("MixtureSpec: weights must be positive");
        sum += weight;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("MixtureSpec: weights sum to " + std::to_string(sum));
    }

    const ModeSet r1 = regions.i_minus_j();
    const ModeSet r2 = regions.intersection();
    const ModeSet r3 = regions.j_minus_i();
    for (const auto& triple : triples) {
        if (!(triple.w1.region() == r1) || !(triple.w2.region() == r2) || !(triple.w3.region() == r3)) {
            throw std::invalid_argument("MixtureSpec: marginal regions must be I\\J, I^J, J\\I");
        }
        const int non_even = (triple.even1 ? 0 : 1) + (triple.even2 ? 0 : 1) + (triple.even3 ? 0 : 1);
        if (non_even > 1) {
            throw std::invalid_argument("MixtureSpec: a triple has more than one non-even marginal");
        }
    }

    // Orthogonal supports across the mixture index, separately in every region.
    const std::array<const ModeSet*, 3> region_sets{&r1, &r2, &r3};
    for (std::size_t which = 0; which < 3; ++which) {
        std::vector<Matrix> projectors;
        projectors.reserve(triples.size());
        for (const auto& triple : triples) {
            const StateDensity& marginal = which == 0 ? triple.w1 : which == 1 ? triple.w2 : triple.w3;
            projectors.push_back(support_projector(compress(marginal.op(), *region_sets[which])));
        }
        for (std::size_t i = 0; i < projectors.size(); ++i) {
            for (std::size_t j = i + 1; j < projectors.size(); ++j) {
                const double overlap = (projectors[i] * projectors[j]).norm();
                if (overlap > 1e-10) {
                    throw std::invalid_argument("MixtureSpec: marginal supports overlap in region {" +
                                                region_sets[which]->str() + "} (terms " + std::to_string(i) +
                                                ", " + std::to_string(j) + ", overlap " +
                                                std::to_string(overlap) + ")");
                }
            }
        }
    }
}

StateDensity build_prop4_state(const MixtureSpec& spec) {
    const int ambient = spec.regions.ambient();
    Matrix acc = Matrix::Zero(Eigen::Index(1) << ambient, Eigen::Index(1) << ambient);
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        const auto& triple = spec.triples[i];
        acc += spec.weights[i] *
               (triple.w1.op().matrix() * triple.w2.op().matrix() * triple.w3.op().matrix());
    }
    return StateDensity(CarOperator(ambient, std::move(acc)), spec.regions.union_set());
}

MonomialTermSpec::MonomialTermSpec(double alpha_, Monomial a, Monomial b, ModeSet k)
    : alpha(alpha_), a_op(std::move(a)), b_op(std::move(b)), k_set(std::move(k)) {}

Prop5Spec::Prop5Spec(std::vector<MonomialTermSpec> t, Monomial c, RegionPair r)
    : terms(std::move(t)), c_plus(std::move(c)), regions(std::move(r)) {
    if (terms.empty()) throw std::invalid_argument("Prop5Spec: no terms");
    for (const auto& term : terms) {
        if (term.k_set.ambient() != regions.ambient()) {
            throw std::invalid_argument("Prop5Spec: block ambient mismatch");
        }
    }
}

namespace {

// Validates the monomial-family constraints and fills in the odd splits.
bool check_prop5_constraints(Prop5Spec& spec, std::string& error) {
    const int ambient = spec.regions.ambient();
    const ModeSet r1 = spec.regions.i_minus_j();
    const ModeSet r2 = spec.regions.intersection();
    const ModeSet r3 = spec.regions.j_minus_i();

    if (spec.c_plus.parity() != Parity::Even) {
        error = "shared monomial C+ must be even";
        return false;
    }
    if (!spec.c_plus.support(ambient).subset_of(r3)) {
        error = "shared monomial C+ must live on J\\I";
        return false;
    }

    ModeSet block_union(ambient);
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        auto& term = spec.terms[i];
        const std::string where = "term " + std::to_string(i) + ": ";
        if (!term.k_set.subset_of(r2)) {
            error = where + "block K is not contained in I^J";
            return false;
        }
        if (!block_union.intersect(term.k_set).empty()) {
            error = where + "blocks K_i are not pairwise disjoint";
            return false;
        }
        block_union = block_union.unite(term.k_set);
        if (!term.a_op.support(ambient).subset_of(r1)) {
            error = where + "monomial A is not supported in I\\J";
            return false;
        }
        if (!term.b_op.support(ambient).subset_of(term.k_set)) {
            error = where + "monomial B is not supported in its block K";
            return false;
        }

        if (term.b_op.parity() == Parity::Odd && term.a_op.parity() == Parity::Even) {
            // A must factor into two disjoint odd pieces covering I\J.
            std::vector<MonomialFactor> first;
            std::vector<MonomialFactor> rest;
            for (const auto& factor : term.a_op.factors()) {
                if (first.empty() && factor_parity(factor.kind) == Parity::Odd) {
                    first.push_back(factor);
                } else {
                    rest.push_back(factor);
                }
            }
            Monomial a1{std::move(first)};
            Monomial a2{std::move(rest)};
            if (a1.is_identity() || a2.parity() != Parity::Odd) {
                error = where + "B is odd while A is even but not a product of two disjoint odd elements";
                return false;
            }
            ModeSet l1 = a1.support(ambient);
            ModeSet l2 = r1.minus(l1);
            term.split = OddSplit{std::move(l1), std::move(l2), std::move(a1), std::move(a2)};
        }
    }
    if (!(block_union == r2)) {
        error = "blocks K_i do not cover I^J";
        return false;
    }
    return true;
}

} // namespace

std::string Prop5Diagnostics::str() const {
    std::ostringstream out;
    out << "constraints_ok=" << (constraints_ok ? "true" : "false");
    if (!constraint_error.empty()) out << " error=\"" << constraint_error << "\"";
    out << " tau_raw=" << tau_raw << " hermiticity_delta=" << hermiticity_delta
        << " min_eigenvalue=" << min_eigenvalue
        << " normalizable=" << (normalizable ? "true" : "false")
        << " positive=" << (positive ? "true" : "false")
        << " valid=" << (valid() ? "true" : "false");
    return out.str();
}

Prop5Result build_prop5_state(const Prop5Spec& input) {
    Prop5Result result;
    Prop5Spec spec = input;
    result.diagnostics.constraints_ok = check_prop5_constraints(spec, result.diagnostics.constraint_error);
    if (!result.diagnostics.constraints_ok) return result;

    const int ambient = spec.regions.ambient();
    const CarOperator c_plus = monomial_matrix(spec.c_plus, ambient);
    Matrix raw = Matrix::Zero(Eigen::Index(1) << ambient, Eigen::Index(1) << ambient);
    for (const auto& term : spec.terms) {
        raw += term.alpha * (monomial_matrix(term.a_op, ambient).matrix() *
                             monomial_matrix(term.b_op, ambient).matrix() * c_plus.matrix());
    }
    CarOperator assembled(ambient, std::move(raw));
    result.diagnostics.hermiticity_delta = assembled.hermiticity_delta();
    CarOperator symmetrized = 0.5 * (assembled + assembled.adjoint());

    const double tau_raw = tau(symmetrized).real();
    result.diagnostics.tau_raw = tau_raw;
    result.diagnostics.normalizable = tau_raw > 1e-12;
    if (!result.diagnostics.normalizable) return result;

    CarOperator normalized = (1.0 / tau_raw) * symmetrized;
    for (const auto& term : spec.terms) {
        result.diagnostics.effective_alphas.push_back(term.alpha / tau_raw);
    }

    const ModeSet union_region = spec.regions.union_set();
    StateValidation validation = validate_state(normalized, union_region);
    result.diagnostics.min_eigenvalue = validation.min_eigenvalue;
    result.diagnostics.positive = validation.positive_ok;
    if (!validation.valid()) return result;

    result.state.emplace(std::move(normalized), union_region);
    return result;
}

WitnessResult odd_cross_witness(const StateDensity& state, const RegionPair& regions,
                                double coefficient_tol) {
    if (!(state.region() == regions.union_set())) {
        throw std::invalid_argument("odd_cross_witness: state must live on I union J");
    }
    const ModeSet r1 = regions.i_minus_j();
    const ModeSet r2 = regions.intersection();
    const ModeSet r3 = regions.j_minus_i();

    WitnessResult result;
    auto basis = MonomialBasis::get(state.region());
    const Matrix& mat = state.op().matrix();
    const double dim = static_cast<double>(state.op().dim());
    basis->for_each([&](std::size_t, const BasisElement& element) {
        Complex coeff(0.0, 0.0);
        for (const auto& e : element.entries) coeff += std::conj(e.value) * mat(e.row, e.col);
        coeff /= dim;
        if (std::abs(coeff) <= coefficient_tol) return;
        const int odd_regions = (element.parity_in(state.region(), r1) == Parity::Odd ? 1 : 0) +
                                (element.parity_in(state.region(), r2) == Parity::Odd ? 1 : 0) +
                                (element.parity_in(state.region(), r3) == Parity::Odd ? 1 : 0);
        if (odd_regions >= 2) {
            result.found = true;
            result.offenders.push_back(element.label(state.region()));
        }
    });
    return result;
}

StateDensity random_faithful_state(const ModeSet& region, std::uint64_t seed, double floor) {
    const int m = region.size();
    const double tracial_level = std::pow(2.0, -m);
    if (floor <= 0.0 || floor >= tracial_level) {
        throw std::invalid_argument("random_faithful_state: floor must lie in (0, 2^-|region|)");
    }
    if (region.empty()) return StateDensity::tracial(region);

    const Eigen::Index d = Eigen::Index(1) << m;
    Rng rng(seed);
    Matrix g(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) g(r, c) = rng.cgaussian();
    }
    Matrix w = g * g.adjoint();
    const double trace = w.trace().real();
    Matrix normalized = w * (static_cast<double>(d) / trace);
    const double eps = floor * static_cast<double>(d);
    Matrix mixed = (1.0 - eps) * normalized + eps * Matrix::Identity(d, d);
    return StateDensity(embed(mixed, region, region.ambient()), region);
}

StateDensity random_even_faithful_state(const ModeSet& region, std::uint64_t seed, double floor) {
    StateDensity raw = random_faithful_state(region, seed, floor);
    return StateDensity(even_part(raw.op()), region);
}

MixtureSpec sample_prop4_spec(const RegionPair& regions, int term_count, std::uint64_t seed) {
    if (term_count < 1) throw std::invalid_argument("sample_prop4_spec: need at least one term");
    const std::array<ModeSet, 3> region_sets{regions.i_minus_j(), regions.intersection(),
                                             regions.j_minus_i()};
    int capacity = term_count;
    for (const auto& r : region_sets) {
        const int cap = r.empty() ? 1 : (1 << r.size());
        capacity = std::min(capacity, cap);
    }
    const int terms = capacity;

    Rng rng(seed);
    std::vector<double> weights(static_cast<std::size_t>(terms));
    double sum = 0.0;
    for (auto& w : weights) {
        w = 0.25 + rng.uniform();
        sum += w;
    }
    for (auto& w : weights) w /= sum;

    // Per region: disjoint slots of computational-basis indices, assigned
    // round-robin over the parity-ordered basis. A single term receives the
    // whole space, so single-term marginals come out faithful.
    std::array<std::vector<std::vector<Eigen::Index>>, 3> slots;
    for (std::size_t which = 0; which < 3; ++which) {
        const ModeSet& r = region_sets[which];
        slots[which].assign(static_cast<std::size_t>(terms), {});
        if (r.empty()) continue;
        const Eigen::Index d = Eigen::Index(1) << r.size();
        std::vector<Eigen::Index> ordered;
        ordered.reserve(static_cast<std::size_t>(d));
        for (int parity = 0; parity < 2; ++parity) {
            for (Eigen::Index b = 0; b < d; ++b) {
                if (std::popcount(static_cast<std::uint64_t>(b)) % 2 == parity) ordered.push_back(b);
            }
        }
        for (std::size_t k = 0; k < ordered.size(); ++k) {
            slots[which][k % static_cast<std::size_t>(terms)].push_back(ordered[k]);
        }
        for (auto& slot : slots[which]) std::sort(slot.begin(), slot.end());
    }

    auto slot_state = [&](const ModeSet& r, const std::vector<Eigen::Index>& slot) {
        if (r.empty()) return StateDensity::tracial(r);
        const Eigen::Index d = Eigen::Index(1) << r.size();
        // Gaussian block per parity sector keeps the density even.
        std::array<std::vector<Eigen::Index>, 2> groups;
        for (Eigen::Index b : slot) {
            groups[std::popcount(static_cast<std::uint64_t>(b)) % 2].push_back(b);
        }
        Matrix block = Matrix::Zero(d, d);
        for (const auto& group : groups) {
            const Eigen::Index k = static_cast<Eigen::Index>(group.size());
            if (k == 0) continue;
            Matrix g(k, k);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) g(a, b) = rng.cgaussian();
            }
            Matrix w = g * g.adjoint() + 0.05 * Matrix::Identity(k, k);
            for (Eigen::Index a = 0; a < k; ++a) {
                for (Eigen::Index b = 0; b < k; ++b) block(group[a], group[b]) = w(a, b);
            }
        }
        block *= static_cast<double>(d) / block.trace().real();
        return StateDensity(embed(block, r, r.ambient()), r);
    };

    std::vector<MarginalTriple> triples;
    triples.reserve(static_cast<std::size_t>(terms));
    for (int t = 0; t < terms; ++t) {
        // Named locals pin the rng call order.
        StateDensity s1 = slot_state(region_sets[0], slots[0][static_cast<std::size_t>(t)]);
        StateDensity s2 = slot_state(region_sets[1], slots[1][static_cast<std::size_t>(t)]);
        StateDensity s3 = slot_state(region_sets[2], slots[2][static_cast<std::size_t>(t)]);
        triples.emplace_back(std::move(s1), std::move(s2), std::move(s3));
    }
    return MixtureSpec(std::move(weights), std::move(triples), regions);
}

namespace {

Monomial random_projector_monomial(const ModeSet& on, Rng& rng, bool allow_identity) {
    std::vector<MonomialFactor> factors;
    for (int mode : on.indices()) {
        const int pick = rng.uniform_int(0, 2);
        if (pick == 0 && allow_identity) continue;
        factors.push_back({mode, pick == 1 ? FactorKind::Hole : FactorKind::Occupation});
    }
    if (!allow_identity && factors.empty() && !on.empty()) {
        factors.push_back({on.indices().front(), FactorKind::Hole});
    }
    return Monomial(std::move(factors));
}

Monomial random_monomial_with_parity(const ModeSet& on, Rng& rng, Parity want) {
    std::vector<MonomialFactor> factors;
    int odd = 0;
    for (int mode : on.indices()) {
        const int pick = rng.uniform_int(0, 4);
        switch (pick) {
            case 0: break;
            case 1: factors.push_back({mode, FactorKind::Annihilate}); ++odd; break;
            case 2: factors.push_back({mode, FactorKind::Create}); ++odd; break;
            case 3: factors.push_back({mode, FactorKind::Hole}); break;
            case 4: factors.push_back({mode, FactorKind::Occupation}); break;
        }
    }
    const Parity got = (odd % 2 == 0) ? Parity::Even : Parity::Odd;
    if (got != want && !on.empty()) {
        // Flip the parity by toggling the factor at the first mode.
        const int mode = on.indices().front();
        auto it = std::find_if(factors.begin(), factors.end(),
                               [&](const MonomialFactor& f) { return f.mode == mode; });
        if (it == factors.end()) {
            factors.insert(factors.begin(), {mode, FactorKind::Annihilate});
        } else if (factor_parity(it->kind) == Parity::Odd) {
            it->kind = FactorKind::Hole;
        } else {
            it->kind = rng.uniform_int(0, 1) ? FactorKind::Annihilate : FactorKind::Create;
        }
        std::sort(factors.begin(), factors.end(),
                  [](const MonomialFactor& x, const MonomialFactor& y) { return x.mode < y.mode; });
    }
    return Monomial(std::move(factors));
}

} // namespace

Prop5Spec sample_prop5_spec(const RegionPair& regions, std::uint64_t seed, bool faithful) {
    Rng rng(seed);
    const int ambient = regions.ambient();
    const ModeSet r1 = regions.i_minus_j();
    const ModeSet r2 = regions.intersection();
    const ModeSet r3 = regions.j_minus_i();

    // Partition I^J into contiguous blocks.
    std::vector<ModeSet> blocks;
    if (!r2.empty()) {
        std::vector<int> modes = r2.indices();
        std::vector<int> current;
        for (std::size_t at = 0; at < modes.size(); ++at) {
            current.push_back(modes[at]);
            const bool close = (at + 1 == modes.size()) || (rng.uniform() < 0.5);
            if (close) {
                blocks.emplace_back(ambient, current);
                current.clear();
            }
        }
    }

    std::vector<MonomialTermSpec> terms;
    if (faithful) {
        terms.emplace_back(1.0, Monomial{}, Monomial{}, ModeSet(ambient));
        const double budget = 0.45;
        const double per_term = blocks.empty() ? 0.0 : budget / static_cast<double>(blocks.size());
        for (const auto& block : blocks) {
            Monomial b = random_monomial_with_parity(block, rng, rng.uniform() < 0.5 ? Parity::Odd : Parity::Even);
            Monomial a;
            if (b.parity() == Parity::Odd) {
                if (r1.size() >= 2 && rng.uniform() < 0.5) {
                    // Even A that splits into two disjoint odd pieces.
                    std::vector<MonomialFactor> factors;
                    factors.push_back({r1.indices()[0],
                                       rng.uniform_int(0, 1) ? FactorKind::Annihilate : FactorKind::Create});
                    factors.push_back({r1.indices()[1],
                                       rng.uniform_int(0, 1) ? FactorKind::Annihilate : FactorKind::Create});
                    a = Monomial(std::move(factors));
                } else if (!r1.empty()) {
                    a = random_monomial_with_parity(r1, rng, Parity::Odd);
                } else {
                    b = random_monomial_with_parity(block, rng, Parity::Even);
                }
            } else if (!r1.empty() && rng.uniform() < 0.7) {
                a = random_monomial_with_parity(r1, rng, rng.uniform() < 0.5 ? Parity::Odd : Parity::Even);
            }
            const double alpha = per_term * (0.4 + 0.6 * rng.uniform()) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            terms.emplace_back(alpha, std::move(a), std::move(b), block);
        }
        return Prop5Spec(std::move(terms), Monomial{}, regions);
    }

    // Non-faithful family: positive combinations of projector monomials.
    Monomial c_plus = r3.empty() ? Monomial{} : random_projector_monomial(r3, rng, true);
    if (blocks.empty()) {
        const double alpha = 1.0 + rng.uniform();
        Monomial a = r1.empty() ? Monomial{} : random_projector_monomial(r1, rng, true);
        terms.emplace_back(alpha, std::move(a), Monomial{}, ModeSet(ambient));
    } else {
        for (const auto& block : blocks) {
            const double alpha = 1.0 + rng.uniform();
            Monomial a = r1.empty() ? Monomial{} : random_projector_monomial(r1, rng, true);
            Monomial b = random_projector_monomial(block, rng, true);
            terms.emplace_back(alpha, std::move(a), std::move(b), block);
        }
    }
    return Prop5Spec(std::move(terms), std::move(c_plus), regions);
}

} // namespace car
