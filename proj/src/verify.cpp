#include "car/verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "car/car_algebra.hpp"
#include "car/entropy.hpp"
#include "car/rng.hpp"
#include "car/spectral.hpp"
#include "car/state_density.hpp"
#include "car/states.hpp"
#include "car/subalgebra.hpp"

namespace car {

namespace {

struct Check {
    std::vector<PropertyResult>* out;
    std::string prefix;

    void residual(const std::string& name, double worst, double threshold, const std::string& note = {}) {
        out->push_back({prefix + "/" + name, worst, threshold, worst <= threshold, note});
    }
    void margin(const std::string& name, double value, double threshold, const std::string& note = {}) {
        // Pass iff the measured value stays ABOVE the threshold (separation checks).
        out->push_back({prefix + "/" + name, value, threshold, value > threshold, note});
    }
    void boolean(const std::string& name, bool ok, const std::string& note = {}) {
        out->push_back({prefix + "/" + name, ok ? 0.0 : 1.0, 0.5, ok, note});
    }
};

// All monomials on [1, n]: per mode one of absent/a/a*/h/n.
std::vector<Monomial> all_monomials(int n) {
    std::vector<Monomial> out;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<MonomialFactor> factors;
        for (int mode = 1; mode <= n; ++mode) {
            switch (c % 5) {
                case 0: break;
                case 1: factors.push_back({mode, FactorKind::Annihilate}); break;
                case 2: factors.push_back({mode, FactorKind::Create}); break;
                case 3: factors.push_back({mode, FactorKind::Hole}); break;
                case 4: factors.push_back({mode, FactorKind::Occupation}); break;
            }
            c /= 5;
        }
        out.emplace_back(std::move(factors));
    }
    return out;
}

CarOperator random_operator(int n, Rng& rng) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = rng.cgaussian();
    }
    return CarOperator(n, std::move(m));
}

CarOperator random_hermitian(int n, Rng& rng) {
    CarOperator x = random_operator(n, rng);
    return 0.5 * (x + x.adjoint());
}

CarOperator random_psd(int n, Rng& rng) {
    CarOperator x = random_operator(n, rng);
    return x * x.adjoint() * Complex(1.0 / double(x.dim()), 0.0);
}

// Random element of A(region) through its orthonormal basis.
CarOperator random_member(const ModeSet& region, Rng& rng) {
    auto basis = MonomialBasis::get(region);
    Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(basis->size()));
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) = rng.cgaussian();
    return basis->assemble(coeffs);
}

ModeSet random_subset(int n, Rng& rng, bool nonempty) {
    std::vector<int> modes;
    do {
        modes.clear();
        for (int i = 1; i <= n; ++i) {
            if (rng.uniform() < 0.5) modes.push_back(i);
        }
    } while (nonempty && modes.empty());
    return ModeSet(n, modes);
}

double commutator_norm(const CarOperator& a, const CarOperator& b) {
    return (a * b - b * a).hs_norm();
}

} // namespace

std::vector<PropertyResult> verify_core(const VerifyOptions& opts) {
    std::vector<PropertyResult> results;
    Check check{&results, "core"};
    const int max_n = std::min(opts.max_n, 6);
    Rng rng(opts.seed * 7919 + 1);

    // CAR relations for every pair of generators.
    double worst_car = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        std::vector<CarOperator> a;
        a.reserve(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) a.push_back(annihilator(i, n));
        const CarOperator id = CarOperator::identity(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                CarOperator anti = a[i] * a[j] + a[j] * a[i];
                CarOperator mixed = a[i] * a[j].adjoint() + a[j].adjoint() * a[i];
                if (i == j) mixed -= id;
                worst_car = std::max({worst_car, anti.max_abs(), mixed.max_abs()});
            }
        }
    }
    check.residual("car_relations", worst_car, 1e-12, "n=1.." + std::to_string(max_n));

    // Matrix-unit table, per-site unit algebra, cross-site commutation.
    double worst_units = 0.0;
    double worst_unit_comm = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        for (int site = 1; site <= n; ++site) {
            CarOperator a = annihilator(site, n);
            CarOperator v = v_string(site - 1, n);
            worst_units = std::max(worst_units, (matrix_unit(site, 1, 1, n) - a * a.adjoint()).max_abs());
            worst_units = std::max(worst_units, (matrix_unit(site, 2, 2, n) - a.adjoint() * a).max_abs());
            worst_units = std::max(worst_units, (matrix_unit(site, 1, 2, n) - v * a).max_abs());
            worst_units = std::max(worst_units, (matrix_unit(site, 2, 1, n) - v * a.adjoint()).max_abs());
            worst_units = std::max(
                worst_units,
                (matrix_unit(site, 1, 1, n) + matrix_unit(site, 2, 2, n) - CarOperator::identity(n)).max_abs());
            // e_{jk} e_{lm} = delta_{kl} e_{jm} within one site.
            for (int j = 1; j <= 2; ++j)
                for (int k = 1; k <= 2; ++k)
                    for (int l = 1; l <= 2; ++l)
                        for (int m = 1; m <= 2; ++m) {
                            CarOperator prod = matrix_unit(site, j, k, n) * matrix_unit(site, l, m, n);
                            if (k == l) prod -= matrix_unit(site, j, m, n);
                            worst_units = std::max(worst_units, prod.max_abs());
                        }
        }
        for (int s1 = 1; s1 <= n; ++s1)
            for (int s2 = s1 + 1; s2 <= n; ++s2)
                for (int j = 1; j <= 2; ++j)
                    for (int k = 1; k <= 2; ++k)
                        for (int l = 1; l <= 2; ++l)
                            for (int m = 1; m <= 2; ++m) {
                                CarOperator u1 = matrix_unit(s1, j, k, n);
                                CarOperator u2 = matrix_unit(s2, l, m, n);
                                worst_unit_comm = std::max(worst_unit_comm, (u1 * u2 - u2 * u1).max_abs());
                            }
    }
    check.residual("matrix_unit_table", worst_units, 1e-12);
    check.residual("matrix_unit_commutation", worst_unit_comm, 1e-12);

    // V strings: V_i^2 = 1, self-adjoint, global string flips every generator.
    double worst_v = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        for (int i = 0; i <= n; ++i) {
            CarOperator v = v_string(i, n);
            worst_v = std::max(worst_v, (v * v - CarOperator::identity(n)).max_abs());
            worst_v = std::max(worst_v, (v - v.adjoint()).max_abs());
        }
        CarOperator vn = v_string(n, n);
        for (int j = 1; j <= n; ++j) {
            CarOperator aj = annihilator(j, n);
            worst_v = std::max(worst_v, (vn * aj * vn + aj).max_abs());
        }
    }
    check.residual("v_string", worst_v, 1e-12);

    // Orthonormality of the monomial basis under the tau inner product; a unit
    // Gram matrix pins the span dimension at 4^n.
    double worst_gram = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        auto basis = MonomialBasis::get(ModeSet::full(n));
        const Eigen::Index dim = Eigen::Index(1) << n;
        const double dimd = static_cast<double>(dim);
        std::vector<Matrix> dense;
        const bool exhaustive = n <= 5;
        if (exhaustive) {
            dense.reserve(basis->size());
            basis->for_each([&](std::size_t, const BasisElement& e) { dense.push_back(e.dense(dim)); });
            for (std::size_t i = 0; i < dense.size(); ++i) {
                for (std::size_t j = i; j < dense.size(); ++j) {
                    Complex g = dense[i].conjugate().cwiseProduct(dense[j]).sum() / dimd;
                    if (i == j) g -= 1.0;
                    worst_gram = std::max(worst_gram, std::abs(g));
                }
            }
        } else {
            std::vector<BasisElement> elems;
            elems.reserve(basis->size());
            basis->for_each([&](std::size_t, const BasisElement& e) { elems.push_back(e); });
            for (std::size_t i = 0; i < elems.size(); ++i) {
                Matrix di = elems[i].dense(dim);
                Complex g = di.conjugate().cwiseProduct(di).sum() / dimd - 1.0;
                worst_gram = std::max(worst_gram, std::abs(g));
            }
            for (int s = 0; s < 50000; ++s) {
                const auto i = static_cast<std::size_t>(rng.raw() % elems.size());
                const auto j = static_cast<std::size_t>(rng.raw() % elems.size());
                if (i == j) continue;
                Matrix di = elems[i].dense(dim);
                Complex g = di.conjugate().cwiseProduct(elems[j].dense(dim)).sum() / dimd;
                worst_gram = std::max(worst_gram, std::abs(g));
            }
        }
    }
    check.residual("span_gram_identity", worst_gram, 1e-12, "exhaustive n<=5, sampled n=6");

    // tau: normalized, tracial, vanishing on off-diagonal unit products.
    double worst_tau = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        worst_tau = std::max(worst_tau, std::abs(tau(CarOperator::identity(n)) - Complex(1.0, 0.0)));
        for (int i = 1; i <= n; ++i) {
            CarOperator a = annihilator(i, n);
            worst_tau = std::max(worst_tau, std::abs(tau(a * a.adjoint()) - Complex(0.5, 0.0)));
        }
        for (int s = 0; s < std::max(4, opts.samples / 8); ++s) {
            CarOperator x = random_operator(n, rng);
            CarOperator y = random_operator(n, rng);
            worst_tau = std::max(worst_tau, std::abs(tau(x * y) - tau(y * x)));
        }
        // Unit products containing an off-diagonal factor are traceless.
        for (int site = 1; site <= n; ++site) {
            CarOperator u = matrix_unit(site, 1, 2, n);
            worst_tau = std::max(worst_tau, std::abs(tau(u)));
            worst_tau = std::max(worst_tau, std::abs(tau(matrix_unit(site, 2, 1, n))));
        }
        for (int s = 0; s < 20; ++s) {
            CarOperator prod = CarOperator::identity(n);
            bool off_diagonal = false;
            for (int site = 1; site <= n; ++site) {
                const int row = 1 + static_cast<int>(rng.raw() % 2);
                const int col = 1 + static_cast<int>(rng.raw() % 2);
                off_diagonal = off_diagonal || row != col;
                prod = prod * matrix_unit(site, row, col, n);
            }
            if (off_diagonal) worst_tau = std::max(worst_tau, std::abs(tau(prod)));
        }
    }
    check.residual("tau_tracial", worst_tau, 1e-12);

    // Product property and graded commutation over disjoint-support monomials.
    double worst_product = 0.0;
    double worst_graded = 0.0;
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
        std::vector<Monomial> monomials = all_monomials(n);
        std::vector<CarOperator> mats;
        std::vector<std::uint32_t> masks;
        mats.reserve(monomials.size());
        masks.reserve(monomials.size());
        for (const auto& m : monomials) {
            mats.push_back(monomial_matrix(m, n));
            masks.push_back(m.support(n).mask());
        }
        for (std::size_t i = 0; i < monomials.size(); ++i) {
            for (std::size_t j = 0; j < monomials.size(); ++j) {
                if (masks[i] & masks[j]) continue;
                worst_product =
                    std::max(worst_product, std::abs(tau(mats[i] * mats[j]) - tau(mats[i]) * tau(mats[j])));
                const int sign = graded_sign(monomials[i].parity(), monomials[j].parity());
                CarOperator resid = mats[i] * mats[j] - double(sign) * (mats[j] * mats[i]);
                worst_graded = std::max(worst_graded, resid.max_abs());
            }
        }
    }
    for (int n = 5; n <= max_n; ++n) {
        // Sampled pairs above the exhaustive range.
        for (int s = 0; s < 500; ++s) {
            ModeSet left = random_subset(n, rng, true);
            ModeSet right = left.complement();
            if (right.empty()) continue;
            Rng sub(rng.raw());
            Monomial lm = [&] {
                std::vector<MonomialFactor> f;
                for (int mode : left.indices()) {
                    int pick = sub.uniform_int(0, 4);
                    if (pick == 0) continue;
                    f.push_back({mode, pick == 1 ? FactorKind::Annihilate
                                      : pick == 2 ? FactorKind::Create
                                      : pick == 3 ? FactorKind::Hole
                                                  : FactorKind::Occupation});
                }
                return Monomial(f);
            }();
            Monomial rm = [&] {
                std::vector<MonomialFactor> f;
                for (int mode : right.indices()) {
                    int pick = sub.uniform_int(0, 4);
                    if (pick == 0) continue;
                    f.push_back({mode, pick == 1 ? FactorKind::Annihilate
                                      : pick == 2 ? FactorKind::Create
                                      : pick == 3 ? FactorKind::Hole
                                                  : FactorKind::Occupation});
                }
                return Monomial(f);
            }();
            CarOperator ml = monomial_matrix(lm, n);
            CarOperator mr = monomial_matrix(rm, n);
            worst_product = std::max(worst_product, std::abs(tau(ml * mr) - tau(ml) * tau(mr)));
            const int sign = graded_sign(lm.parity(), rm.parity());
            worst_graded = std::max(worst_graded, (ml * mr - double(sign) * (mr * ml)).max_abs());
        }
    }
    check.residual("tau_product_property", worst_product, 1e-12, "exhaustive n<=4, sampled above");
    check.residual("graded_commutation", worst_graded, 1e-12, "exhaustive n<=4, sampled above");

    // Monomial parity matches the Theta eigenvalue.
    double worst_parity = 0.0;
    for (int n = 1; n <= std::min(max_n, 4); ++n) {
        for (const auto& m : all_monomials(n)) {
            CarOperator mat = monomial_matrix(m, n);
            const double sign = (m.parity() == Parity::Even) ? 1.0 : -1.0;
            worst_parity = std::max(worst_parity, (theta(ModeSet::full(n), mat) - sign * mat).max_abs());
        }
    }
    check.residual("parity_vs_theta", worst_parity, 1e-12);

    return results;
}

std::vector<PropertyResult> verify_expect(const VerifyOptions& opts) {
    std::vector<PropertyResult> results;
    Check check{&results, "expect"};
    const int max_n = std::min(opts.max_n, 5);
    Rng rng(opts.seed * 104729 + 2);

    double worst_f2f1 = 0.0;
    double worst_eq12 = 0.0;
    double worst_square = 0.0;
    double worst_tower = 0.0;
    double worst_trace = 0.0;
    double worst_module = 0.0;
    double worst_positive = 0.0;
    double worst_idem = 0.0;

    for (int s = 0; s < opts.samples; ++s) {
        const int n = 2 + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(std::max(1, max_n - 1)));
        const ModeSet full = ModeSet::full(n);

        // F2 after F1 against the direct projection, on random X in A(I).
        ModeSet outer = random_subset(n, rng, true);
        ModeSet inner_seed = random_subset(n, rng, false);
        ModeSet inner = outer.intersect(inner_seed);
        CarOperator x_outer = random_member(outer, rng);
        worst_f2f1 = std::max(
            worst_f2f1,
            (f2_after_f1(outer, inner, x_outer) - conditional_expectation(x_outer, outer, inner)).hs_norm());

        // Restriction property: E^I_{J1} restricted to A(J2) equals E^{J2}_{J1 n J2}.
        ModeSet j1 = random_subset(n, rng, false);
        ModeSet j2 = random_subset(n, rng, true);
        CarOperator x2 = random_member(j2, rng);
        worst_eq12 = std::max(worst_eq12, (conditional_expectation(x2, full, j1) -
                                           conditional_expectation(x2, j2, j1.intersect(j2)))
                                              .hs_norm());

        // Commuting square and the tower law.
        CarOperator x = random_operator(n, rng);
        CarOperator via_j1 = conditional_expectation(conditional_expectation(x, full, j1), j1, j1.intersect(j2));
        worst_square = std::max(
            worst_square, (via_j1 - conditional_expectation(x, full, j1.intersect(j2))).hs_norm());
        ModeSet p = j1.intersect(j2);
        worst_tower = std::max(worst_tower, (conditional_expectation(conditional_expectation(x, full, j1), full, p) -
                                             conditional_expectation(x, full, p))
                                                .hs_norm());

        // Trace preservation and the module property.
        worst_trace = std::max(worst_trace,
                               std::abs(tau(conditional_expectation(x, full, j1)) - tau(x)));
        CarOperator a = random_member(j1, rng);
        CarOperator b = random_member(j1, rng);
        worst_module = std::max(worst_module, (conditional_expectation(a * x * b, full, j1) -
                                               a * conditional_expectation(x, full, j1) * b)
                                                  .hs_norm());

        // Positivity and idempotence.
        CarOperator psd = random_psd(n, rng);
        CarOperator projected = conditional_expectation(psd, full, j1);
        SpectralDecomposition eig = hermitian_eig(projected, 1e-8);
        worst_positive = std::max(worst_positive, -eig.eigenvalues(0));
        CarOperator once = conditional_expectation(x, full, j1);
        worst_idem = std::max(worst_idem, (conditional_expectation(once, full, j1) - once).hs_norm());
    }
    check.residual("f2_after_f1_factorization", worst_f2f1, 1e-10);
    check.residual("restriction_property_eq12", worst_eq12, 1e-10);
    check.residual("commuting_square", worst_square, 1e-10);
    check.residual("tower_law", worst_tower, 1e-10);
    check.residual("trace_preservation", worst_trace, 1e-12);
    check.residual("module_property", worst_module, 1e-10);
    check.residual("positivity", worst_positive, 1e-10, "min eigenvalue of E(psd)");
    check.residual("idempotence", worst_idem, 1e-10);

    // The two worked restriction examples on four modes.
    {
        const int n = 4;
        ModeSet outer = ModeSet::full(n);
        ModeSet inner(n, {1, 2});
        CarOperator first = monomial_matrix(Monomial::parse("a1 n2 a3* a4"), n);
        CarOperator second = monomial_matrix(Monomial::parse("a1 n2 h3 n4"), n);
        CarOperator target = 0.25 * monomial_matrix(Monomial::parse("a1 n2"), n);
        const double w1 = conditional_expectation(first, outer, inner).max_abs();
        const double w2 = (conditional_expectation(second, outer, inner) - target).max_abs();
        check.residual("worked_example_zero", w1, 1e-12, "E[1..4]->[1,2] of a1 n2 a3* a4");
        check.residual("worked_example_quarter", w2, 1e-12, "E[1..4]->[1,2] of a1 n2 h3 n4");
        CarOperator fixed = f1(outer, inner, first);
        check.residual("worked_example_f1_fixed", (fixed - first).max_abs(), 1e-12);
    }

    // Theta is a multiplicative involution; the even-part map is idempotent.
    {
        double worst_theta = 0.0;
        double worst_even = 0.0;
        for (int s = 0; s < std::max(8, opts.samples / 4); ++s) {
            const int n = 2 + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(std::max(1, max_n - 1)));
            ModeSet j = random_subset(n, rng, false);
            CarOperator x = random_operator(n, rng);
            CarOperator y = random_operator(n, rng);
            worst_theta = std::max(worst_theta, (theta(j, x * y) - theta(j, x) * theta(j, y)).hs_norm());
            worst_theta = std::max(worst_theta, (theta(j, theta(j, x)) - x).hs_norm());
            CarOperator ev = even_part(x);
            worst_even = std::max(worst_even, (even_part(ev) - ev).hs_norm());
            worst_even = std::max(worst_even, (theta(ModeSet::full(n), ev) - ev).hs_norm());
        }
        check.residual("theta_automorphism", worst_theta, 1e-10);
        check.residual("even_part_expectation", worst_even, 1e-10);
    }

    // Empty target: E onto A(empty) is tau(X) 1.
    {
        const int n = 3;
        Rng sub(opts.seed + 11);
        CarOperator x = random_operator(n, sub);
        CarOperator projected = conditional_expectation(x, ModeSet::full(n), ModeSet(n));
        check.residual("empty_target",
                       (projected - tau(x) * CarOperator::identity(n)).hs_norm(), 1e-12);
    }

    return results;
}

std::vector<PropertyResult> verify_entropy(const VerifyOptions& opts) {
    std::vector<PropertyResult> results;
    Check check{&results, "entropy"};
    const int max_n = std::min(opts.max_n, 6);
    Rng rng(opts.seed * 15485863 + 3);
    const EntropyOptions eopts;

    double worst_gap = -1e300;      // SSA: gap must stay <= 1e-9
    double worst_pivot = 0.0;
    double worst_telescope = 0.0;
    double worst_convention = 0.0;
    for (int n = std::min(2, max_n); n <= max_n; ++n) {
        const int per_n = std::max(4, opts.samples / std::max(1, max_n - 1));
        for (int s = 0; s < per_n; ++s) {
            ModeSet i_set = random_subset(n, rng, true);
            ModeSet j_set = random_subset(n, rng, true);
            RegionPair regions(i_set, j_set);
            const ModeSet region = regions.union_set();
            StateDensity d = random_faithful_state(region, rng.raw(), 1e-6);
            SsaReport report = ssa_report(d, regions, eopts);
            worst_gap = std::max(worst_gap, report.gap);

            // Relative-entropy pivot identity from the equality proof.
            StateDensity d_i(restrict_state(d, regions.I).op(), region);
            StateDensity d_j(restrict_state(d, regions.J).op(), region);
            StateDensity d_int(restrict_state(d, regions.intersection()).op(), region);
            const double r1 = relative_entropy(d, d_i, eopts);
            const double r2 = relative_entropy(d_j, d_int, eopts);
            worst_pivot = std::max(worst_pivot, std::abs((r1 - r2) + report.gap));

            // Telescoping of the trace-inequality bound down to tau(D_int) = 1.
            CarOperator transported = t_map(d_int.op(), d_j.op());
            worst_telescope = std::max(worst_telescope, std::abs(tau(d_i.op() * transported).real() - 1.0));

            // Entropy convention: full-space formula vs compressed proper spectrum.
            ModeSet sub = random_subset(n, rng, true);
            StateDensity d_sub = restrict_state(d, region.intersect(sub).empty() ? region : region.intersect(sub));
            const double s_impl = von_neumann_entropy(d_sub, eopts);
            SpectralDecomposition eig = hermitian_eig(compress(d_sub.op(), d_sub.region()));
            double shannon = 0.0;
            const double dimd = static_cast<double>(eig.eigenvalues.size());
            for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
                const double p = eig.eigenvalues(k) / dimd;
                if (p > 1e-13) shannon -= p * std::log(p);
            }
            worst_convention = std::max(worst_convention, std::abs(s_impl - shannon));
        }
    }
    results.push_back({"entropy/ssa_gap", worst_gap, 1e-9, worst_gap <= 1e-9,
                       "largest gap over random faithful states"});
    check.residual("pivot_identity", worst_pivot, 1e-8);
    check.residual("t_map_telescoping", worst_telescope, 1e-8);
    check.residual("entropy_convention", worst_convention, 1e-10);

    // Klein inequality: nonnegative, zero iff equal.
    {
        double worst_nonneg = -1e300;
        double worst_zero = 0.0;
        double min_separated = 1e300;
        for (int s = 0; s < opts.samples; ++s) {
            const int n = 2 + static_cast<int>(rng.raw() % 2);
            CarOperator a = random_psd(n, rng) + 0.05 * CarOperator::identity(n);
            CarOperator b = random_psd(n, rng) + 0.05 * CarOperator::identity(n);
            const double gap = klein_gap(a, b);
            worst_nonneg = std::max(worst_nonneg, -gap);
            worst_zero = std::max(worst_zero, std::abs(klein_gap(a, a)));
            CarOperator h = random_hermitian(n, rng);
            CarOperator perturbed = a + (1e-3 / std::max(1.0, h.hs_norm())) * h;
            SpectralDecomposition eig = hermitian_eig(perturbed);
            if (eig.eigenvalues(0) > 1e-6) {
                min_separated = std::min(min_separated, klein_gap(a, perturbed));
            }
        }
        check.residual("klein_nonnegative", worst_nonneg, 1e-10);
        check.residual("klein_zero_at_equality", worst_zero, 1e-10);
        check.margin("klein_separation", min_separated, 1e-10, "gap at HS distance 1e-3");
    }

    // Trace inequality at dimension 8, with equality on commuting triples.
    {
        double worst_lieb = -1e300;
        double worst_commuting = 0.0;
        const int n = 3;
        for (int s = 0; s < std::max(100, opts.samples); ++s) {
            CarOperator a = 0.5 * random_hermitian(n, rng);
            CarOperator b = 0.5 * random_hermitian(n, rng);
            CarOperator c = 0.5 * random_hermitian(n, rng);
            worst_lieb = std::max(worst_lieb, -lieb_inequality_gap(a, b, c));
        }
        for (int s = 0; s < 32; ++s) {
            const Eigen::Index dim = Eigen::Index(1) << n;
            Matrix da = Matrix::Zero(dim, dim);
            Matrix db = Matrix::Zero(dim, dim);
            Matrix dc = Matrix::Zero(dim, dim);
            for (Eigen::Index k = 0; k < dim; ++k) {
                da(k, k) = rng.uniform(-1.0, 1.0);
                db(k, k) = rng.uniform(-1.0, 1.0);
                dc(k, k) = rng.uniform(-1.0, 1.0);
            }
            worst_commuting = std::max(
                worst_commuting,
                std::abs(lieb_inequality_gap(CarOperator(n, da), CarOperator(n, db), CarOperator(n, dc))));
        }
        check.residual("lieb_gap_nonnegative", worst_lieb, 1e-9);
        check.residual("lieb_equality_commuting", worst_commuting, 1e-10);
        const CarOperator zero = CarOperator::zero(n);
        check.residual("lieb_zero_triple", std::abs(lieb_inequality_gap(zero, zero, zero)), 1e-12);
    }

    // Scalar integral identity: lambda^2 T_lambda(1) = lambda.
    {
        double worst_scalar = 0.0;
        for (double lambda : {0.1, 0.5, 1.0, 2.0, 7.5}) {
            Matrix a(1, 1), k(1, 1);
            a(0, 0) = lambda;
            k(0, 0) = 1.0;
            const double value = (lambda * lambda * t_map(a, k)(0, 0)).real();
            worst_scalar = std::max(worst_scalar, std::abs(value - lambda));
        }
        check.residual("scalar_integral_identity", worst_scalar, 1e-12);
    }

    // t_map at the identity is the identity map.
    {
        Rng sub(opts.seed + 17);
        CarOperator k = random_operator(3, sub);
        check.residual("t_map_identity_base",
                       (t_map(CarOperator::identity(3), k) - k).hs_norm(), 1e-12);
    }

    // Relative entropy basics.
    {
        double worst = 0.0;
        const int n = 3;
        ModeSet region = ModeSet::full(n);
        StateDensity d = random_faithful_state(region, opts.seed + 23, 1e-5);
        worst = std::max(worst, std::abs(relative_entropy(d, d)));
        StateDensity tracial = StateDensity::tracial(region);
        CarOperator pure = monomial_matrix(Monomial::parse("h1 h2 h3"), n);
        StateDensity pure_state(8.0 * pure, region);
        worst = std::max(worst,
                         std::abs(relative_entropy(pure_state, tracial) - n * std::log(2.0)));
        check.residual("relative_entropy_basics", worst, 1e-10, "S(D,D)=0 and pure-vs-tracial");
    }

    return results;
}

std::vector<PropertyResult> verify_families(const VerifyOptions& opts) {
    std::vector<PropertyResult> results;
    Check check{&results, "families"};
    const int max_n = std::min(std::max(opts.max_n, 3), 6);
    Rng rng(opts.seed * 32452843 + 4);
    const EntropyOptions eopts;

    // Separable mixtures: restriction identities, entropy decomposition, saturation.
    double worst_restrict = 0.0;
    double worst_decomp = 0.0;
    double worst_gap4 = 0.0;
    double worst_residual4 = 0.0;
    int faithful4 = 0;
    bool witness4_clean = true;
    const int family_samples = std::max(6, opts.samples / 8);
    for (int s = 0; s < family_samples; ++s) {
        const int n = 3 + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(std::max(1, max_n - 2)));
        ModeSet i_set = random_subset(n, rng, true);
        ModeSet j_set = random_subset(n, rng, true);
        RegionPair regions(i_set, j_set);
        const int want_terms = 1 + static_cast<int>(rng.raw() % 3);
        MixtureSpec spec = sample_prop4_spec(regions, want_terms, rng.raw());
        StateDensity d = build_prop4_state(spec);

        const Eigen::Index dim = d.op().dim();
        Matrix acc_i = Matrix::Zero(dim, dim);
        Matrix acc_j = Matrix::Zero(dim, dim);
        Matrix acc_int = Matrix::Zero(dim, dim);
        for (std::size_t t = 0; t < spec.weights.size(); ++t) {
            const auto& triple = spec.triples[t];
            acc_i += spec.weights[t] * (triple.w1.op().matrix() * triple.w2.op().matrix());
            acc_j += spec.weights[t] * (triple.w2.op().matrix() * triple.w3.op().matrix());
            acc_int += spec.weights[t] * triple.w2.op().matrix();
        }
        StateDensity d_i = restrict_state(d, regions.I);
        StateDensity d_j = restrict_state(d, regions.J);
        StateDensity d_int = restrict_state(d, regions.intersection());
        worst_restrict = std::max(worst_restrict, (d_i.op().matrix() - acc_i).norm() / std::sqrt(double(dim)));
        worst_restrict = std::max(worst_restrict, (d_j.op().matrix() - acc_j).norm() / std::sqrt(double(dim)));
        worst_restrict =
            std::max(worst_restrict, (d_int.op().matrix() - acc_int).norm() / std::sqrt(double(dim)));

        const double h = shannon_entropy(spec.weights);
        double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0;
        for (std::size_t t = 0; t < spec.weights.size(); ++t) {
            const auto& triple = spec.triples[t];
            sum1 += spec.weights[t] * von_neumann_entropy(triple.w1, eopts);
            sum2 += spec.weights[t] * von_neumann_entropy(triple.w2, eopts);
            sum3 += spec.weights[t] * von_neumann_entropy(triple.w3, eopts);
        }
        SsaReport report = ssa_report(d, regions, eopts);
        worst_decomp = std::max(worst_decomp, std::abs(report.s_union - (h + sum1 + sum2 + sum3)));
        worst_decomp = std::max(worst_decomp, std::abs(report.s_i - (h + sum1 + sum2)));
        worst_decomp = std::max(worst_decomp, std::abs(report.s_j - (h + sum2 + sum3)));
        worst_decomp = std::max(worst_decomp, std::abs(report.s_intersection - (h + sum2)));
        worst_gap4 = std::max(worst_gap4, std::abs(report.gap));
        if (report.equality_residual) {
            ++faithful4;
            worst_residual4 = std::max(worst_residual4, *report.equality_residual);
        }

        if (odd_cross_witness(d, regions).found) witness4_clean = false;
    }
    check.boolean("prop4_witness_false", witness4_clean, "no odd-odd cross terms in mixtures");
    check.residual("prop4_restriction_identities", worst_restrict, 1e-10);
    check.residual("prop4_entropy_decomposition", worst_decomp, 1e-8);
    check.residual("prop4_gap", worst_gap4, 1e-8);
    check.residual("prop4_residual_faithful", worst_residual4, 1e-6,
                   std::to_string(faithful4) + " faithful members");

    // Monomial family: commutation chain, the key product identity, saturation.
    double worst_comm = 0.0;
    double worst_key = 0.0;
    double worst_gap5 = 0.0;
    double worst_residual5 = 0.0;
    int valid5 = 0;
    for (int s = 0; s < family_samples; ++s) {
        const int n = 3 + static_cast<int>(rng.raw() % static_cast<std::uint64_t>(std::max(1, max_n - 2)));
        ModeSet i_set = random_subset(n, rng, true);
        ModeSet j_set = random_subset(n, rng, true);
        RegionPair regions(i_set, j_set);
        const bool faithful = s % 2 == 0;
        Prop5Spec spec = sample_prop5_spec(regions, rng.raw(), faithful);
        Prop5Result built = build_prop5_state(spec);
        if (!built.state) continue;
        ++valid5;
        const StateDensity& d = *built.state;
        StateDensity d_i = restrict_state(d, regions.I);
        StateDensity d_j = restrict_state(d, regions.J);
        StateDensity d_int = restrict_state(d, regions.intersection());
        worst_comm = std::max(worst_comm, commutator_norm(d_i.op(), d_j.op()));
        worst_comm = std::max(worst_comm, commutator_norm(d.op(), d_int.op()));
        worst_key = std::max(worst_key, (d.op() * d_int.op() - d_i.op() * d_j.op()).hs_norm());
        SsaReport report = ssa_report(d, regions, eopts);
        worst_gap5 = std::max(worst_gap5, std::abs(report.gap));
        if (faithful && report.equality_residual) {
            worst_residual5 = std::max(worst_residual5, *report.equality_residual);
        }
    }
    check.residual("prop5_commutation_chain", worst_comm, 1e-10,
                   std::to_string(valid5) + " valid built states");
    check.residual("prop5_product_identity", worst_key, 1e-9);
    check.residual("prop5_gap", worst_gap5, 1e-8);
    check.residual("prop5_residual_faithful", worst_residual5, 1e-6);

    // Headline four-mode example: non-separable witness with exact saturation.
    {
        const int n = 4;
        RegionPair regions(ModeSet(n, {1, 2, 3}), ModeSet(n, {3, 4}));
        std::vector<MonomialTermSpec> terms;
        terms.emplace_back(1.0, Monomial{}, Monomial{}, ModeSet(n));
        terms.emplace_back(0.8, Monomial::parse("a1"), Monomial::parse("a3"), ModeSet(n, {3}));
        Prop5Result built = build_prop5_state(Prop5Spec(std::move(terms), Monomial{}, regions));
        bool ok = built.state.has_value();
        double gap = 1.0;
        bool witness_found = false;
        if (ok) {
            SsaReport report = ssa_report(*built.state, regions, eopts);
            gap = report.gap;
            witness_found = odd_cross_witness(*built.state, regions).found;
        }
        check.boolean("prop5_headline_valid", ok);
        check.residual("prop5_headline_gap", std::abs(gap), 1e-8);
        check.boolean("prop5_headline_witness", witness_found, "odd-odd cross term present");
    }

    // Product-extension gate: refusal for two non-even marginals, recovery otherwise.
    {
        const int n = 3;
        const ModeSet r1(n, {1});
        const ModeSet r2(n, {2});
        const ModeSet r3(n, {3});
        CarOperator odd1 =
            CarOperator::identity(n) + 0.5 * (annihilator(1, n) + creator(1, n));
        CarOperator odd2 =
            CarOperator::identity(n) + 0.5 * (annihilator(2, n) + creator(2, n));
        StateDensity non_even_1(odd1, r1);
        StateDensity non_even_2(odd2, r2);
        bool refused = false;
        try {
            product_extension({non_even_1, non_even_2});
        } catch (const std::invalid_argument&) {
            refused = true;
        }
        check.boolean("theorem3_refusal", refused, "two non-even marginals rejected");

        StateDensity even3 = random_even_faithful_state(r3, opts.seed + 31, 1e-3);
        StateDensity joint = product_extension({non_even_1, even3});
        double worst_roundtrip =
            (restrict_state(joint, r1).op() - non_even_1.op()).hs_norm();
        worst_roundtrip = std::max(worst_roundtrip,
                                   (restrict_state(joint, r3).op() - even3.op()).hs_norm());
        check.residual("theorem3_roundtrip", worst_roundtrip, 1e-10, "one non-even marginal");
    }

    // Odd monomials are traceless; products of disjoint odd elements too.
    {
        double worst = 0.0;
        const int n = std::min(max_n, 4);
        for (const auto& m : all_monomials(n)) {
            if (m.parity() == Parity::Odd) worst = std::max(worst, std::abs(tau(monomial_matrix(m, n))));
        }
        worst = std::max(worst, std::abs(tau(monomial_matrix(Monomial::parse("a1 a2"), 2))));
        check.residual("vanishing_odd_traces", worst, 1e-12);
    }

    // Deterministic seeded sampling.
    {
        const ModeSet region = ModeSet::full(3);
        StateDensity first = random_faithful_state(region, opts.seed + 41, 1e-4);
        StateDensity second = random_faithful_state(region, opts.seed + 41, 1e-4);
        check.residual("random_state_determinism", (first.op() - second.op()).max_abs(), 0.0);
        check.boolean("random_state_floor",
                      first.validation().min_eigenvalue >= 1e-4 - 1e-15, "proper spectrum above floor");
    }

    return results;
}

std::vector<PropertyResult> verify_all(const VerifyOptions& opts) {
    std::vector<PropertyResult> results = verify_core(opts);
    auto append = [&results](std::vector<PropertyResult> part) {
        results.insert(results.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    };
    append(verify_expect(opts));
    append(verify_entropy(opts));
    append(verify_families(opts));
    return results;
}

void print_results(std::ostream& out, const std::vector<PropertyResult>& results) {
    for (const auto& r : results) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "[%s] %-42s worst %.3e  (tol %.1e)%s%s\n",
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.threshold,
                      r.note.empty() ? "" : "  ", r.note.c_str());
        out << buf;
    }
}

bool all_pass(const std::vector<PropertyResult>& results) {
    for (const auto& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

} // namespace car
