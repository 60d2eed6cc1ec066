// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "car/car_algebra.hpp"
#include "car/entropy.hpp"
#include "car/rng.hpp"
#include "car/spectral.hpp"
#include "car/state_io.hpp"
#include "car/states.hpp"
#include "car/subalgebra.hpp"
#include "car/verify.hpp"
#include "oracles.hpp"

using namespace car;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

std::vector<Monomial> all_monomials(int n) {
    std::vector<Monomial> out;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
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

Monomial random_monomial_on(const ModeSet& support_pool, Rng& rng) {
    std::vector<MonomialFactor> factors;
    for (int mode : support_pool.indices()) {
        switch (rng.uniform_int(0, 4)) {
            case 0: break;
            case 1: factors.push_back({mode, FactorKind::Annihilate}); break;
            case 2: factors.push_back({mode, FactorKind::Create}); break;
            case 3: factors.push_back({mode, FactorKind::Hole}); break;
            case 4: factors.push_back({mode, FactorKind::Occupation}); break;
        }
    }
    return Monomial(std::move(factors));
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

CarOperator random_member_of(const ModeSet& region, Rng& rng) {
    auto basis = MonomialBasis::get(region);
    Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(basis->size()));
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) = rng.cgaussian();
    return basis->assemble(coeffs);
}

// Criterion 1: exact algebra identities for n = 1..6 in under 10 seconds.
Outcome criterion_1() {
    const auto start = Clock::now();
    double worst = 0.0;
    Rng rng(101);
    for (int n = 1; n <= 6; ++n) {
        const CarOperator id = CarOperator::identity(n);
        std::vector<CarOperator> a;
        for (int i = 1; i <= n; ++i) a.push_back(annihilator(i, n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                worst = std::max(worst, (a[i] * a[j] + a[j] * a[i]).max_abs());
                CarOperator mixed = a[i] * a[j].adjoint() + a[j].adjoint() * a[i];
                if (i == j) mixed -= id;
                worst = std::max(worst, mixed.max_abs());
            }
        }
        for (int s1 = 1; s1 <= n; ++s1) {
            for (int s2 = s1 + 1; s2 <= n; ++s2) {
                for (int j = 1; j <= 2; ++j)
                    for (int k = 1; k <= 2; ++k)
                        for (int l = 1; l <= 2; ++l)
                            for (int m = 1; m <= 2; ++m) {
                                CarOperator u1 = matrix_unit(s1, j, k, n);
                                CarOperator u2 = matrix_unit(s2, l, m, n);
                                worst = std::max(worst, (u1 * u2 - u2 * u1).max_abs());
                            }
            }
        }
        // Graded signs and trace products: exhaustive through n = 4, dense
        // random disjoint pairs at n = 5, 6.
        if (n <= 4) {
            std::vector<Monomial> monomials = all_monomials(n);
            std::vector<CarOperator> mats;
            std::vector<std::uint32_t> masks;
            for (const auto& m : monomials) {
                mats.push_back(monomial_matrix(m, n));
                masks.push_back(m.support(n).mask());
            }
            for (std::size_t i = 0; i < monomials.size(); ++i) {
                for (std::size_t j = 0; j < monomials.size(); ++j) {
                    if (masks[i] & masks[j]) continue;
                    const double sign = graded_sign(monomials[i].parity(), monomials[j].parity());
                    worst = std::max(worst, (mats[i] * mats[j] - sign * (mats[j] * mats[i])).max_abs());
                    worst = std::max(worst,
                                     std::abs(tau(mats[i] * mats[j]) - tau(mats[i]) * tau(mats[j])));
                }
            }
        } else {
            for (int s = 0; s < 800; ++s) {
                ModeSet left = random_subset(n, rng, true);
                ModeSet right = left.complement();
                if (right.empty()) continue;
                Monomial lm = random_monomial_on(left, rng);
                Monomial rm = random_monomial_on(right, rng);
                CarOperator ml = monomial_matrix(lm, n);
                CarOperator mr = monomial_matrix(rm, n);
                const double sign = graded_sign(lm.parity(), rm.parity());
                worst = std::max(worst, (ml * mr - sign * (mr * ml)).max_abs());
                worst = std::max(worst, std::abs(tau(ml * mr) - tau(ml) * tau(mr)));
            }
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= 1e-12 && elapsed < 10.0;
    return {pass, "worst residual " + fmt(worst) + ", " + fmt(elapsed) + " s"};
}

// Criterion 2: conditional-expectation laws over >= 100 random (X, J1, J2),
// the partial-trace oracle on initial segments, and the worked examples.
Outcome criterion_2() {
    Rng rng(202);
    double worst = 0.0;
    int draws = 0;
    for (int s = 0; s < 120; ++s) {
        const int n = 2 + static_cast<int>(rng.raw() % 4);  // 2..5
        const ModeSet full = ModeSet::full(n);
        ModeSet j1 = random_subset(n, rng, false);
        ModeSet j2 = random_subset(n, rng, true);
        CarOperator x(n, oracles::random_matrix(Eigen::Index(1) << n, rng));
        ++draws;

        CarOperator member = random_member_of(j2, rng);
        worst = std::max(worst, (conditional_expectation(member, full, j1) -
                                 conditional_expectation(member, j2, j1.intersect(j2)))
                                    .hs_norm());
        CarOperator via = conditional_expectation(conditional_expectation(x, full, j1), j1, j1.intersect(j2));
        worst = std::max(worst, (via - conditional_expectation(x, full, j1.intersect(j2))).hs_norm());
        worst = std::max(worst, (conditional_expectation(conditional_expectation(x, full, j1), full,
                                                         j1.intersect(j2)) -
                                 conditional_expectation(x, full, j1.intersect(j2)))
                                    .hs_norm());
        worst = std::max(worst, std::abs(tau(conditional_expectation(x, full, j1)) - tau(x)));
        CarOperator a = random_member_of(j1, rng);
        CarOperator b = random_member_of(j1, rng);
        worst = std::max(worst, (conditional_expectation(a * x * b, full, j1) -
                                 a * conditional_expectation(x, full, j1) * b)
                                    .hs_norm());
        CarOperator x_outer = random_member_of(j2, rng);
        worst = std::max(worst, (f2_after_f1(j2, j1.intersect(j2), x_outer) -
                                 conditional_expectation(x_outer, j2, j1.intersect(j2)))
                                    .hs_norm());
    }
    // Partial-trace oracle on initial segments.
    for (int n = 2; n <= 5; ++n) {
        for (int keep = 1; keep < n; ++keep) {
            std::vector<int> head_modes;
            for (int m = 1; m <= keep; ++m) head_modes.push_back(m);
            ModeSet head(n, head_modes);
            CarOperator x(n, oracles::random_matrix(Eigen::Index(1) << n, rng));
            CarOperator projected = conditional_expectation(x, ModeSet::full(n), head);
            Matrix reduced =
                oracles::partial_trace_trailing(x.matrix(), n, keep) / double(Eigen::Index(1) << (n - keep));
            Matrix embedded = Eigen::kroneckerProduct(
                reduced, Matrix::Identity(Eigen::Index(1) << (n - keep), Eigen::Index(1) << (n - keep)));
            worst = std::max(worst, (projected.matrix() - embedded).cwiseAbs().maxCoeff());
        }
    }
    // Worked examples, exact.
    double exact = 0.0;
    {
        const int n = 4;
        ModeSet outer = ModeSet::full(n);
        ModeSet inner(n, {1, 2});
        exact = std::max(exact,
                         conditional_expectation(monomial_matrix(Monomial::parse("a1 n2 a3* a4"), n), outer,
                                                 inner)
                             .max_abs());
        exact = std::max(exact, (conditional_expectation(monomial_matrix(Monomial::parse("a1 n2 h3 n4"), n),
                                                         outer, inner) -
                                 0.25 * monomial_matrix(Monomial::parse("a1 n2"), n))
                                    .max_abs());
    }
    const bool pass = worst <= 1e-10 && exact <= 1e-12 && draws >= 100;
    return {pass, "laws " + fmt(worst) + " over " + std::to_string(draws) + " draws, worked examples " +
                      fmt(exact)};
}

// Criterion 3: SSA gap <= 1e-9 for 200 seeded random faithful states per
// n = 2..6 with random region splits, in under two minutes.
Outcome criterion_3() {
    const auto start = Clock::now();
    double worst_gap = -1e300;
    int count = 0;
    for (int n = 2; n <= 6; ++n) {
        Rng rng(3000 + static_cast<std::uint64_t>(n));
        for (int s = 0; s < 200; ++s) {
            ModeSet i_set = random_subset(n, rng, true);
            ModeSet j_set = random_subset(n, rng, true);
            RegionPair regions(i_set, j_set);
            StateDensity d = random_faithful_state(regions.union_set(), rng.raw(), 1e-6);
            EntropyOptions opts;
            opts.faithfulness_floor = 1.0;  // gap only; skip the residual work here
            SsaReport report = ssa_report(d, regions, opts);
            worst_gap = std::max(worst_gap, report.gap);
            ++count;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst_gap <= 1e-9 && elapsed < 120.0 && count == 1000;
    return {pass, "largest gap " + fmt(worst_gap) + " over " + std::to_string(count) + " states, " +
                      fmt(elapsed) + " s"};
}

// Criterion 4: saturating families vs generic strictness.
Outcome criterion_4() {
    Rng rng(404);
    const EntropyOptions opts;

    // Proposition 4 mixtures: gap always; residual on the faithful members.
    double worst_gap4 = 0.0;
    double worst_res4 = 0.0;
    int prop4_count = 0;
    int prop4_faithful = 0;
    const std::vector<std::pair<std::vector<int>, std::vector<int>>> region_choices = {
        {{1, 2}, {2, 3}}, {{1, 2, 3}, {3, 4}}, {{1, 2, 3}, {2, 3, 4}}, {{1, 2, 3, 4}, {4, 5}},
        {{1, 2, 3}, {3, 4, 5}}, {{1, 2, 3, 4}, {3, 4, 5, 6}},
    };
    for (int s = 0; s < 54; ++s) {
        const auto& [iv, jv] = region_choices[static_cast<std::size_t>(s) % region_choices.size()];
        int n = 0;
        for (int m : iv) n = std::max(n, m);
        for (int m : jv) n = std::max(n, m);
        RegionPair regions(ModeSet(n, iv), ModeSet(n, jv));
        const int terms = (s % 3 == 0) ? 1 : 1 + s % 3;  // mix of faithful and mixed
        MixtureSpec spec = sample_prop4_spec(regions, terms, rng.raw());
        StateDensity d = build_prop4_state(spec);
        SsaReport report = ssa_report(d, regions, opts);
        worst_gap4 = std::max(worst_gap4, std::abs(report.gap));
        if (report.equality_residual) {
            ++prop4_faithful;
            worst_res4 = std::max(worst_res4, *report.equality_residual);
        }
        ++prop4_count;
    }

    // Faithful Proposition 5 variants.
    double worst_gap5 = 0.0;
    double worst_res5 = 0.0;
    int prop5_count = 0;
    for (int s = 0; s < 54; ++s) {
        const auto& [iv, jv] = region_choices[static_cast<std::size_t>(s) % region_choices.size()];
        int n = 0;
        for (int m : iv) n = std::max(n, m);
        for (int m : jv) n = std::max(n, m);
        RegionPair regions(ModeSet(n, iv), ModeSet(n, jv));
        Prop5Spec spec = sample_prop5_spec(regions, rng.raw(), true);
        Prop5Result built = build_prop5_state(spec);
        if (!built.state) continue;
        SsaReport report = ssa_report(*built.state, regions, opts);
        worst_gap5 = std::max(worst_gap5, std::abs(report.gap));
        if (!report.equality_residual) continue;
        worst_res5 = std::max(worst_res5, *report.equality_residual);
        ++prop5_count;
    }

    // Generic strictness: 200 seeded random faithful states.
    double max_gap_generic = -1e300;
    double min_res_generic = 1e300;
    int generic_count = 0;
    for (int s = 0; s < 200; ++s) {
        const int n = 3 + s % 3;  // 3..5
        // Overlapping, non-nested split: I = {1..k+1}, J = {k+1..n}.
        const int split = n / 2;
        std::vector<int> iv, jv;
        for (int m = 1; m <= split + 1; ++m) iv.push_back(m);
        for (int m = split + 1; m <= n; ++m) jv.push_back(m);
        RegionPair regions(ModeSet(n, iv), ModeSet(n, jv));
        StateDensity d = random_faithful_state(regions.union_set(), rng.raw(), 1e-6);
        SsaReport report = ssa_report(d, regions, opts);
        max_gap_generic = std::max(max_gap_generic, report.gap);
        if (report.equality_residual) {
            min_res_generic = std::min(min_res_generic, *report.equality_residual);
        }
        ++generic_count;
    }

    const bool pass = prop4_count >= 50 && prop5_count >= 50 && worst_gap4 <= 1e-8 &&
                      worst_gap5 <= 1e-8 && worst_res4 <= 1e-6 && worst_res5 <= 1e-6 &&
                      prop4_faithful >= 18 && generic_count >= 200 && max_gap_generic < -1e-6 &&
                      min_res_generic > 1e-3;
    return {pass, "families gap " + fmt(std::max(worst_gap4, worst_gap5)) + " residual " +
                      fmt(std::max(worst_res4, worst_res5)) + " (" + std::to_string(prop4_faithful) + "/" +
                      std::to_string(prop4_count) + " faithful mixtures, " + std::to_string(prop5_count) +
                      " monomial variants); generic gap<" + fmt(max_gap_generic) + " residual>" +
                      fmt(min_res_generic)};
}

// Criterion 5: the relative-entropy pivot identity and the telescoping chain.
Outcome criterion_5() {
    Rng rng(505);
    const EntropyOptions opts;
    double worst_pivot = 0.0;
    double worst_tele = 0.0;
    for (int s = 0; s < 60; ++s) {
        const int n = 3 + static_cast<int>(rng.raw() % 3);  // 3..5
        ModeSet i_set = random_subset(n, rng, true);
        ModeSet j_set = random_subset(n, rng, true);
        RegionPair regions(i_set, j_set);
        const ModeSet region = regions.union_set();
        StateDensity d = random_faithful_state(region, rng.raw(), 1e-6);
        SsaReport report = ssa_report(d, regions, opts);

        StateDensity d_i(restrict_state(d, regions.I).op(), region);
        StateDensity d_j(restrict_state(d, regions.J).op(), region);
        StateDensity d_int(restrict_state(d, regions.intersection()).op(), region);
        const double lhs = relative_entropy(d, d_i, opts);
        const double rhs = relative_entropy(d_j, d_int, opts);
        worst_pivot = std::max(worst_pivot, std::abs((lhs - rhs) + report.gap));

        CarOperator transported = t_map(d_int.op(), d_j.op());
        worst_tele = std::max(worst_tele, std::abs(tau(d_i.op() * transported).real() - 1.0));
    }
    const bool pass = worst_pivot <= 1e-8 && worst_tele <= 1e-8;
    return {pass, "pivot " + fmt(worst_pivot) + ", telescoping " + fmt(worst_tele)};
}

// Criterion 6: the trace inequality at dimension 8, plus the T map against
// quadrature and the scalar integral identity.
Outcome criterion_6() {
    Rng rng(606);
    const int n = 3;
    double min_gap = 1e300;
    for (int s = 0; s < 500; ++s) {
        CarOperator a(n, 0.5 * oracles::random_hermitian(8, rng));
        CarOperator b(n, 0.5 * oracles::random_hermitian(8, rng));
        CarOperator c(n, 0.5 * oracles::random_hermitian(8, rng));
        min_gap = std::min(min_gap, lieb_inequality_gap(a, b, c));
    }
    double worst_commuting = 0.0;
    for (int s = 0; s < 50; ++s) {
        Matrix da = Matrix::Zero(8, 8), db = Matrix::Zero(8, 8), dc = Matrix::Zero(8, 8);
        for (Eigen::Index i = 0; i < 8; ++i) {
            da(i, i) = rng.uniform(-1.0, 1.0);
            db(i, i) = rng.uniform(-1.0, 1.0);
            dc(i, i) = rng.uniform(-1.0, 1.0);
        }
        worst_commuting = std::max(worst_commuting, std::abs(lieb_inequality_gap(
                                                        CarOperator(n, da), CarOperator(n, db),
                                                        CarOperator(n, dc))));
    }
    double worst_quad = 0.0;
    for (int s = 0; s < 10; ++s) {
        Matrix a = oracles::random_positive(8, rng) + 0.3 * Matrix::Identity(8, 8);
        Matrix k = oracles::random_hermitian(8, rng);
        worst_quad = std::max(worst_quad,
                              (t_map(a, k) - oracles::t_map_quadrature(a, k, 1e-10)).cwiseAbs().maxCoeff());
    }
    double worst_scalar = 0.0;
    for (double lambda : {0.05, 0.3, 1.0, 4.0, 11.0}) {
        Matrix a(1, 1), unit(1, 1);
        a(0, 0) = lambda;
        unit(0, 0) = 1.0;
        worst_scalar = std::max(worst_scalar,
                                std::abs((lambda * lambda * t_map(a, unit)(0, 0)).real() - lambda));
    }
    const bool pass =
        min_gap >= -1e-9 && worst_commuting <= 1e-10 && worst_quad <= 1e-6 && worst_scalar <= 1e-12;
    return {pass, "min gap " + fmt(min_gap) + ", commuting " + fmt(worst_commuting) + ", quadrature " +
                      fmt(worst_quad) + ", scalar " + fmt(worst_scalar)};
}

// Criterion 7: commutation identities on every valid built monomial state and
// the headline non-separable example.
Outcome criterion_7() {
    Rng rng(707);
    const EntropyOptions opts;
    double worst_comm = 0.0;
    double worst_key = 0.0;
    int valid = 0;
    for (int s = 0; s < 60; ++s) {
        const int n = 3 + static_cast<int>(rng.raw() % 3);
        ModeSet i_set = random_subset(n, rng, true);
        ModeSet j_set = random_subset(n, rng, true);
        RegionPair regions(i_set, j_set);
        Prop5Spec spec = sample_prop5_spec(regions, rng.raw(), s % 2 == 0);
        Prop5Result built = build_prop5_state(spec);
        if (!built.state) continue;
        ++valid;
        const StateDensity& d = *built.state;
        StateDensity d_i = restrict_state(d, regions.I);
        StateDensity d_j = restrict_state(d, regions.J);
        StateDensity d_int = restrict_state(d, regions.intersection());
        worst_comm = std::max(worst_comm, (d_i.op() * d_j.op() - d_j.op() * d_i.op()).hs_norm());
        worst_comm = std::max(worst_comm, (d.op() * d_int.op() - d_int.op() * d.op()).hs_norm());
        worst_key = std::max(worst_key, (d.op() * d_int.op() - d_i.op() * d_j.op()).hs_norm());
    }

    // Headline: I = {1,2,3}, J = {3,4}, D = 1 + c (a1 a3 + h.c.).
    const int n = 4;
    RegionPair regions(ModeSet(n, {1, 2, 3}), ModeSet(n, {3, 4}));
    std::vector<MonomialTermSpec> terms;
    terms.emplace_back(1.0, Monomial{}, Monomial{}, ModeSet(n));
    terms.emplace_back(0.8, Monomial::parse("a1"), Monomial::parse("a3"), ModeSet(n, {3}));
    Prop5Result built = build_prop5_state(Prop5Spec(std::move(terms), Monomial{}, regions));
    bool headline = false;
    double headline_gap = 1.0;
    if (built.state) {
        SsaReport report = ssa_report(*built.state, regions, opts);
        headline_gap = std::abs(report.gap);
        headline = odd_cross_witness(*built.state, regions).found && headline_gap <= 1e-8;
    }
    const bool pass = valid >= 30 && worst_comm <= 1e-10 && worst_key <= 1e-9 && headline;
    return {pass, "commutators " + fmt(worst_comm) + ", product identity " + fmt(worst_key) + " over " +
                      std::to_string(valid) + " states; headline witness with gap " + fmt(headline_gap)};
}

// Criterion 8: the product-extension gate.
Outcome criterion_8() {
    const int n = 4;
    CarOperator odd1 = CarOperator::identity(n) + 0.5 * (annihilator(1, n) + creator(1, n));
    CarOperator odd2 = CarOperator::identity(n) + 0.5 * (annihilator(3, n) + creator(3, n));
    StateDensity non_even_1(odd1, ModeSet(n, {1}));
    StateDensity non_even_2(odd2, ModeSet(n, {3}));
    bool refused = false;
    try {
        product_extension({non_even_1, non_even_2});
    } catch (const std::invalid_argument&) {
        refused = true;
    }

    double worst = 0.0;
    Rng rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        StateDensity even_a = random_even_faithful_state(ModeSet(n, {2}), rng.raw(), 1e-3);
        StateDensity even_b = random_even_faithful_state(ModeSet(n, {3, 4}), rng.raw(), 1e-4);
        StateDensity joint = product_extension({non_even_1, even_a, even_b});
        worst = std::max(worst, (restrict_state(joint, non_even_1.region()).op() - non_even_1.op()).hs_norm());
        worst = std::max(worst, (restrict_state(joint, even_a.region()).op() - even_a.op()).hs_norm());
        worst = std::max(worst, (restrict_state(joint, even_b.region()).op() - even_b.op()).hs_norm());
    }
    const bool pass = refused && worst <= 1e-10;
    return {pass, std::string("refusal ") + (refused ? "ok" : "MISSING") + ", round trips " + fmt(worst)};
}

// Criterion 9: end-to-end CLI with byte-stable reports.
Outcome criterion_9() {
    const auto start = Clock::now();
    const char* env = std::getenv("CAR_CLI_PATH");
    const std::string cli = env ? env : "./tools/car-entropy";
    {
        std::ifstream probe(cli);
        if (!probe) return {false, "CLI binary not found at " + cli};
    }
    auto run_chain = [&](const std::string&) -> std::pair<bool, std::string> {
        const std::string state = "acceptance_state.txt";
        const std::string log = "acceptance_log.txt";
        const std::string gen = cli + " gen random n=4 I=1,2,3 J=3,4 seed=42 out=" + state + " > " + log +
                                " 2>&1";
        const std::string ssa = cli + " ssa " + state + " I=1,2,3 J=3,4 --witness >> " + log + " 2>&1";
        const std::string verify = cli + " verify all n=4 samples=48 seed=42 >> " + log + " 2>&1";
        if (std::system(gen.c_str()) != 0) return {false, ""};
        if (std::system(ssa.c_str()) != 0) return {false, ""};
        if (std::system(verify.c_str()) != 0) return {false, ""};
        std::ifstream in(log);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        std::remove(state.c_str());
        std::remove(log.c_str());
        return {true, buffer.str()};
    };
    auto first = run_chain("a");
    auto second = run_chain("b");
    const double elapsed = seconds_since(start);
    const bool pass = first.first && second.first && first.second == second.second &&
                      !first.second.empty() && elapsed < 300.0;
    return {pass, std::string(first.first && second.first ? "exit codes 0" : "nonzero exit") +
                      (first.second == second.second ? ", byte-stable" : ", REPORTS DIFFER") + ", " +
                      fmt(elapsed) + " s"};
}

} // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "CAR core identities (n = 1..6)", criterion_1},
        {2, "conditional expectation laws and worked examples", criterion_2},
        {3, "SSA over seeded random faithful states", criterion_3},
        {4, "equality criterion: saturating families vs generic states", criterion_4},
        {5, "equality proof chain: pivot identity and telescoping", criterion_5},
        {6, "trace inequality, T map quadrature, scalar identity", criterion_6},
        {7, "monomial-family identities and the non-separable example", criterion_7},
        {8, "product-extension gate", criterion_8},
        {9, "end-to-end CLI byte stability", criterion_9},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    bool all_ok = true;
    for (const auto& criterion : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end()) {
            continue;
        }
        Outcome outcome = criterion.run();
        all_ok = all_ok && outcome.pass;
        std::printf("%s criterion %d: %s (%s)\n", outcome.pass ? "PASS" : "FAIL", criterion.id,
                    criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
