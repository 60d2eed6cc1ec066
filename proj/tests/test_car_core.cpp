#include <catch2/catch_amalgamated.hpp>

#include "car/car_algebra.hpp"
#include "car/mode_set.hpp"
#include "car/monomial.hpp"
#include "car/rng.hpp"
#include "oracles.hpp"

using namespace car;

TEST_CASE("one-mode annihilator is the off-diagonal unit") {
    CarOperator a = annihilator(1, 1);
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 1) = 1.0;
    REQUIRE((a.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("CAR relations hold exactly up to six modes") {
    for (int n = 1; n <= 6; ++n) {
        for (int i = 1; i <= n; ++i) {
            for (int j = 1; j <= n; ++j) {
                CarOperator ai = annihilator(i, n);
                CarOperator aj = annihilator(j, n);
                CarOperator anti = ai * aj + aj * ai;
                REQUIRE(anti.max_abs() <= 1e-12);
                CarOperator mixed = ai * aj.adjoint() + aj.adjoint() * ai;
                if (i == j) mixed -= CarOperator::identity(n);
                REQUIRE(mixed.max_abs() <= 1e-12);
            }
        }
    }
}

TEST_CASE("annihilators match the Kronecker-product oracle") {
    for (int n = 1; n <= 5; ++n) {
        for (int mode = 1; mode <= n; ++mode) {
            Matrix expected = oracles::jw_annihilator(mode, n);
            REQUIRE((annihilator(mode, n).matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("a3 at three modes follows the string construction") {
    CarOperator direct = annihilator(3, 3);
    CarOperator via_string = v_string(2, 3) * matrix_unit(3, 1, 2, 3);
    REQUIRE((direct - via_string).max_abs() == 0.0);
    REQUIRE((direct.matrix() - oracles::jw_annihilator(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("v_string basics") {
    REQUIRE((v_string(0, 3) - CarOperator::identity(3)).max_abs() == 0.0);
    CarOperator v2 = v_string(2, 2);
    REQUIRE((v2 * v2 - CarOperator::identity(2)).max_abs() == 0.0);
    REQUIRE((v2 - v2.adjoint()).max_abs() == 0.0);
    // Global string flips every generator under conjugation.
    for (int n = 1; n <= 4; ++n) {
        CarOperator vn = v_string(n, n);
        for (int j = 1; j <= n; ++j) {
            CarOperator aj = annihilator(j, n);
            REQUIRE((vn * aj * vn + aj).max_abs() == 0.0);
        }
    }
}

TEST_CASE("matrix units: table, projectors, commutation") {
    const int n = 2;
    for (int site = 1; site <= n; ++site) {
        CarOperator a = annihilator(site, n);
        REQUIRE((matrix_unit(site, 1, 1, n) - a * a.adjoint()).max_abs() == 0.0);
        REQUIRE((matrix_unit(site, 2, 2, n) - a.adjoint() * a).max_abs() == 0.0);
        CarOperator sum = matrix_unit(site, 1, 1, n) + matrix_unit(site, 2, 2, n);
        REQUIRE((sum - CarOperator::identity(n)).max_abs() == 0.0);
    }
    for (int j = 1; j <= 2; ++j)
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l)
                for (int m = 1; m <= 2; ++m) {
                    CarOperator u1 = matrix_unit(1, j, k, n);
                    CarOperator u2 = matrix_unit(2, l, m, n);
                    REQUIRE((u1 * u2 - u2 * u1).max_abs() == 0.0);
                    // e_{jk} e_{lm} = delta_{kl} e_{jm} at one site.
                    CarOperator prod = matrix_unit(1, j, k, n) * matrix_unit(1, l, m, n);
                    if (k == l) prod -= matrix_unit(1, j, m, n);
                    REQUIRE(prod.max_abs() == 0.0);
                }
}

TEST_CASE("unit products reproduce the full matrix-unit basis") {
    // Products of per-site units map onto standard tensor-product units.
    const int n = 3;
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int rows[3];
        int cols[3];
        CarOperator prod = CarOperator::identity(n);
        for (int site = 0; site < 3; ++site) {
            rows[site] = rng.uniform_int(1, 2);
            cols[site] = rng.uniform_int(1, 2);
            prod = prod * matrix_unit(site + 1, rows[site], cols[site], n);
        }
        Matrix expected = Matrix::Identity(1, 1);
        for (int site = 0; site < 3; ++site) {
            expected = Eigen::kroneckerProduct(expected, oracles::local_e(rows[site], cols[site])).eval();
        }
        REQUIRE((prod.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("monomial grammar round trip and normal form") {
    Monomial m = Monomial::parse("a1 n2 a3*");
    REQUIRE(m.str() == "a1 n2 a3*");
    REQUIRE(m.length() == 3);
    REQUIRE(Monomial::parse("").is_identity());
    REQUIRE(Monomial::parse("  ").is_identity());
    REQUIRE_THROWS_AS(Monomial::parse("a2 a1"), std::invalid_argument);
    REQUIRE_THROWS_AS(Monomial::parse("a1 a1*"), std::invalid_argument);
    REQUIRE_THROWS_AS(Monomial::parse("b1"), std::invalid_argument);
    REQUIRE_THROWS_AS(Monomial::parse("n1*"), std::invalid_argument);
    REQUIRE_THROWS_AS(Monomial::parse("a0"), std::invalid_argument);
}

TEST_CASE("monomial parity") {
    REQUIRE(Monomial::parse("h1").parity() == Parity::Even);
    REQUIRE(Monomial::parse("a1").parity() == Parity::Odd);
    // a1 n2 a3: generators a1 and a3 plus an even composite factor.
    Monomial m = Monomial::parse("a1 n2 a3");
    REQUIRE(m.parity() == Parity::Even);
    // Parity matches the Theta eigenvalue of the matrix.
    const int n = 3;
    CarOperator mat = monomial_matrix(m, n);
    REQUIRE((theta(ModeSet::full(n), mat) - mat).max_abs() == 0.0);
    CarOperator odd = monomial_matrix(Monomial::parse("a1"), n);
    REQUIRE((theta(ModeSet::full(n), odd) + odd).max_abs() == 0.0);
}

TEST_CASE("monomial support") {
    REQUIRE(Monomial::parse("").support(4).empty());
    REQUIRE(Monomial::parse("a1 n2").support(4) == ModeSet(4, {1, 2}));
    REQUIRE(Monomial::parse("h3").support(4) == ModeSet(4, {3}));
}

TEST_CASE("monomial matrices") {
    const int n = 4;
    REQUIRE((monomial_matrix(Monomial{}, n) - CarOperator::identity(n)).max_abs() == 0.0);
    CarOperator expected = annihilator(1, n) * (creator(2, n) * annihilator(2, n));
    REQUIRE((monomial_matrix(Monomial::parse("a1 n2"), n) - expected).max_abs() == 0.0);
    REQUIRE_THROWS_AS(monomial_matrix(Monomial::parse("a5"), n), std::out_of_range);
}

TEST_CASE("graded sign and graded commutation") {
    REQUIRE(graded_sign(Parity::Odd, Parity::Odd) == -1);
    REQUIRE(graded_sign(Parity::Even, Parity::Odd) == 1);
    REQUIRE(graded_sign(Parity::Odd, Parity::Even) == 1);
    REQUIRE(graded_sign(Parity::Even, Parity::Even) == 1);

    // Exhaustive over disjoint-support monomial pairs at three modes.
    const int n = 3;
    std::vector<Monomial> monomials;
    for (int code = 0; code < 125; ++code) {
        int c = code;
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
        monomials.emplace_back(std::move(factors));
    }
    for (const auto& left : monomials) {
        for (const auto& right : monomials) {
            if (!(left.support(n).intersect(right.support(n)).empty())) continue;
            CarOperator lm = monomial_matrix(left, n);
            CarOperator rm = monomial_matrix(right, n);
            const double sign = graded_sign(left.parity(), right.parity());
            REQUIRE((lm * rm - sign * (rm * lm)).max_abs() == 0.0);
            // Trace product property on the same pairs.
            REQUIRE(std::abs(tau(lm * rm) - tau(lm) * tau(rm)) <= 1e-12);
        }
    }
}

TEST_CASE("tau basics") {
    REQUIRE(tau(CarOperator::identity(3)) == Complex(1.0, 0.0));
    for (int n = 1; n <= 4; ++n) {
        for (int i = 1; i <= n; ++i) {
            CarOperator a = annihilator(i, n);
            REQUIRE(std::abs(tau(a * a.adjoint()) - Complex(0.5, 0.0)) <= 1e-12);
            REQUIRE(std::abs(tau(a)) == 0.0);
        }
    }
    // Tracial under random operators.
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        CarOperator x(3, oracles::random_matrix(8, rng));
        CarOperator y(3, oracles::random_matrix(8, rng));
        REQUIRE(std::abs(tau(x * y) - tau(y * x)) <= 1e-12);
    }
}

TEST_CASE("theta automorphism") {
    const int n = 2;
    CarOperator a1a2 = annihilator(1, n) * annihilator(2, n);
    SECTION("empty set is the identity map") {
        Rng rng(7);
        CarOperator x(n, oracles::random_matrix(4, rng));
        REQUIRE((theta(ModeSet(n), x) - x).max_abs() == 0.0);
    }
    SECTION("full flip fixes even elements") {
        REQUIRE((theta(ModeSet::full(n), a1a2) - a1a2).max_abs() == 0.0);
    }
    SECTION("single-mode flip negates a1 a2") {
        REQUIRE((theta(ModeSet(n, {1}), a1a2) + a1a2).max_abs() == 0.0);
    }
    SECTION("matches conjugation by the explicit sign operator") {
        ModeSet flip(n, {2});
        CarOperator u = CarOperator::identity(n) - 2.0 * (creator(2, n) * annihilator(2, n));
        Rng rng(9);
        CarOperator x(n, oracles::random_matrix(4, rng));
        REQUIRE((theta(flip, x) - u * x * u).max_abs() <= 1e-14);
    }
}

TEST_CASE("even part expectation") {
    const int n = 2;
    CarOperator a1 = annihilator(1, n);
    REQUIRE(even_part(a1).max_abs() == 0.0);
    CarOperator h1 = a1 * a1.adjoint();
    REQUIRE((even_part(h1) - h1).max_abs() == 0.0);
    CarOperator mixed = a1 + a1 * annihilator(2, n);
    REQUIRE((even_part(mixed) - a1 * annihilator(2, n)).max_abs() == 0.0);
}

TEST_CASE("mode set algebra") {
    ModeSet i(5, {1, 2, 3});
    ModeSet j(5, {3, 4});
    REQUIRE(i.unite(j) == ModeSet(5, {1, 2, 3, 4}));
    REQUIRE(i.intersect(j) == ModeSet(5, {3}));
    REQUIRE(i.minus(j) == ModeSet(5, {1, 2}));
    REQUIRE(j.minus(i) == ModeSet(5, {4}));
    REQUIRE(i.complement() == ModeSet(5, {4, 5}));
    REQUIRE(ModeSet::parse(5, "2, 4") == ModeSet(5, {2, 4}));
    REQUIRE(ModeSet::parse(5, "") == ModeSet(5));
    REQUIRE(ModeSet(5, {3, 1, 3}).str() == "1,3");
    REQUIRE_THROWS_AS(ModeSet(5, {6}), std::invalid_argument);
    REQUIRE_THROWS_AS(ModeSet(3, {0}), std::invalid_argument);
    REQUIRE_THROWS_AS(i.unite(ModeSet(4, {1})), std::invalid_argument);

    RegionPair pair(i, j);
    REQUIRE(pair.union_set().size() == 4);
    REQUIRE(pair.intersection() == ModeSet(5, {3}));
    REQUIRE_THROWS_AS(RegionPair(ModeSet(3), ModeSet(4)), std::invalid_argument);
}

TEST_CASE("operator arithmetic guards") {
    REQUIRE_THROWS_AS(annihilator(0, 3), std::out_of_range);
    REQUIRE_THROWS_AS(annihilator(4, 3), std::out_of_range);
    REQUIRE_THROWS_AS(v_string(-1, 3), std::out_of_range);
    REQUIRE_THROWS_AS(matrix_unit(1, 0, 1, 3), std::out_of_range);
    REQUIRE_THROWS_AS(CarOperator(2, Matrix::Zero(3, 3)), std::invalid_argument);
    CarOperator a = CarOperator::identity(2);
    CarOperator b = CarOperator::identity(3);
    REQUIRE_THROWS_AS(a + b, std::invalid_argument);
    REQUIRE_THROWS_AS(a * b, std::invalid_argument);
    REQUIRE_THROWS_AS(theta(ModeSet(3), a), std::invalid_argument);
}
